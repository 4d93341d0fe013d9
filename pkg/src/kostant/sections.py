"""Integral Kostant sections, excluded primes and adjoint-quotient invariants.

The section Xi is a graded complement of [Y, n^-] inside b^-, read off from
the Smith normal form of the negative-degree blocks of ad Y. The square-free
integer N collects every prime obstructing that complement integrally, plus
the primes dividing the order of the fundamental group of the derived group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chevalley import GradedAdY, StandardRep, build_algebra
from .linalg import (
    charpoly,
    elementary_symmetric_from_charpoly,
    is_prime,
    mat_mul,
    rank_mod_p,
    smith_normal_form,
    val_p,
)
from .roots import RootDatum, fundamental_group_order, center_component_order


class SectionUnavailable(ValueError):
    """The requested prime divides the excluded integer N."""


@dataclass(frozen=True)
class SmithData:
    """Per-degree Smith normal forms of ad Y on the negative weight spaces."""

    degrees: tuple[int, ...]            # source degrees j < 0
    divisors: dict                      # j -> tuple of nonzero divisors
    forms: dict                         # j -> SmithNormalForm of M_j

    def all_divisors(self) -> list[int]:
        out = []
        for j in self.degrees:
            out.extend(self.divisors[j])
        return out


def smith_decompose(graded: GradedAdY) -> SmithData:
    degrees = tuple(j for j in graded.degrees if j < 0)
    divisors = {}
    forms = {}
    for j in degrees:
        block = graded.block(j)
        snf = smith_normal_form(block) if block and block[0] else None
        if snf is None:
            divisors[j] = ()
            forms[j] = None
            continue
        _check_snf(block, snf)
        divisors[j] = tuple(d for d in snf.diagonal if d != 0)
        forms[j] = snf
    return SmithData(degrees, divisors, forms)


def _check_snf(block, snf) -> None:
    left = [list(r) for r in snf.left]
    right = [list(r) for r in snf.right]
    prod = mat_mul(mat_mul(left, block), right)
    for i, row in enumerate(prod):
        for j, x in enumerate(row):
            want = snf.diagonal[i] if i == j and i < len(snf.diagonal) else 0
            if x != want:
                raise AssertionError("Smith transform check failed")
    for a, b in zip(snf.diagonal, snf.diagonal[1:]):
        if a and b and b % a != 0:
            raise AssertionError("Smith divisors are not a divisibility chain")


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def excluded_primes(smith: SmithData, datum: RootDatum) -> int:
    """Square-free N whose primes obstruct the integral complement."""
    primes = set()
    for d in smith.all_divisors():
        primes |= _prime_factors(d)
    primes |= _prime_factors(fundamental_group_order(datum))
    n = 1
    for p in sorted(primes):
        n *= p
    return n


@lru_cache(maxsize=None)
def _graded_and_smith(datum: RootDatum):
    algebra = build_algebra(datum)
    graded = algebra.graded_ad_y()
    smith = smith_decompose(graded)
    return algebra, graded, smith


def excluded_n(datum: RootDatum) -> int:
    _, _, smith = _graded_and_smith(datum)
    return excluded_primes(smith, datum)


def is_n_good(datum: RootDatum, p: int) -> bool:
    """ad Y injective on n^- over F_p (full rank on every negative degree)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    algebra, graded, _ = _graded_and_smith(datum)
    dim_neg = 0
    rank_neg = 0
    for j in graded.degrees:
        if j < 0:
            cols = len(graded.basis_by_degree[j])
            dim_neg += cols
            block = graded.block(j)
            if block and block[0]:
                rank_neg += rank_mod_p(block, p)
    return rank_neg == dim_neg


def is_g_good(datum: RootDatum, p: int) -> bool:
    """ad Y of rank dim G - rk G over F_p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    algebra, graded, _ = _graded_and_smith(datum)
    total = 0
    for j in graded.degrees:
        block = graded.block(j)
        if block and block[0]:
            total += rank_mod_p(block, p)
    return total == algebra.dim - algebra.rank


def is_n_good_closed_form(datum: RootDatum, p: int) -> bool:
    """Type-based closed form: p does not divide N."""
    return excluded_n(datum) % p != 0


def is_g_good_closed_form(datum: RootDatum, p: int) -> bool:
    """n-good, p != 2 for a C factor, p != 3 for a G factor, p coprime to
    the fundamental group and center component orders."""
    rs = datum.root_system
    if not is_n_good_closed_form(datum, p):
        return False
    if p == 2 and rs.has_factor("C"):
        return False
    if p == 3 and rs.has_factor("G"):
        return False
    if fundamental_group_order(datum) % p == 0:
        return False
    if center_component_order(datum) % p == 0:
        return False
    return True


def g_good_excluded_primes(datum: RootDatum) -> list[int]:
    """The finite set of primes that are not g-good, from the closed form."""
    rs = datum.root_system
    primes = _prime_factors(excluded_n(datum))
    if rs.has_factor("C"):
        primes.add(2)
    if rs.has_factor("G"):
        primes.add(3)
    primes |= _prime_factors(fundamental_group_order(datum))
    primes |= _prime_factors(center_component_order(datum))
    return sorted(primes)


# --- the section -------------------------------------------------------------

@dataclass(frozen=True)
class KostantSection:
    """Basis of a graded complement Xi of [Y, n^-] in b^-, over Z[1/N]."""

    excluded_N: int
    xi_basis: tuple            # tuple of integer coordinate vectors (dim G long)
    weights: tuple[int, ...]   # grading degree of each basis vector
    datum: RootDatum = None

    def __len__(self) -> int:
        return len(self.xi_basis)


def build_section(datum: RootDatum) -> KostantSection:
    algebra, graded, smith = _graded_and_smith(datum)
    n = excluded_primes(smith, datum)
    xi = []
    weights = []
    for j in sorted((d for d in graded.degrees if d <= 0), reverse=True):
        target = graded.basis_by_degree[j]
        snf = smith.forms.get(j - 2)
        # rows of the diagonalized block beyond its rank index the cokernel;
        # columns of U^-1 at those rows give the complement in degree j.
        if snf is not None:
            rank_img = len(smith.divisors[j - 2])
            uinv = snf.left_inv
            for row_idx in range(rank_img, len(target)):
                vec = [0] * algebra.dim
                for t, gidx in enumerate(target):
                    vec[gidx] = uinv[t][row_idx]
                xi.append(tuple(vec))
                weights.append(j)
        else:
            for gidx in target:
                vec = [0] * algebra.dim
                vec[gidx] = 1
                xi.append(tuple(vec))
                weights.append(j)
    section = KostantSection(n, tuple(xi), tuple(weights), datum)
    if len(section) != algebra.rank:
        raise AssertionError("complement rank differs from the reductive rank")
    return section


@lru_cache(maxsize=None)
def section_for(datum: RootDatum) -> KostantSection:
    return build_section(datum)


# --- adjoint-quotient invariants ----------------------------------------------

@dataclass(frozen=True)
class InvariantSystem:
    """Designated characteristic-polynomial coefficients of a faithful rep."""

    rep: StandardRep
    degrees: tuple[int, ...]   # polynomial degrees of the retained coefficients

    @property
    def count(self) -> int:
        return len(self.degrees)


def invariant_system(rep: StandardRep) -> InvariantSystem:
    m = rep.rep_dim
    if rep.family == "gl":
        degrees = tuple(range(1, m + 1))
    elif rep.family == "sl":
        degrees = tuple(range(2, m + 1))
    elif rep.family == "sp":
        degrees = tuple(range(2, m + 1, 2))
    elif rep.family == "adjoint":
        degrees = tuple(range(1, m + 1))
    else:
        raise ValueError(f"no invariant system for family {rep.family!r}")
    return InvariantSystem(rep, degrees)


def invariants_chi(system: InvariantSystem, x) -> tuple[Fraction, ...]:
    """Retained elementary-symmetric coefficients of rep(x), lowest degree first.

    x may be a coordinate vector on the algebra basis or a rep-space matrix.
    """
    mat = _as_rep_matrix(system.rep, x)
    e = elementary_symmetric_from_charpoly(charpoly(mat))
    return tuple(e[d - 1] for d in system.degrees)


def _as_rep_matrix(rep: StandardRep, x):
    if hasattr(x, "rational_coordinates"):
        return rep.matrix_of(x.rational_coordinates())
    if x and isinstance(x[0], (list, tuple)) and len(x) == rep.rep_dim:
        return [list(row) for row in x]
    return rep.matrix_of(x)


def chi_projection_check(system: InvariantSystem, coords) -> bool:
    """Invariants of an element of b^- equal those of its Cartan part."""
    algebra = system.rep.algebra
    for i, c in enumerate(coords):
        if c != 0 and algebra.grading[i] > 0:
            raise ValueError("element is not in the nonpositive grading span")
    cartan_part = [
        c if algebra.grading[i] == 0 else 0 for i, c in enumerate(coords)
    ]
    return invariants_chi(system, coords) == invariants_chi(system, cartan_part)


def section_invert(
    section: KostantSection,
    system: InvariantSystem,
    targets,
    p: int | None = None,
):
    """The unique xi in span(Xi) with invariants_chi(Y + xi) = targets.

    Solved degree by degree: the coefficient of the weight -2(d-1) basis
    vector enters the degree-d invariant linearly and higher ones not at all,
    so one sweep in increasing degree inverts the section map exactly.
    """
    if p is not None and section.excluded_N % p == 0:
        raise SectionUnavailable(
            f"prime {p} divides the excluded integer N = {section.excluded_N}"
        )
    algebra = system.rep.algebra
    if len(targets) != system.count:
        raise ValueError("target vector length differs from the invariant count")
    by_degree = {}
    for vec, w in zip(section.xi_basis, section.weights):
        by_degree.setdefault(1 + (-w) // 2, []).append(vec)
    for d in system.degrees:
        if len(by_degree.get(d, [])) != 1:
            raise ValueError(
                "section weights do not match the invariant degrees for this family"
            )
    y = algebra.principal_nilpotent().coordinates
    xi = [Fraction(0)] * algebra.dim
    zero = invariants_chi(system, list(y))
    for pos, d in enumerate(system.degrees):
        basis_vec = by_degree[d][0]
        probe = [yc + bc for yc, bc in zip(y, basis_vec)]
        lin = invariants_chi(system, probe)[pos] - zero[pos]
        if lin == 0:
            raise AssertionError("degenerate linear coefficient in section inversion")
        if p is not None and val_p(lin, p) != 0:
            raise SectionUnavailable(
                f"linear coefficient is not a unit at p = {p}"
            )
        current = invariants_chi(system, [yc + xc for yc, xc in zip(y, xi)])[pos]
        coef = Fraction(targets[pos] - current) / lin
        for i, bc in enumerate(basis_vec):
            if bc:
                xi[i] += coef * bc
    return xi


__all__ = [
    "InvariantSystem",
    "KostantSection",
    "SectionUnavailable",
    "SmithData",
    "build_section",
    "chi_projection_check",
    "excluded_n",
    "excluded_primes",
    "invariant_system",
    "invariants_chi",
    "is_g_good",
    "is_g_good_closed_form",
    "is_n_good",
    "is_n_good_closed_form",
    "section_for",
    "section_invert",
    "smith_decompose",
]
