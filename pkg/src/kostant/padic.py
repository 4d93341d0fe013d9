"""p-adic scalars, Moy-Prasad lattices at the split hyperspecial point,
the invariant trace form, and dual-lattice computations.

Scalars default to exact rationals carrying a designated prime; truncated
scalars (residue known mod p^precision) appear only as outputs of iterative
algorithms. The filtration is normalized so that the level-(r+1) lattice is
p times the level-r lattice; at the split hyperspecial point the jumps are
integral and the level-r lattice is p^ceil(r) times the Chevalley lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chevalley import ChevalleyAlgebra, StandardRep
from .linalg import (
    Vec,
    det,
    is_prime,
    rref,
    val_p,
)

INF = math.inf


class PrecisionExhausted(ArithmeticError):
    """A truncated value is indistinguishable from zero at its precision."""


class FormNotPerfect(ValueError):
    """The trace form fails to be unimodular at the requested prime."""


@dataclass(frozen=True)
class PadicScalar:
    """Exact rational (value set) or truncated (residue mod p^precision)."""

    prime: int
    value: Fraction | None = None
    residue: int | None = None
    precision: int | None = None

    @staticmethod
    def exact(prime: int, value) -> "PadicScalar":
        return PadicScalar(prime, Fraction(value), None, None)

    @staticmethod
    def truncated(prime: int, residue: int, precision: int) -> "PadicScalar":
        if precision < 1:
            raise ValueError("precision must be positive")
        return PadicScalar(prime, None, residue % prime**precision, precision)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def valuation(self):
        if self.is_exact:
            return val_p(self.value, self.prime)
        if self.residue == 0:
            raise PrecisionExhausted(
                f"value is 0 mod {self.prime}^{self.precision}; valuation unknown"
            )
        return val_p(self.residue, self.prime)

    def abs_exponent(self):
        """|x| = q^(-val); returns -val with q = p."""
        v = self.valuation()
        return -v if v is not INF else -INF

    def reduce(self, precision: int) -> "PadicScalar":
        """Truncate to an absolute precision (denominator must be a unit)."""
        if not self.is_exact:
            if precision > self.precision:
                raise PrecisionExhausted("cannot increase precision")
            return PadicScalar.truncated(self.prime, self.residue, precision)
        mod = self.prime**precision
        den = self.value.denominator
        if den % self.prime == 0:
            raise ValueError("negative valuation cannot be truncated to an integer")
        res = self.value.numerator * pow(den, -1, mod) % mod
        return PadicScalar.truncated(self.prime, res, precision)

    def _binop(self, other, fn):
        if not isinstance(other, PadicScalar):
            other = PadicScalar.exact(self.prime, other)
        if other.prime != self.prime:
            raise ValueError("mixed primes")
        if self.is_exact and other.is_exact:
            return PadicScalar.exact(self.prime, fn(self.value, other.value))
        prec = min(
            p for p in (self.precision, other.precision) if p is not None
        )
        a = self if not self.is_exact else self.reduce(prec)
        b = other if not other.is_exact else other.reduce(prec)
        prec = min(a.precision, b.precision)
        return PadicScalar.truncated(self.prime, fn(a.residue, b.residue), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        if self.is_exact:
            return PadicScalar.exact(self.prime, -self.value)
        return PadicScalar.truncated(self.prime, -self.residue, self.precision)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PadicScalar) else -Fraction(other))

    def to_json(self):
        if self.is_exact:
            v = self.value
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        try:
            v = self.valuation()
            unit = self.residue // self.prime**v
        except PrecisionExhausted:
            v, unit = "inf", 0
        return [str(v), str(unit), self.precision]

    @staticmethod
    def from_json(doc, prime: int) -> "PadicScalar":
        if isinstance(doc, str):
            if "/" in doc:
                num, den = doc.split("/")
                return PadicScalar.exact(prime, Fraction(int(num), int(den)))
            return PadicScalar.exact(prime, Fraction(int(doc)))
        v, unit, precision = doc
        if v == "inf":
            return PadicScalar.truncated(prime, 0, int(precision))
        return PadicScalar.truncated(
            prime, int(unit) * prime ** int(v), int(precision)
        )


def valuation(x):
    """Valuation of a PadicScalar; exact rationals need a prime already set."""
    return x.valuation()


@dataclass(frozen=True)
class LieElement:
    """Element of g(F) in Chevalley coordinates with a designated prime."""

    algebra: ChevalleyAlgebra
    prime: int
    coordinates: tuple[PadicScalar, ...]

    def __post_init__(self):
        if len(self.coordinates) != self.algebra.dim:
            raise ValueError(
                f"expected {self.algebra.dim} coordinates, got {len(self.coordinates)}"
            )

    @staticmethod
    def from_rationals(algebra, prime, coords) -> "LieElement":
        return LieElement(
            algebra,
            prime,
            tuple(PadicScalar.exact(prime, c) for c in coords),
        )

    def rational_coordinates(self) -> list[Fraction]:
        out = []
        for c in self.coordinates:
            if not c.is_exact:
                raise ValueError("element has truncated coordinates")
            out.append(c.value)
        return out


@dataclass(frozen=True)
class MPLattice:
    """Filtration lattice g_{x,r} (or g_{x,r+}) at the hyperspecial point."""

    level: Fraction
    plus: bool = False

    def effective_exponent(self) -> int:
        r = Fraction(self.level)
        if self.plus:
            return int(math.floor(r)) + 1
        return int(math.ceil(r))


def lattice_membership(x: LieElement, r, plus: bool = False) -> bool:
    """x in g_{x,r} (resp. g_{x,r+}): every coordinate valuation >= exponent.

    A truncated coordinate that vanishes mod p^precision certifies valuation
    at least its precision; only a genuinely borderline coordinate (required
    level beyond the known precision) raises.
    """
    e = MPLattice(Fraction(r), plus).effective_exponent()
    for c in x.coordinates:
        if not c.is_exact and c.residue == 0:
            if c.precision >= e:
                continue
            raise PrecisionExhausted(
                f"coordinate known only mod p^{c.precision}, level {e} required"
            )
        if c.valuation() < e:
            return False
    return True


# --- the invariant bilinear form ----------------------------------------------

@dataclass(frozen=True)
class BilinearForm:
    """Trace-form Gram matrix on the Chevalley basis."""

    gram: tuple
    rep_family: str

    def pair(self, u, v):
        acc = 0
        for i, x in enumerate(u):
            if x == 0:
                continue
            row = self.gram[i]
            for j, y in enumerate(v):
                if y != 0 and row[j] != 0:
                    acc += x * y * row[j]
        return acc

    def determinant(self) -> int:
        d = det([list(r) for r in self.gram])
        assert d.denominator == 1
        return int(d)


def trace_form(algebra: ChevalleyAlgebra, rep: StandardRep, p: int | None = None) -> BilinearForm:
    """Gram matrix tr(rep(a) rep(b)); verified symmetric and ad-invariant.

    With a prime given, perfectness over Z_(p) is checked and FormNotPerfect
    raised when the determinant has positive valuation.
    """
    n = algebra.dim
    mats = rep.matrices
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            t = sum(
                mats[i][a][b] * mats[j][b][a]
                for a in range(rep.rep_dim)
                for b in range(rep.rep_dim)
            )
            gram[i][j] = t
            gram[j][i] = t
    form = BilinearForm(tuple(tuple(r) for r in gram), rep.family)
    _check_invariance(algebra, form)
    if p is not None:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if val_p(form.determinant(), p) != 0:
            raise FormNotPerfect(
                f"trace form of family {rep.family!r} is not perfect at p = {p}"
            )
    return form


def _check_invariance(algebra: ChevalleyAlgebra, form: BilinearForm) -> None:
    n = algebra.dim
    for a in range(n):
        for b in range(n):
            br_ab = algebra.bracket_basis(a, b)
            for c in range(n):
                left = sum(coeff * form.gram[k][c] for k, coeff in br_ab)
                right = sum(
                    coeff * form.gram[b][k] for k, coeff in algebra.bracket_basis(a, c)
                )
                if left + right != 0:
                    raise AssertionError("trace form is not ad-invariant")


# --- dual lattices --------------------------------------------------------------

def quotient_map(kernel: list[Vec]):
    """Projection of F^d onto coordinates complementary to a subspace.

    Returns (project, lift, dim) where project maps a length-d vector to
    quotient coordinates and lift sends quotient coordinates back to
    canonical representatives supported on the non-pivot coordinates.
    """
    if not kernel:
        def project(v):
            return list(v)

        def lift(w):
            return list(w)

        return project, lift, None
    reduced, pivots = rref(kernel)
    d = len(kernel[0])
    free = [c for c in range(d) if c not in pivots]

    def project(v):
        v = [Fraction(x) for x in v]
        for row, pc in zip(reduced, pivots):
            f = v[pc]
            if f != 0:
                v = [x - f * y for x, y in zip(v, row)]
        return [v[c] for c in free]

    def lift(w):
        out = [Fraction(0)] * d
        for c, x in zip(free, w):
            out[c] = Fraction(x)
        return out

    return project, lift, len(free)


def lattice_basis_from_generators(generators: list[Vec], p: int) -> list[Vec]:
    """Z_(p)-basis of the span of rational generators, by valuation pivoting.

    Column reduction over the local ring: the pivot is always an entry of
    minimal valuation, so every elimination coefficient is p-integral and
    entry sizes stay polynomial (no transform blow-up).
    """
    cols = [
        [Fraction(x) for x in g] for g in generators if any(x != 0 for x in g)
    ]
    basis: list[Vec] = []
    used_rows: set[int] = set()
    while cols:
        best = None
        for ci, col in enumerate(cols):
            for ri, x in enumerate(col):
                if ri in used_rows or x == 0:
                    continue
                v = val_p(x, p)
                if best is None or v < best[0]:
                    best = (v, ri, ci)
        if best is None:
            break
        _, ri, ci = best
        piv_col = cols.pop(ci)
        piv = piv_col[ri]
        for col in cols:
            if col[ri] != 0:
                f = col[ri] / piv
                for k, pc in enumerate(piv_col):
                    if pc:
                        col[k] -= f * pc
        used_rows.add(ri)
        basis.append(piv_col)
        cols = [c for c in cols if any(x != 0 for x in c)]
    return basis


def padic_divisor_valuations(mat, p: int) -> list[int]:
    """Elementary-divisor valuations of a rational matrix over Z_(p).

    Gaussian elimination with minimal-valuation pivots; the pivot column is
    cleared with p-integral coefficients, making the complementary block the
    exact Schur complement for the next step.
    """
    m = [[Fraction(x) for x in row] for row in mat]
    if not m or not m[0]:
        return []
    rows = set(range(len(m)))
    cols = set(range(len(m[0])))
    vals: list[int] = []
    while True:
        best = None
        for i in rows:
            for j in cols:
                x = m[i][j]
                if x != 0:
                    v = val_p(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        piv = m[i][j]
        vals.append(v)
        for i2 in rows:
            if i2 != i and m[i2][j] != 0:
                f = m[i2][j] / piv
                for j2 in cols:
                    if m[i][j2]:
                        m[i2][j2] -= f * m[i][j2]
        rows.discard(i)
        cols.discard(j)
    return sorted(vals)


def dual_lattice_levels(pairing, generators: list[Vec], p: int, modulo: list[Vec] | None = None):
    """Elementary-divisor valuations of the Gram matrix of a lattice.

    `pairing` is a bilinear callable on ambient vectors, `generators` spans
    the lattice, and `modulo` (optionally) a subspace to quotient out first.
    Returns the sorted list of p-valuations, one per basis vector of the
    image lattice; empty if the quotient is zero.
    """
    project, lift, _ = quotient_map(modulo or [])
    imgs = [project(g) for g in generators]
    imgs = [v for v in imgs if any(x != 0 for x in v)]
    basis = lattice_basis_from_generators(imgs, p)
    if not basis:
        return []
    lifted = [lift(b) for b in basis]
    gram = [[pairing(u, v) for v in lifted] for u in lifted]
    return padic_divisor_valuations(gram, p)


def dual_pair_is_perfect(pairing, basis_a: list[Vec], basis_b: list[Vec], p: int) -> bool:
    """Whether two lattices pair unimodularly (each is the other's dual)."""
    gram = [[Fraction(pairing(u, v)) for v in basis_b] for u in basis_a]
    if len(basis_a) != len(basis_b):
        return False
    if any(val_p(x, p) < 0 for row in gram for x in row if x != 0):
        return False
    d = det(gram)
    return d != 0 and val_p(d, p) == 0


__all__ = [
    "INF",
    "BilinearForm",
    "FormNotPerfect",
    "LieElement",
    "MPLattice",
    "PadicScalar",
    "PrecisionExhausted",
    "dual_lattice_levels",
    "dual_pair_is_perfect",
    "lattice_basis_from_generators",
    "lattice_membership",
    "padic_divisor_valuations",
    "quotient_map",
    "trace_form",
    "valuation",
]
