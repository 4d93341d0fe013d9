"""Topological nilpotence and constructive conjugation into the section.

The reduction loop conjugates an element of Y + g_{x,0+} into Y + Xi one
congruence level at a time: the level-l defect is split over F_p into a
bracket part [Y, P] and a complement part C, the conjugator is updated by a
truncated exponential of P, and C is absorbed into xi. Progress is asserted
at every level and the resulting certificate can be re-verified by direct
multiplication, independently of the solver path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chevalley import ConsistencyError, StandardRep
from .linalg import (
    ModpSolver,
    charpoly,
    discriminant,
    identity,
    invert,
    invert_mod,
    is_prime,
    kernel_basis,
    mat_mod,
    mat_mul,
    rank_mod_p,
    rref,
    val_p,
)
from .padic import (
    BilinearForm,
    PadicScalar,
    dual_lattice_levels,
    dual_pair_is_perfect,
    lattice_basis_from_generators,
    quotient_map,
)
from .sections import (
    InvariantSystem,
    KostantSection,
    _graded_and_smith,
    invariants_chi,
    is_g_good,
    section_for,
)

INF = math.inf


# --- coordinates in a faithful representation ---------------------------------

@lru_cache(maxsize=None)
def _extractor(rep: StandardRep):
    """Positions S and matrix M with coords = M * vec(W)[S] for W in the image."""
    dim = len(rep.matrices)
    rows = [
        [rep.matrices[i][a][b] for a in range(rep.rep_dim) for b in range(rep.rep_dim)]
        for i in range(dim)
    ]
    _, pivots = rref(rows)
    square = [[rows[i][s] for i in range(dim)] for s in pivots]
    m = invert(square)
    return tuple(pivots), tuple(tuple(row) for row in m)


def algebra_coordinates(rep: StandardRep, matrix) -> list[Fraction]:
    """Chevalley coordinates of a rep-space matrix; errors if not in the image."""
    pivots, m = _extractor(rep)
    flat = [Fraction(x) for row in matrix for x in row]
    w = [flat[s] for s in pivots]
    coords = [sum(r * x for r, x in zip(row, w)) for row in m]
    check = rep.matrix_of(coords)
    if any(
        Fraction(a) != Fraction(b)
        for ra, rb in zip(check, matrix)
        for a, b in zip(ra, rb)
    ):
        raise ValueError("matrix does not lie in the Lie algebra of this family")
    return coords


# --- topological nilpotence -----------------------------------------------------

@dataclass(frozen=True)
class NilpotenceVerdict:
    is_topologically_nilpotent: bool
    witness: tuple  # (invariant degree, valuation) pairs

    def to_json(self):
        return {
            "topologically_nilpotent": self.is_topologically_nilpotent,
            "witness": [
                [d, "inf" if v is INF else int(v)] for d, v in self.witness
            ],
        }


def is_topologically_nilpotent(
    system: InvariantSystem, x, p: int
) -> NilpotenceVerdict:
    """True iff every designated invariant of x has positive valuation."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    values = invariants_chi(system, x)
    witness = tuple(
        (d, val_p(v, p)) for d, v in zip(system.degrees, values)
    )
    verdict = all(v > 0 for _, v in witness)
    return NilpotenceVerdict(verdict, witness)


def newton_root_valuations(coeffs, p: int):
    """Valuations of the roots of a monic polynomial, by Newton polygon.

    coeffs are charpoly-style: [1, c1, ..., cn] for t^n + c1 t^(n-1) + ...
    Returns a sorted list with math.inf for each zero root.
    """
    n = len(coeffs) - 1
    pts = [(i, val_p(coeffs[i], p)) for i in range(n + 1) if coeffs[i] != 0]
    last = pts[-1][0]
    vals: list = [INF] * (n - last)
    # lower convex hull, left to right
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        vals.extend([slope] * (x2 - x1))
    return sorted(vals, key=lambda v: (v is not INF, v))


# --- mock exponential ------------------------------------------------------------

def mock_exp(p_matrix, p: int, precision: int):
    """Truncated exponential of an integer matrix with entries of valuation >= 1.

    Exact residues mod p^precision: each series term p^(kl) Pbar^k / k! is a
    p-integral rational matrix whose residue is computed without precision
    loss. Requires p > 2 so the term valuations grow.
    """
    if p == 2:
        raise ValueError("the truncated exponential requires p > 2")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = len(p_matrix)
    if any(Fraction(x).denominator != 1 for row in p_matrix for x in row):
        raise ValueError("expected integer matrix entries")
    entries = [int(x) for row in p_matrix for x in row]
    level = min((val_p(x, p) for x in entries if x != 0), default=INF)
    if level < 1:
        raise ValueError("matrix entries must all have valuation >= 1")
    modulus = p**precision
    if level is INF:
        return identity(n)
    pbar = [[x // p**level for x in row] for row in [list(r) for r in p_matrix]]
    pbar = [[x % modulus for x in row] for row in pbar]
    out = identity(n)
    power = identity(n)
    k = 0
    factorial = 1
    while True:
        k += 1
        # term valuation lower bound k*level - (k-1)/(p-1), increasing in k
        if k * level - Fraction(k - 1, p - 1) >= precision:
            break
        power = [[sum(a * b for a, b in zip(row, col)) % modulus
                  for col in zip(*pbar)] for row in power]
        factorial *= k
        vf = val_p(factorial, p)
        unit = factorial // p**vf
        scalar = p ** (k * level - vf) * pow(unit, -1, modulus) % modulus
        for i in range(n):
            orow = out[i]
            prow = power[i]
            for j in range(n):
                orow[j] = (orow[j] + scalar * prow[j]) % modulus
    return out


# --- reduction to the section -----------------------------------------------------

@dataclass(frozen=True)
class ReductionCertificate:
    """Conjugator g = 1 mod p with Ad(g)Z = Y + xi to the stated precision."""

    prime: int
    precision: int
    conjugator: tuple          # rep-space residues mod p^precision
    xi: tuple                  # algebra coordinates, residues mod p^precision
    xi_on_basis: tuple         # coefficients on the section basis, residues
    residual: int
    family: str

    def to_json(self):
        prec = self.precision
        enc = lambda r: PadicScalar.truncated(self.prime, r, prec).to_json()
        return {
            "p": self.prime,
            "precision": prec,
            "family": self.family,
            "conjugator": [[enc(x) for x in row] for row in self.conjugator],
            "xi": [enc(x) for x in self.xi],
            "xi_on_basis": [enc(x) for x in self.xi_on_basis],
            "residual": self.residual,
        }


@lru_cache(maxsize=None)
def _reduction_solver(section: KostantSection, p: int):
    algebra, graded, _ = _graded_and_smith(section.datum)
    y = algebra.principal_nilpotent().coordinates
    ady = algebra.ad_matrix(list(y))
    cols = [list(col) for col in zip(*ady)] + [list(v) for v in section.xi_basis]
    m = [[cols[j][i] for j in range(len(cols))] for i in range(algebra.dim)]
    return ModpSolver(m, p)


def _coords_mod(coords, modulus, p):
    out = []
    for c in coords:
        f = Fraction(c)
        if f.denominator % p == 0:
            raise ValueError("coordinate with negative valuation")
        out.append(f.numerator * pow(f.denominator, -1, modulus) % modulus)
    return out


def reduce_to_section(
    rep: StandardRep,
    section: KostantSection,
    z,
    p: int,
    precision: int = 20,
) -> ReductionCertificate:
    """Conjugate z in Y + g_{x,0+} into the section by a level-by-level solve."""
    if p == 2:
        raise ValueError("reduction requires p > 2")
    algebra = rep.algebra
    datum = algebra.datum
    if not is_g_good(datum, p):
        raise ValueError(f"p = {p} is not a good prime for this datum")
    coords = _as_coords(rep, z)
    y = algebra.principal_nilpotent().coordinates
    for c, yc in zip(coords, y):
        if val_p(Fraction(c) - yc, p) < 1:
            raise ValueError("element is not in Y + g_{x,0+}")

    modulus = p**precision
    solver = _reduction_solver(section, p)
    dim = algebra.dim
    nbasis = len(section.xi_basis)
    pivots, extract = _extractor(rep)
    extract_mod = mat_mod([list(r) for r in extract], modulus)

    rep_mats = [mat_mod([list(r) for r in m], modulus) for m in rep.matrices]
    w = mat_mod(rep.matrix_of(coords), modulus)
    y_mat = mat_mod(rep.matrix_of(list(y)), modulus)
    g = identity(rep.rep_dim)
    xi = [0] * dim
    xi_coeffs = [0] * nbasis

    def rep_of(vec_mod):
        n = rep.rep_dim
        out = [[0] * n for _ in range(n)]
        for idx, c in enumerate(vec_mod):
            if c:
                m = rep_mats[idx]
                for i in range(n):
                    row = m[i]
                    for j in range(n):
                        if row[j]:
                            out[i][j] = (out[i][j] + c * row[j]) % modulus
        return out

    def coords_of(mat):
        flat = [mat[s // rep.rep_dim][s % rep.rep_dim] for s in pivots]
        return [
            sum(r * x for r, x in zip(row, flat)) % modulus
            for row in extract_mod
        ]

    level = 0
    steps = 0
    while True:
        steps += 1
        if steps > 4 * precision:
            raise ConsistencyError("reduction failed to converge before precision")
        defect_mat = [
            [(a - b - c) % modulus for a, b, c in zip(ra, rb, rc)]
            for ra, rb, rc in zip(w, y_mat, rep_of(xi))
        ]
        d = coords_of(defect_mat)
        if all(x == 0 for x in d):
            residual = precision
            break
        lvl = min(val_p(x, p) for x in d if x != 0)
        if lvl <= level:
            raise ConsistencyError("defect valuation failed to increase")
        level = lvl
        dbar = [(x // p**lvl) % p for x in d]
        sol = solver.solve(dbar)
        pl = p**lvl
        p_coords = [pl * x for x in sol[:dim]]
        c_coeffs = sol[dim:]
        p_exact = rep.matrix_of(p_coords)
        h = mock_exp(p_exact, p, precision)
        h_inv = mock_exp([[-x for x in row] for row in p_exact], p, precision)
        w = _mat_mul_mod(_mat_mul_mod(h, w, modulus), h_inv, modulus)
        g = _mat_mul_mod(h, g, modulus)
        for i, cc in enumerate(c_coeffs):
            if cc:
                xi_coeffs[i] = (xi_coeffs[i] + pl * cc) % modulus
                for k, bc in enumerate(section.xi_basis[i]):
                    if bc:
                        xi[k] = (xi[k] + pl * cc * bc) % modulus

    for k, x in enumerate(xi):
        if x != 0 and val_p(x, p) < 1:
            raise ConsistencyError("xi left the positive-level lattice")
    return ReductionCertificate(
        prime=p,
        precision=precision,
        conjugator=tuple(tuple(row) for row in g),
        xi=tuple(xi),
        xi_on_basis=tuple(xi_coeffs),
        residual=residual,
        family=rep.family,
    )


def _as_coords(rep: StandardRep, z) -> list:
    """Coordinates from a coordinate vector, a LieElement, or a rep matrix."""
    if hasattr(z, "rational_coordinates"):
        return z.rational_coordinates()
    if z and isinstance(z[0], (list, tuple)):
        return algebra_coordinates(rep, z)
    return list(z)


def _mat_mul_mod(a, b, modulus):
    bt = list(zip(*b))
    return [
        [sum(x * y for x, y in zip(row, col)) % modulus for col in bt] for row in a
    ]


def _congruent_mod(a, b, p: int, modulus: int) -> bool:
    d = Fraction(a) - Fraction(b)
    if d == 0:
        return True
    if d.denominator % p == 0:
        return False
    return d.numerator * pow(d.denominator, -1, modulus) % modulus == 0


def verify_certificate(
    rep: StandardRep,
    system: InvariantSystem,
    cert: ReductionCertificate,
    z,
) -> dict:
    """Re-check a certificate by direct multiplication, not via the solver.

    The conjugator is inverted with modular Gaussian elimination, the
    conjugated element is compared entrywise with Y + xi, the invariants are
    compared mod p^precision, and the congruence g = 1 mod p is checked.
    """
    algebra = rep.algebra
    p, precision = cert.prime, cert.precision
    modulus = p**precision
    coords = _as_coords(rep, z)
    z_mat = mat_mod(rep.matrix_of(coords), modulus)
    g = [list(row) for row in cert.conjugator]
    g_inv = invert_mod(g, modulus)
    conj = _mat_mul_mod(_mat_mul_mod(g, z_mat, modulus), g_inv, modulus)
    y = algebra.principal_nilpotent().coordinates
    target = rep.matrix_of([yc + xc for yc, xc in zip(y, cert.xi)])
    target = mat_mod(target, modulus)
    residual_ok = conj == target

    lift = [yc + xc for yc, xc in zip(y, cert.xi)]
    inv_lift = invariants_chi(system, lift)
    inv_z = invariants_chi(system, coords)
    invariants_ok = all(
        _congruent_mod(a, b, p, modulus) for a, b in zip(inv_lift, inv_z)
    )
    congruence_ok = all(
        (x - (1 if i == j else 0)) % p == 0
        for i, row in enumerate(cert.conjugator)
        for j, x in enumerate(row)
    )
    recombined = [0] * algebra.dim
    if cert.xi_on_basis:
        section = section_for(algebra.datum)
        for coeff, vec in zip(cert.xi_on_basis, section.xi_basis):
            for k, bc in enumerate(vec):
                if bc:
                    recombined[k] = (recombined[k] + coeff * bc) % modulus
    xi_span_ok = all(
        (a - b) % modulus == 0 for a, b in zip(recombined, cert.xi)
    )
    return {
        "residual": residual_ok,
        "invariants": invariants_ok,
        "congruence": congruence_ok,
        "xi_span": xi_span_ok,
    }


def same_orbit(
    rep: StandardRep,
    section: KostantSection,
    z1,
    z2,
    p: int,
    precision: int = 20,
) -> bool:
    """Whether two elements of Y + g_{x,0+} lie in one G_{x,0+}-orbit."""
    c1 = reduce_to_section(rep, section, z1, p, precision)
    c2 = reduce_to_section(rep, section, z2, p, precision)
    return c1.xi == c2.xi


def check_level_image(system: InvariantSystem, z, m: int, p: int) -> bool:
    """Every invariant of z in Y + g_{x,m} has valuation >= m."""
    if m < 1:
        raise ValueError("level must be a positive integer")
    algebra = system.rep.algebra
    coords = _as_coords(system.rep, z)
    y = algebra.principal_nilpotent().coordinates
    for c, yc in zip(coords, y):
        if val_p(Fraction(c) - yc, p) < m:
            raise ValueError(f"element is not in Y + g_{{x,{m}}}")
    return all(val_p(v, p) >= m for v in invariants_chi(system, coords))


# --- self-duality of the filtration under the orbit symplectic form ---------------

@dataclass(frozen=True)
class SelfdualReport:
    dual_equality: bool
    rank_identity: bool
    gram_valuations: tuple


def check_selfdual(
    rep: StandardRep,
    form: BilinearForm,
    x,
    p: int,
) -> SelfdualReport:
    """Dual-lattice equality for the symplectic pairing <X, [v, w]> on g/t_X.

    Verifies that the image of g_{x,-1} pairs unimodularly with the image of
    g_{x,0+} (each is the other's dual) and that ad X has rank
    dim G - rk G over F_p.
    """
    algebra = rep.algebra
    coords = _as_coords(rep, x)
    coords = [Fraction(c) for c in coords]
    y = algebra.principal_nilpotent().coordinates
    for c, yc in zip(coords, y):
        if val_p(c - yc, p) < 1:
            raise ValueError("element is not in Y + g_{x,0+}")
    cp = charpoly(rep.matrix_of(coords))
    if discriminant(cp) == 0:
        raise ValueError("element is not regular semisimple")
    ad_x = algebra.ad_matrix(coords)
    t_x = kernel_basis(ad_x)
    if len(t_x) != algebra.rank:
        raise ValueError("centralizer dimension differs from the rank")

    def pairing(u, v):
        return form.pair(coords, algebra.bracket(u, v))

    project, lift, _ = quotient_map(t_x)
    dim = algebra.dim

    def image_basis(scale_exp: int):
        gens = []
        for i in range(dim):
            v = [Fraction(0)] * dim
            v[i] = Fraction(p) ** scale_exp
            w = project(v)
            if any(c != 0 for c in w):
                gens.append(w)
        return [lift(b) for b in lattice_basis_from_generators(gens, p)]

    basis_plus = image_basis(1)     # image of g_{x,0+} = p * g(O)
    basis_minus = image_basis(-1)   # image of g_{x,-1}
    dual_ok = dual_pair_is_perfect(pairing, basis_minus, basis_plus, p)
    vals = tuple(dual_lattice_levels(pairing, basis_plus, p)) if basis_plus else ()

    ad_x_mod = mat_mod(ad_x, p)
    rank_ok = rank_mod_p(ad_x_mod, p) == algebra.dim - algebra.rank
    return SelfdualReport(dual_ok, rank_ok, vals)


# --- orbital constants --------------------------------------------------------------

@dataclass(frozen=True)
class OrbitalConstants:
    """Graded rank of ad Y mod p and the resulting power-of-q constant.

    The measure normalization gives both lattice volume factors the value 1
    (top-degree forms dual to the Chevalley lattice generators), so only the
    power of q is reported; the exponent is half-integral when p is not a
    good prime.
    """

    m: int
    q: int
    exponent: Fraction
    normalization: str = "chevalley-lattice-unit"

    def to_json(self):
        e = self.exponent
        return {
            "m": self.m,
            "c_G": {
                "q": self.q,
                "exp": int(e) if e.denominator == 1 else f"{e.numerator}/{e.denominator}",
            },
            "normalization": self.normalization,
        }


def constants(datum, p: int) -> OrbitalConstants:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    algebra, graded, _ = _graded_and_smith(datum)
    m = 0
    for j in graded.degrees:
        block = graded.block(j)
        if block and block[0]:
            m += rank_mod_p(block, p)
    exponent = -Fraction(algebra.dim - algebra.rank + m, 2)
    return OrbitalConstants(m=m, q=p, exponent=exponent)


def d_g_valuation(rep: StandardRep, x, p: int) -> int:
    """Valuation of det(ad X; g/t_X) for regular semisimple X."""
    algebra = rep.algebra
    coords = _as_coords(rep, x)
    cp = charpoly(rep.matrix_of(coords))
    if discriminant(cp) == 0:
        raise ValueError("element is not regular semisimple")
    ad_cp = charpoly(algebra.ad_matrix([Fraction(c) for c in coords]))
    n = algebra.dim
    r = algebra.rank
    for i in range(n - r + 1, n + 1):
        if ad_cp[i] != 0:
            raise ValueError("ad X has too small a kernel for a regular element")
    coeff = ad_cp[n - r]
    if coeff == 0:
        raise ValueError("element is not regular")
    return val_p(coeff, p)


# --- randomized instance generation (deterministic under a seed) ---------------------

def random_section_point(section: KostantSection, rng, p: int, max_level: int = 3):
    """Random xi in L_{0+}: integer coefficients with valuations in [1, max_level]."""
    algebra_dim = len(section.xi_basis[0])
    xi = [0] * algebra_dim
    for vec in section.xi_basis:
        c = rng.randint(-(p - 1), p - 1) * p ** rng.randint(1, max_level)
        for k, bc in enumerate(vec):
            if bc:
                xi[k] += c * bc
    return xi


def random_group_element(rep: StandardRep, rng, p: int):
    """Random element of G_{x,0+}: root-group factors and a torus part, exact.

    Root vectors of the standard families square to zero, so each factor
    I + c*rep(X_root) is an exact group element; torus entries are rational
    units congruent to 1 mod p.
    """
    algebra = rep.algebra
    n = rep.rep_dim
    g = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    root_indices = list(range(algebra.rank, algebra.dim))
    order = root_indices * 2
    rng.shuffle(order)
    for idx in order:
        c = p * rng.randint(-2, 2)
        if c == 0:
            continue
        factor = [
            [
                (1 if i == j else 0) + c * rep.matrices[idx][i][j]
                for j in range(n)
            ]
            for i in range(n)
        ]
        g = mat_mul(g, factor)
    units = [1 + p * rng.randint(-2, 2) for _ in range(n)]
    if rep.family == "gl":
        torus = [Fraction(units[i]) for i in range(n)]
    elif rep.family == "sl":
        prod = Fraction(1)
        for u in units[: n - 1]:
            prod *= u
        torus = [Fraction(u) for u in units[: n - 1]] + [1 / prod]
    elif rep.family == "sp":
        half = n // 2
        torus = [Fraction(units[i]) for i in range(half)]
        torus += [1 / torus[half - 1 - k] for k in range(half)]
    else:
        torus = [Fraction(1)] * n
    g = mat_mul(g, [[torus[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])
    return g


def conjugate(rep: StandardRep, g, coords):
    """Exact Ad(g) applied to an element given by coordinates; returns coords."""
    w = mat_mul(mat_mul(g, rep.matrix_of(coords)), invert(g))
    return algebra_coordinates(rep, w)


__all__ = [
    "NilpotenceVerdict",
    "OrbitalConstants",
    "ReductionCertificate",
    "SelfdualReport",
    "algebra_coordinates",
    "check_level_image",
    "check_selfdual",
    "conjugate",
    "constants",
    "d_g_valuation",
    "is_topologically_nilpotent",
    "mock_exp",
    "newton_root_valuations",
    "random_group_element",
    "random_section_point",
    "reduce_to_section",
    "same_orbit",
    "verify_certificate",
]
