"""Integral Chevalley Lie algebras with principal grading.

The basis is H_1..H_cr (a basis of the cocharacter lattice) followed by the
root vectors X_alpha, positive roots first, each block in the stored root
order. Structure constants are fixed by the extraspecial-pair convention:
for each positive root of height >= 2 the minimal decomposition pair gets a
positive constant, everything else follows from antisymmetry, the opposition
convention N(-a,-b) = -N(a,b), and the standard three- and four-root
relations. Integrality and bracket magnitudes are asserted at every step,
and the Jacobi identity is verified after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import random

from .linalg import mat_mul, mat_sub, rank_mod_p
from .roots import RootDatum, LambdaCocharacter, lambda_cocharacter

Root = tuple


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


class ConsistencyError(RuntimeError):
    """A structure-constant or Jacobi verification failed (never expected)."""


class StructureConstants:
    """N(a, b) for root pairs of one root system, resolved on demand."""

    def __init__(self, root_system):
        self.rs = root_system
        pos = list(root_system.positive_roots)
        self.pos_index = {r: k for k, r in enumerate(pos)}
        self.roots = set(pos) | {_neg(r) for r in pos}
        self._n: dict[tuple[Root, Root], int] = {}
        self._extraspecial: dict[Root, tuple[Root, Root]] = {}
        for eps in pos:
            if sum(eps) < 2:
                continue
            for a in pos:
                b = _sub(eps, a)
                if b in self.pos_index:
                    self._extraspecial[eps] = (a, b)
                    break

    def is_root(self, r: Root) -> bool:
        return r in self.roots

    def p_value(self, a: Root, b: Root) -> int:
        """Largest k with b - k*a a root."""
        k = 0
        cur = _sub(b, a)
        while cur in self.roots:
            k += 1
            cur = _sub(cur, a)
        return k

    def n(self, a: Root, b: Root) -> int:
        key = (a, b)
        cached = self._n.get(key)
        if cached is not None:
            return cached
        s = _add(a, b)
        if s not in self.roots:
            val = 0
        else:
            ha, hb = sum(a), sum(b)
            if ha > 0 and hb > 0:
                val = self._n_positive(a, b)
            elif ha < 0 and hb < 0:
                val = -self.n(_neg(a), _neg(b))
            else:
                val = self._n_mixed(a, b, s)
        self._n[key] = val
        return val

    def _n_positive(self, a: Root, b: Root) -> int:
        ia, ib = self.pos_index[a], self.pos_index[b]
        if ia > ib:
            return -self.n(b, a)
        eps = _add(a, b)
        g, d = self._extraspecial[eps]
        expected = self.p_value(a, b) + 1
        if (g, d) == (a, b):
            return expected
        # Four-root relation on (g, d, -a, -b), solved for N(a, b).
        t = Fraction(0)
        dm = _sub(d, a)
        if dm in self.roots:
            t += Fraction(self.n(d, _neg(a)) * self.n(g, _neg(b)), self.rs.inner(dm, dm))
        gm = _sub(g, a)
        if gm in self.roots:
            t += Fraction(self.n(_neg(a), g) * self.n(d, _neg(b)), self.rs.inner(gm, gm))
        val = Fraction(self.rs.inner(eps, eps)) * t / self.n(g, d)
        if val.denominator != 1 or abs(val) != expected:
            raise ConsistencyError(f"constant for {a} + {b} resolved to {val}")
        return int(val)

    def _n_mixed(self, a: Root, b: Root, s: Root) -> int:
        if sum(a) < 0:
            return -self.n(b, a)
        # a positive, b negative; use the three-root relation on (a, b, -s).
        if sum(s) > 0:
            val = Fraction(self.rs.inner(s, s)) * self.n(b, _neg(s)) / self.rs.inner(a, a)
        else:
            val = Fraction(self.rs.inner(s, s)) * self.n(_neg(s), a) / self.rs.inner(b, b)
        if val.denominator != 1 or abs(val) != self.p_value(a, b) + 1:
            raise ConsistencyError(f"constant for {a} + {b} resolved to {val}")
        return int(val)


@dataclass(frozen=True)
class PrincipalNilpotent:
    """Sum of the simple root vectors, in algebra coordinates."""

    coordinates: tuple[int, ...]


@dataclass(frozen=True)
class GradedAdY:
    """Blocks M_j of ad Y mapping the weight-j piece into weight j + 2."""

    degrees: tuple[int, ...]
    blocks: dict
    basis_by_degree: dict

    def block(self, j: int):
        """Matrix of ad Y : g(j) -> g(j+2); zero-row matrix if g(j+2) = 0."""
        return self.blocks[j]


class ChevalleyAlgebra:
    """Immutable-by-convention integer Lie algebra attached to a root datum."""

    def __init__(self, datum: RootDatum, verify: bool = True):
        self.datum = datum
        rs = datum.root_system
        self.rank = datum.character_lattice_rank
        self.n_pos = rs.num_positive
        self.dim = self.rank + 2 * self.n_pos
        self.constants = StructureConstants(rs)
        pos = list(rs.positive_roots)
        self.root_list: list[Root] = pos + [_neg(r) for r in pos]
        self.root_index = {r: self.rank + k for k, r in enumerate(self.root_list)}
        self.basis_labels = [("H", i) for i in range(self.rank)] + [
            ("X", r) for r in self.root_list
        ]
        self.grading = tuple(
            [0] * self.rank + [2 * sum(r) for r in self.root_list]
        )
        self._coroot = {r: datum.embed_coroot(r) for r in self.root_list}
        self._cartan_action = {
            r: datum.embed_root(r) for r in self.root_list
        }
        self._brackets: dict[tuple[int, int], tuple] = {}
        self.lam: LambdaCocharacter = lambda_cocharacter(datum)
        if verify:
            self.verify()

    # --- brackets -------------------------------------------------------

    def bracket_basis(self, i: int, j: int):
        """Sparse bracket [b_i, b_j] as a tuple of (index, coefficient)."""
        if i == j:
            return ()
        if i > j:
            return tuple((k, -c) for k, c in self.bracket_basis(j, i))
        key = (i, j)
        cached = self._brackets.get(key)
        if cached is not None:
            return cached
        out: tuple
        if j < self.rank:
            out = ()
        elif i < self.rank:
            root = self.root_list[j - self.rank]
            coeff = self._cartan_action[root][i]
            out = ((j, coeff),) if coeff else ()
        else:
            a = self.root_list[i - self.rank]
            b = self.root_list[j - self.rank]
            s = _add(a, b)
            if all(x == 0 for x in s):
                out = tuple(
                    (k, c) for k, c in enumerate(self._coroot[a]) if c != 0
                )
            elif self.constants.is_root(s):
                c = self.constants.n(a, b)
                out = ((self.root_index[s], c),)
            else:
                out = ()
        if out:
            want = self.grading[i] + self.grading[j]
            for k, _ in out:
                if self.grading[k] != want:
                    raise ConsistencyError("bracket violates the grading")
        self._brackets[key] = out
        return out

    def bracket(self, u, v):
        """Bracket of dense coordinate vectors; exact in int/Fraction entries."""
        out = [0] * self.dim
        for i, x in enumerate(u):
            if x == 0:
                continue
            for j, y in enumerate(v):
                if y == 0:
                    continue
                for k, c in self.bracket_basis(i, j):
                    out[k] += x * y * c
        return out

    def ad_matrix(self, coords):
        """Matrix of ad(X) acting on coordinate columns."""
        cols = []
        for j in range(self.dim):
            col = [0] * self.dim
            for i, x in enumerate(coords):
                if x == 0:
                    continue
                for k, c in self.bracket_basis(i, j):
                    col[k] += x * c
            cols.append(col)
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # --- the principal nilpotent and its grading -------------------------

    def principal_nilpotent(self) -> PrincipalNilpotent:
        coords = [0] * self.dim
        for k, r in enumerate(self.root_list):
            if sum(r) == 1:
                coords[self.rank + k] = 1
        return PrincipalNilpotent(tuple(coords))

    def degrees(self) -> list[int]:
        return sorted(set(self.grading))

    def basis_by_degree(self, j: int) -> list[int]:
        return [i for i, d in enumerate(self.grading) if d == j]

    def graded_ad_y(self) -> GradedAdY:
        y = self.principal_nilpotent().coordinates
        degs = self.degrees()
        blocks = {}
        basis = {j: self.basis_by_degree(j) for j in degs}
        for j in degs:
            target = basis.get(j + 2, [])
            tpos = {g: t for t, g in enumerate(target)}
            block = [[0] * len(basis[j]) for _ in range(len(target))]
            for c, src in enumerate(basis[j]):
                for i, x in enumerate(y):
                    if x == 0:
                        continue
                    for k, coeff in self.bracket_basis(i, src):
                        block[tpos[k]][c] += x * coeff
            blocks[j] = block
        return GradedAdY(tuple(degs), blocks, basis)

    # --- verification -----------------------------------------------------

    def _jacobi_triple(self, i: int, j: int, k: int) -> bool:
        acc = [0] * self.dim
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, coeff in self.bracket_basis(a, b):
                for n_, coeff2 in self.bracket_basis(m, c):
                    acc[n_] += coeff * coeff2
        return all(x == 0 for x in acc)

    def verify(self, full_jacobi_limit: int = 40, samples: int = 1500) -> None:
        """Check bracket-table invariants; raises ConsistencyError on failure.

        Jacobi is checked on every basis triple for small algebras and on a
        deterministic sample (plus all triples containing a simple root
        vector and a Cartan element) for large ones.
        """
        for k, r in enumerate(self.root_list[: self.n_pos]):
            i = self.rank + k
            j = self.root_index[_neg(r)]
            out = dict(self.bracket_basis(i, j))
            coroot = self._coroot[r]
            if [out.get(t, 0) for t in range(self.rank)] != list(coroot):
                raise ConsistencyError("[X_a, X_-a] is not the coroot")
        dims = {}
        for d in self.grading:
            dims[d] = dims.get(d, 0) + 1
        for d, c in dims.items():
            if dims.get(-d, 0) != c:
                raise ConsistencyError("grading is not symmetric")
        if self.dim <= full_jacobi_limit:
            triples = (
                (i, j, k)
                for i in range(self.dim)
                for j in range(i + 1, self.dim)
                for k in range(j + 1, self.dim)
            )
        else:
            rng = random.Random(0)
            simple_idx = [
                self.rank + k
                for k, r in enumerate(self.root_list)
                if abs(sum(r)) == 1
            ]
            triples = set()
            for i in simple_idx:
                for h in range(self.rank):
                    for k in range(self.dim):
                        triples.add(tuple(sorted((i, h, k))))
            for _ in range(samples):
                triples.add(tuple(sorted(rng.sample(range(self.dim), 3))))
            triples = sorted(t for t in triples if len(set(t)) == 3)
        for i, j, k in triples:
            if not self._jacobi_triple(i, j, k):
                raise ConsistencyError(f"Jacobi fails on basis triple {(i, j, k)}")

    def verify_jacobi_full(self) -> None:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    if not self._jacobi_triple(i, j, k):
                        raise ConsistencyError(
                            f"Jacobi fails on basis triple {(i, j, k)}"
                        )

    # --- export -----------------------------------------------------------

    def bracket_table_json(self) -> dict:
        table = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                ent = self.bracket_basis(i, j)
                if ent:
                    table[f"{i},{j}"] = [[k, c] for k, c in ent]
        return {
            "dim": self.dim,
            "labels": [
                lbl if lbl[0] == "H" else ("X", list(lbl[1]))
                for lbl in self.basis_labels
            ],
            "grading": list(self.grading),
            "brackets": table,
        }


@lru_cache(maxsize=None)
def build_algebra(datum: RootDatum) -> ChevalleyAlgebra:
    """Build and verify the Chevalley algebra of a supported datum."""
    return ChevalleyAlgebra(datum)


# --- matrix representations --------------------------------------------------

@dataclass(frozen=True)
class StandardRep:
    """Faithful integer matrix model of the algebra, bracket-compatible."""

    family: str
    rep_dim: int
    matrices: tuple  # per basis index, rep_dim x rep_dim integer matrices
    algebra: ChevalleyAlgebra = None

    def matrix_of(self, coords):
        n = self.rep_dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for idx, c in enumerate(coords):
            if c == 0:
                continue
            m = self.matrices[idx]
            for i in range(n):
                row = m[i]
                for j in range(n):
                    if row[j]:
                        out[i][j] += c * row[j]
        return out


def _gl_generators(n: int):
    def e(i, j):
        m = [[0] * n for _ in range(n)]
        m[i][j] = 1
        return m

    return e


def _family_for(datum: RootDatum) -> str:
    rs = datum.root_system
    if datum.isogeny == "GL_n":
        return "gl"
    if datum.isogeny == "simply_connected" and rs.components == (("A", rs.rank),):
        return "sl"
    if datum.isogeny == "simply_connected" and rs.components == (("C", rs.rank),):
        return "sp"
    return "adjoint"


def standard_rep(algebra: ChevalleyAlgebra, family: str = "auto") -> StandardRep:
    """Designated faithful representation of a gl/sl/sp datum, or the adjoint.

    Root vectors for non-simple roots are generated from the simple ones
    through the same extraspecial decompositions that define the abstract
    structure constants, so bracket compatibility is exact; it is verified
    on every pair of basis elements before returning.
    """
    if family == "auto":
        family = _family_for(algebra.datum)
    if family == "adjoint":
        mats = tuple(
            tuple(tuple(row) for row in algebra.ad_matrix(_unit(algebra.dim, i)))
            for i in range(algebra.dim)
        )
        rep = StandardRep("adjoint", algebra.dim, mats, algebra)
        _verify_rep(algebra, rep)
        return rep
    rs = algebra.datum.root_system
    r = rs.rank
    if family == "gl":
        m = r + 1
        e = _gl_generators(m)
        cartan = [e(i, i) for i in range(m)]
        simple_pos = {i: e(i, i + 1) for i in range(r)}
        simple_neg = {i: e(i + 1, i) for i in range(r)}
    elif family == "sl":
        m = r + 1
        e = _gl_generators(m)
        cartan = [mat_sub(e(i, i), e(i + 1, i + 1)) for i in range(r)]
        simple_pos = {i: e(i, i + 1) for i in range(r)}
        simple_neg = {i: e(i + 1, i) for i in range(r)}
    elif family == "sp":
        if rs.components != (("C", r),):
            raise ValueError("sp family needs a type C simply connected datum")
        m = 2 * r
        e = _gl_generators(m)
        cartan = []
        simple_pos = {}
        simple_neg = {}
        for i in range(r - 1):
            simple_pos[i] = mat_sub(e(i, i + 1), e(m - 2 - i, m - 1 - i))
            simple_neg[i] = mat_sub(e(i + 1, i), e(m - 1 - i, m - 2 - i))
            h = [[0] * m for _ in range(m)]
            for a, v in ((i, 1), (i + 1, -1), (m - 2 - i, 1), (m - 1 - i, -1)):
                h[a][a] = v
            cartan.append(h)
        simple_pos[r - 1] = e(r - 1, r)
        simple_neg[r - 1] = e(r, r - 1)
        h = [[0] * m for _ in range(m)]
        h[r - 1][r - 1], h[r][r] = 1, -1
        cartan.append(h)
    else:
        raise ValueError(f"unsupported representation family {family!r}")

    mats: list = [None] * algebra.dim
    for i in range(algebra.rank):
        mats[i] = cartan[i]
    simples = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    for i, s in enumerate(simples):
        mats[algebra.root_index[s]] = simple_pos[i]
        mats[algebra.root_index[_neg(s)]] = simple_neg[i]
    pending = [
        root
        for root in algebra.root_list[: algebra.n_pos]
        if sum(root) >= 2
    ]
    for root in pending:  # root_list is height sorted, so parts come first
        g, d = algebra.constants._extraspecial[root]
        for sign in (1, -1):
            a = g if sign == 1 else _neg(g)
            b = d if sign == 1 else _neg(d)
            tgt = root if sign == 1 else _neg(root)
            coeff = algebra.constants.n(a, b)
            prod = mat_sub(
                mat_mul(mats[algebra.root_index[a]], mats[algebra.root_index[b]]),
                mat_mul(mats[algebra.root_index[b]], mats[algebra.root_index[a]]),
            )
            mat = [[_exact_div(x, coeff) for x in row] for row in prod]
            mats[algebra.root_index[tgt]] = mat
    rep = StandardRep(
        family, len(mats[0]), tuple(tuple(tuple(row) for row in m) for m in mats),
        algebra,
    )
    _verify_rep(algebra, rep)
    if family == "sp":
        _check_symplectic(rep, symplectic_form_matrix(r))
    return rep


def symplectic_form_matrix(n: int):
    """Antidiagonal symplectic form on 2n coordinates: +1 upper, -1 lower."""
    m = 2 * n
    j = [[0] * m for _ in range(m)]
    for i in range(n):
        j[i][m - 1 - i] = 1
        j[m - 1 - i][i] = -1
    return j


def _check_symplectic(rep: StandardRep, j) -> None:
    for m in rep.matrices:
        mt = [list(row) for row in zip(*m)]
        lhs = mat_mul(mt, j)
        rhs = mat_mul(j, [list(r) for r in m])
        if not all(x + y == 0 for lr, rr in zip(lhs, rhs) for x, y in zip(lr, rr)):
            raise ConsistencyError("representation matrix is not symplectic")


def _exact_div(x: int, c: int) -> int:
    q, rem = divmod(x, c)
    if rem != 0:
        raise ConsistencyError("non-integral representation matrix")
    return q


def _unit(n: int, i: int):
    return tuple(1 if j == i else 0 for j in range(n))


def _verify_rep(algebra: ChevalleyAlgebra, rep: StandardRep) -> None:
    for i in range(algebra.dim):
        mi = [list(r) for r in rep.matrices[i]]
        for j in range(i + 1, algebra.dim):
            mj = [list(r) for r in rep.matrices[j]]
            comm = mat_sub(mat_mul(mi, mj), mat_mul(mj, mi))
            expect = [[0] * rep.rep_dim for _ in range(rep.rep_dim)]
            for k, c in algebra.bracket_basis(i, j):
                mk = rep.matrices[k]
                for a in range(rep.rep_dim):
                    for b in range(rep.rep_dim):
                        if mk[a][b]:
                            expect[a][b] += c * mk[a][b]
            if comm != expect:
                raise ConsistencyError(
                    f"representation incompatible with bracket at pair {(i, j)}"
                )


__all__ = [
    "ChevalleyAlgebra",
    "ConsistencyError",
    "GradedAdY",
    "PrincipalNilpotent",
    "StandardRep",
    "build_algebra",
    "rank_mod_p",
    "standard_rep",
    "symplectic_form_matrix",
]
