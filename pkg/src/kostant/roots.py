"""Root systems and root data for the built-in split families.

Roots are stored as integer coordinate vectors in the simple-root basis,
positive roots in nondecreasing height order with lexicographic tie-break.
A root datum fixes character/cocharacter lattices for one of the isogeny
labels: simply connected, adjoint, or GL_n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import elementary_divisors

SIMPLY_CONNECTED = "simply_connected"
ADJOINT = "adjoint"
GL = "GL_n"

_ISOGENY_ALIASES = {
    "sc": SIMPLY_CONNECTED,
    "simply_connected": SIMPLY_CONNECTED,
    "ad": ADJOINT,
    "adjoint": ADJOINT,
    "gl": GL,
    "GL_n": GL,
}


def isogeny_label(name: str) -> str:
    try:
        return _ISOGENY_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown isogeny label {name!r}") from None


def _cartan_matrix(cartan_type: str, rank: int) -> list[list[int]]:
    """Cartan matrix with A[i][j] = <alpha_j, alpha_i^vee> (Bourbaki numbering)."""
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        # A[i][j] = <alpha_j, alpha_i^vee>
        a[i][j] = aij
        a[j][i] = aji

    if cartan_type == "A":
        # rank 0 is allowed: the empty system underlying GL_1
        if n < 0:
            raise ValueError("type A needs rank >= 0")
        for i in range(n - 1):
            bond(i, i + 1)
    elif cartan_type == "B":
        # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
        if n < 2:
            raise ValueError("type B needs rank >= 2")
        for i in range(n - 2):
            bond(i, i + 1)
        a[n - 2][n - 1] = -1
        a[n - 1][n - 2] = -2
    elif cartan_type == "C":
        # alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
        if n < 2:
            raise ValueError("type C needs rank >= 2")
        for i in range(n - 2):
            bond(i, i + 1)
        a[n - 2][n - 1] = -2
        a[n - 1][n - 2] = -1
    elif cartan_type == "D":
        if n < 3:
            raise ValueError("type D needs rank >= 3")
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif cartan_type == "E":
        if n not in (6, 7, 8):
            raise ValueError("type E needs rank in {6, 7, 8}")
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for x, y in zip(chain, chain[1:]):
            bond(x, y)
        bond(1, 3)
    elif cartan_type == "F":
        if n != 4:
            raise ValueError("type F needs rank 4")
        bond(0, 1)
        a[1][2] = -1
        a[2][1] = -2
        bond(2, 3)
    elif cartan_type == "G":
        if n != 2:
            raise ValueError("type G needs rank 2")
        # alpha_1 short, alpha_2 long
        a[0][1] = -3
        a[1][0] = -1
    else:
        raise ValueError(f"unknown Cartan type {cartan_type!r}")
    return a


def _symmetrizers(cartan: list[list[int]], components: list[list[int]]) -> list[int]:
    """Minimal positive d_i with d_i A[i][j] = d_j A[j][i] (per component)."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for comp in components:
        d[comp[0]] = Fraction(1)
        queue = [comp[0]]
        while queue:
            i = queue.pop()
            for j in comp:
                if cartan[i][j] != 0 and i != j and d[j] is None:
                    d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    queue.append(j)
        low = min(d[i] for i in comp)
        for i in comp:
            d[i] = d[i] / low
    out = []
    for x in d:
        assert x is not None and x.denominator == 1
        out.append(int(x))
    return out


def _enumerate_positive_roots(cartan: list[list[int]]) -> list[tuple[int, ...]]:
    """All positive roots (simple-root coordinates), built height by height."""
    n = len(cartan)
    simples = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simples)
    layer = list(simples)
    ordered = [sorted(simples)]
    while layer:
        nxt = set()
        for r in layer:
            for i in range(n):
                pairing = sum(r[j] * cartan[i][j] for j in range(n))
                down = 0
                cur = list(r)
                while True:
                    cur[i] -= 1
                    if cur[i] >= 0 and (tuple(cur) in roots or all(c == 0 for c in cur)):
                        if all(c == 0 for c in cur):
                            break
                        down += 1
                    else:
                        break
                if down - pairing > 0:
                    cand = tuple(r[j] + (1 if j == i else 0) for j in range(n))
                    if cand not in roots:
                        nxt.add(cand)
        roots |= nxt
        layer = sorted(nxt)
        if layer:
            ordered.append(layer)
    out = []
    for group in ordered:
        out.extend(group)
    return out


@dataclass(frozen=True)
class RootSystem:
    """A (possibly reducible) finite root system with a fixed positive order."""

    cartan_type: str
    rank: int
    components: tuple[tuple[str, int], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]

    @property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    def height(self, root) -> int:
        return sum(root)

    def inner(self, a, b) -> Fraction:
        """W-invariant inner product, normalized so short roots have norm 2."""
        acc = Fraction(0)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0 and self.cartan_matrix[i][j] != 0:
                    acc += x * y * self.symmetrizers[i] * self.cartan_matrix[i][j]
        return acc

    def cartan_pairing(self, root, coroot_of) -> int:
        """<root, coroot_of^vee> computed from the Cartan data."""
        num = 2 * self.inner(root, coroot_of)
        den = self.inner(coroot_of, coroot_of)
        q = num / den
        assert q.denominator == 1
        return int(q)

    def coroot_coordinates(self, root) -> tuple[int, ...]:
        """Coordinates of root^vee in the simple-coroot basis."""
        norm = self.inner(root, root)
        coords = []
        for i, x in enumerate(root):
            c = Fraction(x) * 2 * self.symmetrizers[i] / norm
            assert c.denominator == 1
            coords.append(int(c))
        return tuple(coords)

    def has_factor(self, cartan_type: str, min_rank: int = 0) -> bool:
        return any(t == cartan_type and r >= min_rank for t, r in self.components)


@lru_cache(maxsize=None)
def build_root_system(cartan_type: str, rank: int) -> RootSystem:
    """Root system of a simple type; positive roots in (height, lex) order."""
    cartan = _cartan_matrix(cartan_type, rank)
    comps = [list(range(rank))] if rank else []
    sym = _symmetrizers(cartan, comps)
    pos = _enumerate_positive_roots(cartan)
    return RootSystem(
        cartan_type=cartan_type,
        rank=rank,
        components=((cartan_type, rank),),
        cartan_matrix=tuple(tuple(r) for r in cartan),
        positive_roots=tuple(pos),
        symmetrizers=tuple(sym),
    )


def direct_sum_root_system(a: RootSystem, b: RootSystem) -> RootSystem:
    """Orthogonal direct sum; roots re-sorted in the combined (height, lex) order."""
    n = a.rank + b.rank
    cartan = [[0] * n for _ in range(n)]
    for i in range(a.rank):
        for j in range(a.rank):
            cartan[i][j] = a.cartan_matrix[i][j]
    for i in range(b.rank):
        for j in range(b.rank):
            cartan[a.rank + i][a.rank + j] = b.cartan_matrix[i][j]
    pos = [r + (0,) * b.rank for r in a.positive_roots]
    pos += [(0,) * a.rank + r for r in b.positive_roots]
    pos.sort(key=lambda r: (sum(r), r))
    return RootSystem(
        cartan_type=f"{a.cartan_type}+{b.cartan_type}",
        rank=n,
        components=a.components + b.components,
        cartan_matrix=tuple(tuple(r) for r in cartan),
        positive_roots=tuple(pos),
        symmetrizers=a.symmetrizers + b.symmetrizers,
    )


@dataclass(frozen=True)
class RootDatum:
    """Root system plus character/cocharacter lattices for one isogeny label.

    root_embedding (resp. coroot_embedding) holds the simple roots (resp.
    simple coroots) as rows, in coordinates on X*(T) (resp. X_*(T)); the two
    bases are dual, so the canonical pairing is the dot product.
    """

    root_system: RootSystem
    isogeny: str
    character_lattice_rank: int
    root_embedding: tuple[tuple[int, ...], ...]
    coroot_embedding: tuple[tuple[int, ...], ...]

    def embed_root(self, root) -> tuple[int, ...]:
        cr = self.character_lattice_rank
        out = [0] * cr
        for i, c in enumerate(root):
            if c:
                for k in range(cr):
                    out[k] += c * self.root_embedding[i][k]
        return tuple(out)

    def embed_coroot(self, root) -> tuple[int, ...]:
        coords = self.root_system.coroot_coordinates(root)
        cr = self.character_lattice_rank
        out = [0] * cr
        for i, c in enumerate(coords):
            if c:
                for k in range(cr):
                    out[k] += c * self.coroot_embedding[i][k]
        return tuple(out)

    def pairing(self, char_vec, cochar_vec) -> int:
        return sum(x * y for x, y in zip(char_vec, cochar_vec))

    @property
    def semisimple_rank(self) -> int:
        return self.root_system.rank

    @property
    def dim(self) -> int:
        return self.character_lattice_rank + 2 * self.root_system.num_positive


@dataclass(frozen=True)
class LambdaCocharacter:
    """Sum of all positive coroots; pairs to 2 with every simple root."""

    coordinates: tuple[int, ...]


def build_root_datum(root_system: RootSystem, isogeny: str) -> RootDatum:
    label = isogeny_label(isogeny)
    rs = root_system
    r = rs.rank
    if label == GL:
        if rs.components != (("A", r),):
            raise ValueError("GL_n label requires a single type-A root system")
        n = r + 1
        root_emb = []
        coroot_emb = []
        for i in range(r):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            root_emb.append(tuple(v))
            coroot_emb.append(tuple(v))
        return RootDatum(rs, label, n, tuple(root_emb), tuple(coroot_emb))
    if label == SIMPLY_CONNECTED:
        # X_*(T) = coroot lattice on the simple-coroot basis,
        # X*(T) = its dual (the weight lattice on the fundamental weights).
        root_emb = tuple(
            tuple(rs.cartan_pairing(simple, other) for other in _simples(rs))
            for simple in _simples(rs)
        )
        coroot_emb = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        return RootDatum(rs, label, r, root_emb, coroot_emb)
    if label == ADJOINT:
        # X*(T) = root lattice on the simple roots, X_*(T) = coweight lattice.
        root_emb = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        coroot_emb = tuple(
            tuple(rs.cartan_pairing(other, simple) for other in _simples(rs))
            for simple in _simples(rs)
        )
        return RootDatum(rs, label, r, root_emb, coroot_emb)
    raise ValueError(f"unsupported isogeny label {label!r}")


def _simples(rs: RootSystem):
    return [tuple(1 if j == i else 0 for j in range(rs.rank)) for i in range(rs.rank)]


def direct_sum_datum(a: RootDatum, b: RootDatum) -> RootDatum:
    rs = direct_sum_root_system(a.root_system, b.root_system)
    cr = a.character_lattice_rank + b.character_lattice_rank
    # simple roots of the sum are interleaved by the re-sorted order of simples;
    # simples all have height 1, so their relative order is the block order.
    root_emb = [row + (0,) * b.character_lattice_rank for row in a.root_embedding]
    root_emb += [(0,) * a.character_lattice_rank + row for row in b.root_embedding]
    coroot_emb = [row + (0,) * b.character_lattice_rank for row in a.coroot_embedding]
    coroot_emb += [(0,) * a.character_lattice_rank + row for row in b.coroot_embedding]
    label = a.isogeny if a.isogeny == b.isogeny else f"{a.isogeny}x{b.isogeny}"
    return RootDatum(rs, label, cr, tuple(root_emb), tuple(coroot_emb))


def lambda_cocharacter(datum: RootDatum) -> LambdaCocharacter:
    cr = datum.character_lattice_rank
    total = [0] * cr
    for root in datum.root_system.positive_roots:
        emb = datum.embed_coroot(root)
        for k in range(cr):
            total[k] += emb[k]
    lam = LambdaCocharacter(tuple(total))
    for simple in _simples(datum.root_system):
        assert datum.pairing(datum.embed_root(simple), lam.coordinates) == 2
    return lam


def fundamental_group_order(datum: RootDatum) -> int:
    """Order of (coweight lattice of the derived system) / (coroot lattice)."""
    mat = [list(row) for row in datum.coroot_embedding]
    divs = elementary_divisors(mat)
    out = 1
    for d in divs:
        out *= d
    return out


def center_component_order(datum: RootDatum) -> int:
    """Order of the component group of the center, for the built-in catalog.

    Simply connected labels have finite center of order det(Cartan matrix);
    adjoint labels have trivial center; GL_n has connected center.
    """
    if datum.isogeny == GL:
        return 1
    if datum.isogeny == ADJOINT:
        return 1
    from .linalg import det

    d = det([list(row) for row in datum.root_system.cartan_matrix])
    assert d.denominator == 1 and d > 0
    return int(d)


# --- JSON interchange --------------------------------------------------------

def datum_to_json(datum: RootDatum, extended: bool = False) -> dict:
    rs = datum.root_system
    doc = {
        "type": rs.cartan_type,
        "rank": rs.rank,
        "isogeny": datum.isogeny,
    }
    if extended:
        doc["cartan_matrix"] = [list(r) for r in rs.cartan_matrix]
        doc["positive_roots"] = [list(r) for r in rs.positive_roots]
        doc["root_embedding"] = [list(r) for r in datum.root_embedding]
        doc["coroot_embedding"] = [list(r) for r in datum.coroot_embedding]
        doc["character_lattice_rank"] = datum.character_lattice_rank
    return doc


def datum_from_json(doc) -> RootDatum:
    if isinstance(doc, str):
        doc = json.loads(doc)
    rs = build_root_system(doc["type"], int(doc["rank"]))
    return build_root_datum(rs, doc["isogeny"])


@lru_cache(maxsize=None)
def catalog_datum(cartan_type: str, rank: int, isogeny: str) -> RootDatum:
    return build_root_datum(build_root_system(cartan_type, rank), isogeny)


def catalog() -> list[RootDatum]:
    """Every built-in datum used by the acceptance sweeps."""
    out = []
    simple_types = (
        [("A", r) for r in range(1, 8)]
        + [("B", r) for r in (3, 4)]
        + [("C", r) for r in (2, 3, 4)]
        + [("D", r) for r in (4, 5)]
        + [("E", r) for r in (6, 7, 8)]
        + [("F", 4), ("G", 2)]
    )
    for t, r in simple_types:
        out.append(catalog_datum(t, r, SIMPLY_CONNECTED))
        out.append(catalog_datum(t, r, ADJOINT))
    for n in (2, 3, 4):
        out.append(catalog_datum("A", n - 1, GL))
    return out
