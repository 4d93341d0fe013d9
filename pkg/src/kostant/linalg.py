"""Exact linear algebra kernels over Z, Q and Z/p^k.

Everything here works with arbitrary-precision ints and Fractions; no
floating point anywhere. Matrices are plain lists of lists (row major).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf

Vec = list
Mat = list


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def val_p(x, p: int):
    """p-adic valuation of an int or Fraction; inf for zero."""
    if x == 0:
        return inf
    num = x.numerator if isinstance(x, Fraction) else x
    den = x.denominator if isinstance(x, Fraction) else 1
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def identity(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Mat:
    return [[0] * cols for _ in range(rows)]


def transpose(m: Mat) -> Mat:
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Mat) -> Mat:
    return [[c * x for x in row] for row in a]


def mat_copy(a: Mat) -> Mat:
    return [list(row) for row in a]


def mat_eq_zero(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form over Q. Returns (R, pivot column list)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Mat) -> list[Vec]:
    """Basis of the rational null space of m (column vectors as lists)."""
    if not m:
        return []
    r, pivots = rref(m)
    cols = len(m[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def solve(m: Mat, b: Vec) -> Vec | None:
    """One rational solution of m x = b with free variables set to 0."""
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    r, pivots = rref(aug)
    cols = len(m[0])
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, pc in enumerate(pivots):
        x[pc] = r[i][cols]
    return x


def det(m: Mat) -> Fraction:
    """Determinant via fraction-free-ish Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign = -sign
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * d


def invert(m: Mat) -> Mat:
    """Exact inverse of a square rational matrix."""
    n = len(m)
    aug = [list(row) + ident_row for row, ident_row in zip(m, identity(n))]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


# --- arithmetic mod p and mod p^k -------------------------------------------

def rref_mod_p(m: Mat, p: int) -> tuple[Mat, list[int]]:
    a = [[x % p for x in row] for row in m]
    rows, cols = len(a), len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] % p != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_mod_p(m: Mat, p: int) -> int:
    """Rank of an integer matrix over the field with p elements."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not m or not m[0]:
        return 0
    return len(rref_mod_p(m, p)[1])


class ModpSolver:
    """Repeated solves of M x = d over F_p for a fixed full-row-rank M."""

    def __init__(self, m: Mat, p: int):
        self.p = p
        self.cols = len(m[0])
        rows = len(m)
        aug = [[x % p for x in row] + irow for row, irow in zip(m, identity(rows))]
        r, pivots = rref_mod_p(aug, p)
        self.pivots = [c for c in pivots if c < self.cols]
        if len(self.pivots) != rows:
            raise ValueError("matrix does not have full row rank mod p")
        self.reduced = r

    def solve(self, d: Vec) -> Vec:
        p = self.p
        x = [0] * self.cols
        for i, pc in enumerate(self.pivots):
            row = self.reduced[i]
            x[pc] = sum(row[self.cols + j] * dv for j, dv in enumerate(d)) % p
        return x


def mat_mod(m: Mat, modulus: int) -> Mat:
    """Reduce a rational matrix mod p^k; denominators must be units."""
    out = []
    for row in m:
        orow = []
        for x in row:
            if isinstance(x, Fraction):
                orow.append(x.numerator * pow(x.denominator, -1, modulus) % modulus)
            else:
                orow.append(x % modulus)
        out.append(orow)
    return out


def invert_mod(m: Mat, modulus: int) -> Mat:
    """Inverse of an integer matrix mod p^k (pivot entries must be units)."""
    n = len(m)
    a = [[x % modulus for x in row] + irow for row, irow in zip(m, identity(n))]
    for c in range(n):
        pr = None
        for i in range(c, n):
            try:
                pow(a[i][c], -1, modulus)
                pr = i
                break
            except ValueError:
                continue
        if pr is None:
            raise ValueError("matrix not invertible modulo modulus")
        a[c], a[pr] = a[pr], a[c]
        inv = pow(a[c][c], -1, modulus)
        a[c] = [(x * inv) % modulus for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [(x - f * y) % modulus for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


# --- Smith normal form -------------------------------------------------------

@dataclass(frozen=True)
class SmithNormalForm:
    """U * A * V = diag(divisors), with recorded unimodular transforms."""

    diagonal: tuple[int, ...]
    left: tuple            # U
    left_inv: tuple        # U^-1
    right: tuple           # V
    right_inv: tuple       # V^-1
    shape: tuple[int, int]


def _freeze(m: Mat) -> tuple:
    return tuple(tuple(row) for row in m)


def smith_normal_form(m: Mat) -> SmithNormalForm:
    """Exact integer Smith normal form with divisibility chain d1 | d2 | ...

    Deterministic: the pivot is always the least (|value|, row, col) nonzero
    entry of the remaining submatrix.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u, uinv = identity(rows), identity(rows)
    v, vinv = identity(cols), identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]
        for r in uinv:
            r[src] -= c * r[dst]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]
        vinv[src] = [x - c * y for x, y in zip(vinv[src], vinv[dst])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    def find_pivot(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0:
                    key = (abs(a[i][j]), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        return None if best is None else (best[1], best[2])

    t = 0
    limit = min(rows, cols)
    while t < limit:
        loc = find_pivot(t)
        if loc is None:
            break
        swap_rows(t, loc[0])
        swap_cols(t, loc[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the trailing block by the pivot
        piv = a[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        if piv < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] for i in range(limit))
    return SmithNormalForm(diag, _freeze(u), _freeze(uinv), _freeze(v),
                           _freeze(vinv), (rows, cols))


def elementary_divisors(m: Mat) -> list[int]:
    """Nonzero Smith divisors of an integer matrix."""
    if not m or not m[0]:
        return []
    return [d for d in smith_normal_form(m).diagonal if d != 0]


def lattice_column_basis(m: Mat) -> list[Vec]:
    """Z-basis of the lattice generated by the columns of an integer matrix."""
    if not m or not m[0]:
        return []
    snf = smith_normal_form(m)
    uinv = snf.left_inv
    basis = []
    for i, d in enumerate(snf.diagonal):
        if d != 0:
            basis.append([d * uinv[r][i] for r in range(len(m))])
    return basis


# --- characteristic polynomial and friends -----------------------------------

def charpoly(m: Mat) -> list[Fraction]:
    """Coefficients [c0..cn] of det(tI - m) = sum c_i t^(n-i), c0 = 1.

    Faddeev-LeVerrier; exact over Fractions.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]
    mk = zeros(n, n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = mat_add(mat_mul(a, mk), mat_scale(c, identity(n)))
        am = mat_mul(a, mk)
        c = -Fraction(sum(am[i][i] for i in range(n)), k)
        coeffs.append(c)
    return coeffs


def elementary_symmetric_from_charpoly(coeffs: list[Fraction]) -> list[Fraction]:
    """e_1..e_n of the eigenvalues, from charpoly coefficients."""
    return [(-1) ** i * coeffs[i] for i in range(1, len(coeffs))]


def poly_derivative(coeffs: list[Fraction]) -> list[Fraction]:
    # coeffs c0..cn for sum c_i t^(n-i)
    n = len(coeffs) - 1
    return [coeffs[i] * (n - i) for i in range(n)]


def resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Resultant of two polynomials given by coefficient lists (leading first)."""
    n = len(f) - 1
    m = len(g) - 1
    if n < 0 or m < 0:
        return Fraction(0)
    size = n + m
    if size == 0:
        return Fraction(1)
    syl = zeros(size, size)
    for i in range(m):
        for j, c in enumerate(f):
            syl[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(g):
            syl[m + i][i + j] = c
    return det(syl)


def discriminant(coeffs: list[Fraction]) -> Fraction:
    """Discriminant of a monic polynomial given as charpoly-style coeffs."""
    n = len(coeffs) - 1
    if n <= 1:
        return Fraction(1)
    res = resultant(coeffs, poly_derivative(coeffs))
    sign = (-1) ** (n * (n - 1) // 2)
    return sign * res
