"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is exact and the stated time budgets are asserted.
"""

import hashlib
import random
import time
from fractions import Fraction

import pytest

from kostant.chevalley import build_algebra, standard_rep
from kostant.linalg import charpoly, discriminant, val_p
from kostant.padic import trace_form
from kostant.reduction import (
    check_selfdual,
    conjugate,
    constants,
    d_g_valuation,
    is_topologically_nilpotent,
    newton_root_valuations,
    random_group_element,
    random_section_point,
    reduce_to_section,
    verify_certificate,
)
from kostant.roots import catalog, catalog_datum, lambda_cocharacter
from kostant.sections import (
    excluded_n,
    invariant_system,
    invariants_chi,
    is_g_good,
    is_g_good_closed_form,
    is_n_good,
    section_for,
    section_invert,
)

PRIMES_LE_13 = (2, 3, 5, 7, 11, 13)

TYPE_PRIMES = {
    "A": set(), "C": set(),
    "B": {2}, "D": {2}, "G": {2},
    "F": {2, 3}, "E6": {2, 3}, "E7": {2, 3}, "E8": {2, 3, 5},
}


def _closed_form_n(datum):
    from kostant.roots import fundamental_group_order

    primes = set()
    for t, r in datum.root_system.components:
        primes |= TYPE_PRIMES[f"{t}{r}" if t == "E" else t]
    rest = fundamental_group_order(datum)
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            primes.add(d)
            while rest % d == 0:
                rest //= d
        d += 1
    if rest > 1:
        primes.add(rest)
    n = 1
    for p in sorted(primes):
        n *= p
    return n


def _family(t, r, iso):
    d = catalog_datum(t, r, iso)
    a = build_algebra(d)
    rep = standard_rep(a)
    return a, rep, invariant_system(rep), section_for(d)


def _rng(*parts) -> random.Random:
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _report(num, description, t0):
    print(f"ACCEPTANCE {num}: PASS  {description}  ({time.monotonic() - t0:.1f}s)")


def test_criterion_1_excluded_prime_tables():
    t0 = time.monotonic()
    for datum in catalog():
        assert excluded_n(datum) == _closed_form_n(datum), datum
    assert excluded_n(catalog_datum("E", 8, "simply_connected")) == 30
    assert excluded_n(catalog_datum("G", 2, "simply_connected")) == 2
    assert excluded_n(catalog_datum("C", 2, "simply_connected")) == 1
    for n in (2, 3, 4):
        assert excluded_n(catalog_datum("A", n - 1, "simply_connected")) == 1
        assert excluded_n(catalog_datum("A", n - 1, "GL_n")) == 1
    elapsed = time.monotonic() - t0
    assert elapsed < 60, f"budget exceeded: {elapsed:.1f}s"
    _report(1, "Smith-form excluded primes match the closed-form table", t0)


def test_criterion_2_goodness_classifiers():
    t0 = time.monotonic()
    for datum in catalog():
        n = excluded_n(datum)
        for p in PRIMES_LE_13:
            assert is_n_good(datum, p) == (n % p != 0), (datum, p)
            assert is_g_good(datum, p) == is_g_good_closed_form(datum, p), (datum, p)
    sp4 = catalog_datum("C", 2, "simply_connected")
    assert is_n_good(sp4, 2) and not is_g_good(sp4, 2)
    assert not is_g_good(catalog_datum("A", 2, "simply_connected"), 3)
    for n in (2, 3, 4):
        for p in PRIMES_LE_13:
            assert is_g_good(catalog_datum("A", n - 1, "GL_n"), p)
    elapsed = time.monotonic() - t0
    assert elapsed < 60, f"budget exceeded: {elapsed:.1f}s"
    _report(2, "rank-based goodness classifiers match the closed forms, p <= 13", t0)


def test_criterion_3_lambda_pairing():
    t0 = time.monotonic()
    for datum in catalog():
        lam = lambda_cocharacter(datum)
        r = datum.root_system.rank
        for i in range(r):
            simple = tuple(1 if j == i else 0 for j in range(r))
            assert datum.pairing(datum.embed_root(simple), lam.coordinates) == 2
    _report(3, "lambda pairs to 2 with every simple root of every catalog datum", t0)


def test_criterion_4_section_round_trip():
    t0 = time.monotonic()
    families = (
        [("A", n - 1, "GL_n") for n in (2, 3, 4)]
        + [("A", n - 1, "simply_connected") for n in (2, 3, 4)]
        + [("C", 2, "simply_connected")]
    )
    for key in families:
        algebra, rep, system, section = _family(*key)
        y = list(algebra.principal_nilpotent().coordinates)
        rng = _rng("sect4", key)
        for _ in range(100):
            c = [Fraction(rng.randint(-10**6, 10**6)) for _ in range(system.count)]
            xi = section_invert(section, system, c)
            got = invariants_chi(system, [u + v for u, v in zip(y, xi)])
            assert list(got) == c
    elapsed = time.monotonic() - t0
    assert elapsed < 120, f"budget exceeded: {elapsed:.1f}s"
    _report(4, "100 exact inversion round trips per family (gl2-4, sl2-4, sp4)", t0)


def test_criterion_5_reduction_round_trip():
    t0 = time.monotonic()
    combos = []
    for p in (3, 5, 7):
        combos.append((("A", 1, "GL_n"), p))       # gl_2
        combos.append((("A", 2, "GL_n"), p))       # gl_3
        if p != 3:
            combos.append((("A", 2, "simply_connected"), p))  # sl_3
        combos.append((("C", 2, "simply_connected"), p))      # sp_4
    precision = 20
    for key, p in combos:
        algebra, rep, system, section = _family(*key)
        y = list(algebra.principal_nilpotent().coordinates)
        rng = _rng("red5", key, p)
        mod = p**precision
        for _ in range(100):
            xi0 = random_section_point(section, rng, p)
            g0 = random_group_element(rep, rng, p)
            z = conjugate(rep, g0, [u + v for u, v in zip(y, xi0)])
            cert = reduce_to_section(rep, section, z, p, precision)
            assert list(cert.xi) == [x % mod for x in xi0]
            assert cert.residual >= precision
            checks = verify_certificate(rep, system, cert, z)
            assert all(checks.values()), checks
    elapsed = time.monotonic() - t0
    assert elapsed < 600, f"budget exceeded: {elapsed:.1f}s"
    _report(5, "100 reduction round trips per (family, p), certificates re-verified", t0)


def test_criterion_6_nilpotence_equivalence():
    t0 = time.monotonic()
    for key in (("A", 1, "GL_n"), ("A", 2, "GL_n"), ("C", 2, "simply_connected")):
        algebra, rep, system, _ = _family(*key)
        rng = _rng("nil6", key)
        p = 5
        for _ in range(500):
            coords = [
                Fraction(rng.randint(-9, 9)) * Fraction(p) ** rng.randint(-2, 2)
                for _ in range(algebra.dim)
            ]
            mat = rep.matrix_of(coords)
            verdict = is_topologically_nilpotent(system, mat, p)
            oracle = all(v > 0 for v in newton_root_valuations(charpoly(mat), p))
            assert verdict.is_topologically_nilpotent == oracle
    _report(6, "500 random verdicts per family agree with the Newton-polygon oracle", t0)


def test_criterion_7_selfdual_lattices():
    t0 = time.monotonic()
    cases = [
        (("A", 1, "simply_connected"), 5),
        (("A", 2, "simply_connected"), 5),
        (("C", 2, "simply_connected"), 3),
    ]
    for key, p in cases:
        algebra, rep, system, section = _family(*key)
        form = trace_form(algebra, rep, p)
        y = list(algebra.principal_nilpotent().coordinates)
        rng = _rng("sd7", key, p)
        done = 0
        while done < 50:
            xi0 = random_section_point(section, rng, p)
            x = [u + v for u, v in zip(y, xi0)]
            if discriminant(charpoly(rep.matrix_of(x))) == 0:
                continue
            report = check_selfdual(rep, form, x, p)
            assert report.dual_equality, (key, p)
            assert report.rank_identity, (key, p)
            done += 1
    _report(7, "dual-lattice equality and image-rank identity on 50 instances each", t0)


def test_criterion_8_constants():
    t0 = time.monotonic()
    assert constants(catalog_datum("A", 1, "simply_connected"), 5).exponent == -2
    assert constants(catalog_datum("A", 1, "simply_connected"), 7).exponent == -2
    assert constants(catalog_datum("A", 2, "GL_n"), 5).exponent == -6
    assert constants(catalog_datum("C", 2, "simply_connected"), 3).exponent == -8
    assert constants(catalog_datum("C", 2, "simply_connected"), 7).exponent == -8
    _, rep, _, _ = _family("A", 1, "simply_connected")
    for p in (3, 5, 7, 11):
        assert d_g_valuation(rep, [[0, 1], [p * p, 0]], p) == 2
    _report(8, "c_G exponents at good primes and the D_g valuation example", t0)
