import math
import random
from fractions import Fraction

import pytest

from kostant.chevalley import build_algebra, standard_rep
from kostant.padic import (
    FormNotPerfect,
    LieElement,
    MPLattice,
    PadicScalar,
    PrecisionExhausted,
    dual_lattice_levels,
    dual_pair_is_perfect,
    lattice_membership,
    trace_form,
)
from kostant.roots import catalog_datum
from kostant.sections import invariant_system

INF = math.inf


class TestScalar:
    def test_valuations(self):
        p = 7
        assert PadicScalar.exact(p, p * p).valuation() == 2
        assert PadicScalar.exact(p, 0).valuation() == INF
        assert PadicScalar.exact(p, Fraction(3, p)).valuation() == -1

    def test_multiplicativity_and_ultrametric(self):
        rng = random.Random(13)
        p = 5
        for _ in range(1000):
            a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            b = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            x, y = PadicScalar.exact(p, a), PadicScalar.exact(p, b)
            if a != 0 and b != 0:
                assert (x * y).valuation() == x.valuation() + y.valuation()
            s = x + y
            if a + b != 0:
                assert s.valuation() >= min(x.valuation(), y.valuation())

    def test_truncated(self):
        p = 5
        x = PadicScalar.truncated(p, 50, 6)
        assert x.valuation() == 2
        zero_ish = PadicScalar.truncated(p, 5**6, 6)
        with pytest.raises(PrecisionExhausted):
            zero_ish.valuation()

    def test_mixed_arithmetic(self):
        p = 5
        x = PadicScalar.exact(p, 7)
        t = PadicScalar.truncated(p, 3, 4)
        s = x + t
        assert not s.is_exact and s.precision == 4
        assert s.residue == 10

    def test_reduce_and_json(self):
        p = 5
        x = PadicScalar.exact(p, Fraction(1, 2))
        t = x.reduce(3)
        assert t.residue == (1 * pow(2, -1, 125)) % 125
        assert PadicScalar.from_json(x.to_json(), p).value == Fraction(1, 2)
        j = t.to_json()
        assert j == ["0", str(t.residue), 3]
        with pytest.raises(ValueError):
            PadicScalar.exact(p, Fraction(1, p)).reduce(3)


class TestLattices:
    def setup_method(self):
        self.algebra = build_algebra(catalog_datum("A", 1, "simply_connected"))
        self.p = 5

    def element(self, coords):
        return LieElement.from_rationals(self.algebra, self.p, coords)

    def test_y_membership(self):
        y = self.element(list(self.algebra.principal_nilpotent().coordinates))
        assert lattice_membership(y, 0)
        assert not lattice_membership(y, 0, plus=True)

    def test_scaled_membership(self):
        p = self.p
        py = self.element([p * c for c in self.algebra.principal_nilpotent().coordinates])
        assert lattice_membership(py, 1)
        assert lattice_membership(py, Fraction(1, 2))
        assert not lattice_membership(py, 1, plus=True)

    def test_effective_exponents(self):
        assert MPLattice(Fraction(0)).effective_exponent() == 0
        assert MPLattice(Fraction(0), plus=True).effective_exponent() == 1
        assert MPLattice(Fraction(1, 2)).effective_exponent() == 1
        assert MPLattice(Fraction(1, 2), plus=True).effective_exponent() == 1
        assert MPLattice(Fraction(-1)).effective_exponent() == -1
        # g_{x,r+1} = p g_{x,r}
        for r in (Fraction(0), Fraction(1, 2), Fraction(2)):
            assert MPLattice(r + 1).effective_exponent() == MPLattice(r).effective_exponent() + 1


class TestTraceForm:
    def test_sl2_values(self):
        a = build_algebra(catalog_datum("A", 1, "simply_connected"))
        form = trace_form(a, standard_rep(a))
        assert form.gram == ((2, 0, 0), (0, 0, 1), (0, 1, 0))
        assert form.determinant() == -2
        trace_form(a, standard_rep(a), 3)  # perfect away from 2
        with pytest.raises(FormNotPerfect):
            trace_form(a, standard_rep(a), 2)

    def test_gl_unimodular(self):
        for n in (2, 3):
            a = build_algebra(catalog_datum("A", n - 1, "GL_n"))
            form = trace_form(a, standard_rep(a))
            assert abs(form.determinant()) == 1
            for p in (2, 3, 5):
                trace_form(a, standard_rep(a), p)

    def test_sl3_not_perfect_at_3(self):
        a = build_algebra(catalog_datum("A", 2, "simply_connected"))
        with pytest.raises(FormNotPerfect):
            trace_form(a, standard_rep(a), 3)
        trace_form(a, standard_rep(a), 5)

    def test_sp4_perfect_at_odd(self):
        a = build_algebra(catalog_datum("C", 2, "simply_connected"))
        rep = standard_rep(a)
        for p in (3, 5, 7):
            trace_form(a, rep, p)

    def test_ad_invariance_is_checked(self):
        # construction runs the full basis-triple invariance check
        a = build_algebra(catalog_datum("A", 2, "GL_n"))
        trace_form(a, standard_rep(a))


class TestDualLattices:
    def test_full_lattice_perfect_form(self):
        a = build_algebra(catalog_datum("A", 1, "GL_n"))
        form = trace_form(a, standard_rep(a), 5)
        gens = [[1 if j == i else 0 for j in range(a.dim)] for i in range(a.dim)]
        vals = dual_lattice_levels(form.pair, gens, 5)
        assert vals == [0] * a.dim

    def test_rank_zero_quotient(self):
        a = build_algebra(catalog_datum("A", 1, "simply_connected"))
        form = trace_form(a, standard_rep(a), 5)
        gens = [[1 if j == i else 0 for j in range(a.dim)] for i in range(a.dim)]
        full = [[Fraction(1) if j == i else Fraction(0) for j in range(a.dim)]
                for i in range(a.dim)]
        assert dual_lattice_levels(form.pair, gens, 5, modulo=full) == []

    def test_filtration_duality_shifts(self):
        # the mixed pairing of g_{x,(-r)+} with g_{x,r} lands in p*O unimodularly,
        # identifying g_{x,r} with the twisted dual of g_{x,(-r)+}
        from kostant.linalg import det, smith_normal_form, val_p

        for key in (("A", 1, "simply_connected"), ("A", 1, "GL_n")):
            a = build_algebra(catalog_datum(key[0], key[1], key[2]))
            p = 5
            form = trace_form(a, standard_rep(a), p)
            for r in range(-2, 3):
                lo = MPLattice(Fraction(-r), plus=True).effective_exponent()
                hi = MPLattice(Fraction(r)).effective_exponent()
                assert lo + hi == 1
                basis_lo = [
                    [Fraction(p) ** lo if j == i else Fraction(0) for j in range(a.dim)]
                    for i in range(a.dim)
                ]
                basis_hi = [
                    [Fraction(p) ** hi if j == i else Fraction(0) for j in range(a.dim)]
                    for i in range(a.dim)
                ]
                gram = [[form.pair(u, v) for v in basis_hi] for u in basis_lo]
                assert all(val_p(x, p) >= 1 for row in gram for x in row if x != 0)
                assert val_p(det(gram), p) == a.dim

    def test_symplectic_gram_for_section_point(self):
        # X = [[0,1],[p^2,0]] in sl_2: lattice image of g_{x,0+} has divisors {2,2}
        a = build_algebra(catalog_datum("A", 1, "simply_connected"))
        rep = standard_rep(a)
        p = 5
        form = trace_form(a, rep, p)
        from kostant.linalg import kernel_basis
        from kostant.reduction import algebra_coordinates

        coords = algebra_coordinates(rep, [[0, 1], [p * p, 0]])
        t_x = kernel_basis(a.ad_matrix(coords))

        def pairing(u, v):
            return form.pair(coords, a.bracket(u, v))

        gens = [
            [Fraction(p) if j == i else Fraction(0) for j in range(a.dim)]
            for i in range(a.dim)
        ]
        vals = dual_lattice_levels(pairing, gens, p, modulo=t_x)
        assert vals == [2, 2]

    def test_dual_pair_detection(self):
        a = build_algebra(catalog_datum("A", 1, "GL_n"))
        p = 5
        form = trace_form(a, standard_rep(a), p)
        basis = [[Fraction(1) if j == i else Fraction(0) for j in range(a.dim)]
                 for i in range(a.dim)]
        assert dual_pair_is_perfect(form.pair, basis, basis, p)
        scaled = [[p * x for x in row] for row in basis]
        assert not dual_pair_is_perfect(form.pair, scaled, basis, p)


class TestPadicElimination:
    def test_divisor_valuations_match_snf_oracle(self):
        from kostant.linalg import elementary_divisors, val_p
        from kostant.padic import padic_divisor_valuations

        rng = random.Random(31)
        for _ in range(60):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            m = [[rng.randint(-40, 40) for _ in range(cols)] for _ in range(rows)]
            for p in (2, 3, 5):
                oracle = sorted(val_p(d, p) for d in elementary_divisors(m))
                assert padic_divisor_valuations(m, p) == oracle

    def test_lattice_basis_spans_generators(self):
        from kostant.linalg import solve, val_p
        from kostant.padic import lattice_basis_from_generators, padic_divisor_valuations

        rng = random.Random(32)
        p = 5
        for _ in range(40):
            d = rng.randint(1, 4)
            gens = [
                [Fraction(rng.randint(-9, 9)) * Fraction(p) ** rng.randint(-1, 2)
                 for _ in range(d)]
                for _ in range(rng.randint(1, 5))
            ]
            basis = lattice_basis_from_generators(gens, p)
            gen_mat = [[g[i] for g in gens] for i in range(d)]
            expected_rank = len(padic_divisor_valuations(gen_mat, p))
            assert len(basis) == expected_rank
            if not basis:
                continue
            basis_mat = [[b[i] for b in basis] for i in range(d)]
            for g in gens:
                sol = solve(basis_mat, g)
                assert sol is not None
                assert all(x == 0 or val_p(x, p) >= 0 for x in sol)
