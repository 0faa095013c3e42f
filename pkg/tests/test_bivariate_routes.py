import math
from fractions import Fraction as F

import pytest

from multimeixner.bivariate import (
    MeixnerSystem,
    amplitude_sq,
    matrix_element,
    monic_eval_gf,
    monic_eval_hyp,
    monic_eval_raising,
    orthonormal_eval,
    weight,
)
from multimeixner.errors import ModeError, NonGenericMatrix
from multimeixner.lorentz import boost, compose, identity
from multimeixner.numerics import ScalarMode, pochhammer, solve_linear_system

ROUTES = (monic_eval_raising, monic_eval_gf, monic_eval_hyp)


class TestSystemConstruction:
    def test_rejects_non_generic(self):
        with pytest.raises(NonGenericMatrix):
            MeixnerSystem(2, identity(2))

    def test_rejects_nonpositive_beta(self, canonical_matrix):
        with pytest.raises(ValueError):
            MeixnerSystem(0, canonical_matrix)

    def test_weight_parameters_inside_simplex(self, canonical_beta2):
        s = canonical_beta2
        assert s.c1 == F(144, 625)
        assert s.c2 == F(81, 625)
        assert s.c1 + s.c2 < 1

    def test_dual_round_trip(self, canonical_beta2):
        twice = canonical_beta2.dual().dual()
        assert twice.lam.entries == canonical_beta2.lam.entries


class TestBasePoints:
    @pytest.mark.parametrize("route", ROUTES)
    def test_constant_polynomial(self, canonical_beta2, route):
        assert route(canonical_beta2, 0, 0, 3, 5) == 1

    @pytest.mark.parametrize("route", ROUTES)
    def test_all_degrees_at_origin(self, canonical_beta2, route):
        assert all(
            route(canonical_beta2, m, n, 0, 0) == 1 for m in range(4) for n in range(4)
        )

    def test_hyp_kills_terms_through_degree_factorials(self, canonical_beta2):
        assert monic_eval_hyp(canonical_beta2, 0, 0, 4, 2) == 1
        assert monic_eval_hyp(canonical_beta2, 3, 2, 0, 0) == 1


class TestRouteEquivalence:
    def test_three_routes_small_box(self, seeded_systems, beta_values):
        for base in seeded_systems:
            for beta in beta_values:
                sys2 = MeixnerSystem(beta, base.lam)
                for m in range(4):
                    for n in range(4 - m):
                        for i in range(4):
                            for k in range(4):
                                ref = monic_eval_gf(sys2, m, n, i, k)
                                assert monic_eval_raising(sys2, m, n, i, k) == ref
                                assert monic_eval_hyp(sys2, m, n, i, k) == ref

    def test_first_degree_is_affine(self, canonical_beta2):
        s = canonical_beta2
        beta = s.beta
        # fit a + b*i + c*k through the oracle at three nodes
        nodes = [(0, 0), (1, 0), (0, 1)]
        rows = [[F(1), F(i), F(k)] for (i, k) in nodes]
        rhs = [monic_eval_gf(s, 1, 0, i, k) for (i, k) in nodes]
        a, b, c = solve_linear_system(rows, rhs)
        # the raising route reproduces the affine model away from the nodes
        assert monic_eval_raising(s, 1, 0, 2, 3) == a + 2 * b + 3 * c
        assert b == (1 - s.u11) / beta
        assert c == (1 - s.u21) / beta

    @pytest.mark.parametrize("degrees", [(2, 1), (0, 3), (2, 2)])
    def test_total_degree_interpolation(self, seeded_systems, degrees):
        m, n = degrees
        deg = m + n
        for sys2 in seeded_systems:
            nodes = [(a, b) for a in range(deg + 1) for b in range(deg + 1 - a)]
            monomials = nodes
            rows = [
                [F(a**p * b**q) for (p, q) in monomials] for (a, b) in nodes
            ]
            rhs = [monic_eval_gf(sys2, m, n, a, b) for (a, b) in nodes]
            coeffs = solve_linear_system(rows, rhs)

            def interp(i, k):
                return sum(
                    c * i**p * k**q for c, (p, q) in zip(coeffs, monomials)
                )

            for probe in ((deg + 1, 0), (deg, deg), (0, deg + 2), (3, 4)):
                assert interp(*probe) == monic_eval_gf(sys2, m, n, *probe)


class TestWeight:
    def test_base_point(self, canonical_beta2):
        s = canonical_beta2
        assert weight(s, 0, 0) == (1 - s.c1 - s.c2) ** 2

    def test_first_step(self, canonical_beta2):
        s = canonical_beta2
        assert weight(s, 1, 0) == 2 * s.c1 * (1 - s.c1 - s.c2) ** 2

    def test_exact_needs_integer_beta(self, canonical_matrix):
        s = MeixnerSystem(F(5, 2), canonical_matrix)
        with pytest.raises(ModeError):
            weight(s, 0, 0)
        assert weight(s.with_mode(ScalarMode.FLOAT), 0, 0) > 0

    def test_partial_sums_reach_one(self, canonical_beta2_float):
        s = canonical_beta2_float
        total = sum(weight(s, i, k) for i in range(61) for k in range(61 - i))
        assert abs(total - 1.0) < 1e-10

    def test_negative_point_rejected(self, canonical_beta2):
        with pytest.raises(ValueError):
            weight(canonical_beta2, -1, 0)


class TestAmplitude:
    def test_base_point(self, canonical_beta2):
        s = canonical_beta2
        assert amplitude_sq(s, 0, 0) == s.l33 ** (-4)

    def test_equals_weight(self, canonical_beta2):
        s = canonical_beta2
        for i in range(7):
            for k in range(7):
                assert amplitude_sq(s, i, k) == weight(s, i, k)

    def test_float_base_amplitude(self, canonical_beta2_float):
        s = canonical_beta2_float
        got = math.sqrt(amplitude_sq(s, 0, 0))
        assert got == pytest.approx(float(s.l33) ** -2.0, abs=1e-15)
        assert got > 0


class TestOrthonormalAndMatrixElements:
    def test_degree_zero_is_one(self, canonical_beta2_float):
        assert orthonormal_eval(canonical_beta2_float, 0, 0, 2, 4) == 1.0

    def test_odd_degree_sign(self):
        # all-positive matrix entries make odd-degree values negative
        lam = compose(boost((2, 3), 2, 2), boost((1, 3), 3, 2))
        s = MeixnerSystem(2, lam, ScalarMode.FLOAT)
        assert orthonormal_eval(s, 1, 0, 0, 0) < 0
        assert orthonormal_eval(s, 0, 1, 0, 0) < 0

    def test_requires_float_mode(self, canonical_beta2):
        with pytest.raises(ModeError):
            orthonormal_eval(canonical_beta2, 0, 0, 0, 0)
        with pytest.raises(ModeError):
            matrix_element(canonical_beta2, 0, 0, 0, 0)

    def test_matrix_element_base_point(self, canonical_beta2_float):
        s = canonical_beta2_float
        assert matrix_element(s, 0, 0, 0, 0) == pytest.approx(
            float(s.l33) ** -2.0, abs=1e-15
        )

    def test_column_norm_is_one(self, canonical_beta2_float):
        s = canonical_beta2_float
        total = sum(
            matrix_element(s, i, k, 1, 1) ** 2 for i in range(45) for k in range(45)
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_distinct_columns_orthogonal(self, canonical_beta2_float):
        s = canonical_beta2_float
        total = sum(
            matrix_element(s, i, k, 1, 1) * matrix_element(s, i, k, 0, 2)
            for i in range(45)
            for k in range(45)
        )
        assert total == pytest.approx(0.0, abs=1e-8)


def test_pochhammer_scale_between_monic_and_orthonormal(canonical_beta2_float):
    # |M_{m,n}| = sqrt((beta)_{m+n} / (m! n!)) |l31^m l32^n / l33^{m+n}| |R_{m,n}|
    s = canonical_beta2_float
    exact = MeixnerSystem(s.beta, s.lam)
    m, n, i, k = 2, 1, 3, 1
    scale = math.sqrt(float(pochhammer(s.beta, m + n) / (math.factorial(m) * math.factorial(n))))
    geom = abs(float(s.l31**m * s.l32**n / s.l33 ** (m + n)))
    assert abs(orthonormal_eval(s, m, n, i, k)) == pytest.approx(
        scale * geom * abs(float(monic_eval_gf(exact, m, n, i, k))), rel=1e-12
    )
