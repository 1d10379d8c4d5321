import random
from fractions import Fraction as F

import pytest

from rootsigns.exactpoly import (
    ExactPolynomial,
    RootCount,
    add,
    count_roots,
    derivative,
    format_rational,
    multiply,
    parse_rational,
    polynomial_from_strings,
    polynomial_to_strings,
    scale_tail,
    sign_pattern_of,
    squarefree_decomposition,
    sturm_count,
)
from rootsigns.patterns import SignPattern


def P(*ascending):
    return ExactPolynomial([F(c) for c in ascending])


X_MINUS_1 = P(-1, 1)
X_PLUS_1 = P(1, 1)


class TestRing:
    def test_multiply_difference_of_squares(self):
        assert multiply(X_MINUS_1, X_PLUS_1) == P(-1, 0, 1)

    def test_derivative_cube(self):
        assert derivative(P(0, 0, 0, 1)) == P(0, 0, 3)

    def test_derivative_of_constant_is_zero(self):
        assert derivative(P(5)).is_zero

    def test_three_factor_expansion(self):
        # (x^2 - 2x + 1)(x + 1) = x^3 - x^2 - x + 1
        assert multiply(P(1, -2, 1), X_PLUS_1) == P(1, -1, -1, 1)

    def test_add(self):
        assert add(P(1, 2), P(1, -2)) == P(2)

    def test_zero_coefficient_trimming(self):
        p = add(P(0, 1), P(1, -1))
        assert p.degree == 0 and p.coefficients == (F(1),)


class TestScaleTail:
    def test_linear(self):
        assert scale_tail(X_PLUS_1, F(1, 2)) == P(F(1, 2), 1)

    def test_quadratic(self):
        assert scale_tail(P(2, 2, 1), F(1, 10)) == P(F(2, 100), F(2, 10), 1)

    def test_identity(self):
        p = P(3, -2, 1)
        assert scale_tail(p, F(1)) == p

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(ValueError):
            scale_tail(X_PLUS_1, F(0))
        with pytest.raises(ValueError):
            scale_tail(X_PLUS_1, F(-1))

    def test_preserves_root_counts(self):
        p = multiply(multiply(X_MINUS_1, X_PLUS_1), P(2, 2, 1))
        for eps in (F(1, 2), F(1, 7), F(3)):
            assert count_roots(scale_tail(p, eps)) == count_roots(p)


class TestSquarefree:
    def test_double_root(self):
        p = multiply(multiply(X_MINUS_1, X_MINUS_1), P(2, 1))
        factors = squarefree_decomposition(p)
        assert sorted((f.degree, m) for f, m in factors) == [(1, 1), (1, 2)]
        assert any(m == 2 and f(F(1)) == 0 for f, m in factors)

    def test_irreducible_quadratic(self):
        p = P(1, 0, 1)
        assert squarefree_decomposition(p) == [(p, 1)]

    def test_pure_power(self):
        p = P(0, 0, 0, 0, 0, 1)
        [(f, m)] = squarefree_decomposition(p)
        assert m == 5 and f == P(0, 1)


class TestSturm:
    def test_sqrt2(self):
        assert sturm_count(P(-2, 0, 1), (F(0), None)) == 1

    def test_no_real_roots(self):
        assert sturm_count(P(1, 0, 1), (None, None)) == 0

    def test_three_roots_positive_side(self):
        p = multiply(multiply(X_MINUS_1, P(-2, 1)), P(3, 1))
        assert sturm_count(p, (F(0), None)) == 2
        assert sturm_count(p, (None, F(0))) == 1

    def test_rejects_endpoint_root(self):
        with pytest.raises(ValueError):
            sturm_count(P(-1, 1), (F(1), F(2)))


class TestCountRoots:
    def test_multiplicity(self):
        # (x-1)^2 (x+3) = x^3 + x^2 - 5x + 3
        p = multiply(multiply(X_MINUS_1, X_MINUS_1), P(3, 1))
        assert count_roots(p) == RootCount(2, 1, 0)

    def test_all_complex(self):
        assert count_roots(P(1, 1, 1, 1, 1)) == RootCount(0, 0, 2)

    def test_rejects_zero_coefficient(self):
        with pytest.raises(ValueError):
            count_roots(P(1, 0, 0, 0, 1, 1))

    def test_invariant_under_positive_scaling(self):
        p = multiply(P(-3, 1), P(5, 4, 1))
        scaled = ExactPolynomial([c * 7 for c in p.coefficients])
        assert count_roots(p) == count_roots(scaled)

    def test_product_counts_add(self):
        rng = random.Random(7)
        checked = 0
        while checked < 50:
            a = multiply(P(rng.randint(1, 9), 1), P(rng.randint(1, 9), rng.randint(-6, 6), 1))
            b = P(-rng.randint(1, 9), 1)
            ab = multiply(a, b)
            # count_roots rejects vanishing coefficients, so resample those
            if any(c == 0 for c in a.coefficients) or any(c == 0 for c in ab.coefficients):
                continue
            ca, cb, cab = count_roots(a), count_roots(b), count_roots(ab)
            assert cab == RootCount(ca.pos + cb.pos, ca.neg + cb.neg,
                                    ca.complex_pairs + cb.complex_pairs)
            checked += 1


class TestSignPatternOf:
    def test_all_plus(self):
        assert sign_pattern_of(P(2, 2, 1)) == SignPattern.from_string("+++")

    def test_linear(self):
        assert sign_pattern_of(X_MINUS_1) == SignPattern.from_string("+-")

    def test_rejects_zero_coefficient(self):
        with pytest.raises(ValueError):
            sign_pattern_of(P(1, 0, 1))

    def test_rejects_negative_leading(self):
        with pytest.raises(ValueError):
            sign_pattern_of(P(1, -1))


class TestSerialization:
    def test_rational_round_trip(self):
        for r in (F(3, 4), F(-2), F(0), F(1690, 10000)):
            assert parse_rational(format_rational(r)) == r

    def test_decimal_literals_parse_exactly(self):
        assert parse_rational("0.1690") == F(169, 1000)
        assert parse_rational("2.6713") == F(26713, 10000)

    def test_polynomial_round_trip(self):
        p = P(F(-1, 3), F(2), F(1))
        assert polynomial_from_strings(polynomial_to_strings(p)) == p
