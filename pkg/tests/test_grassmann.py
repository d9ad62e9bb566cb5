"""Tests for Grassmann arithmetic, conjugation and analytic functions."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from supergeo.errors import ConfigurationError, DomainError, NonInvertibleError, ParityError
from supergeo.grassmann import (
    ABSTRACT,
    PAIRED_SWAP,
    Algebra,
    Parity,
    apply_analytic,
    conjugate,
    default_algebra,
    invert,
    isclose,
    modulus,
    random_element,
    render,
    residual,
)

coefficient = st.floats(min_value=-2, max_value=2, allow_nan=False, allow_infinity=False)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _mixed(seed: int):
    rng = np.random.default_rng(seed)
    alg = default_algebra()
    return [random_element(alg, rng, Parity.MIXED, (0, 1, 2, 3), True) for _ in range(3)]


class TestArithmetic:
    def test_generators_anticommute(self, th):
        assert isclose(th[0] * th[1], -(th[1] * th[0]), 0.0)
        assert (th[0] * th[0]).terms == {}

    def test_monomial_sign(self, algebra, th):
        # θ₂θ₁θ₃ = −θ₁θ₂θ₃
        assert (th[1] * th[0] * th[2]).coefficient(0b111) == -1

    def test_scalar_coercion(self, algebra, th):
        x = 2 + th[0] * th[1]
        assert x.body == 2
        assert (x - 2).coefficient(0b11) == 1
        assert (3 * x).body == 6

    def test_inverse(self, algebra, th):
        a = algebra.scalar(2) + th[0] * th[1] + th[2] * th[3]
        assert residual(a * invert(a), 1) < 1e-15

    def test_inverse_needs_body(self, th):
        with pytest.raises(NonInvertibleError):
            invert(th[0] * th[1])

    def test_inverse_needs_even(self, th):
        with pytest.raises(ParityError):
            invert(th[0] + 1)

    def test_mismatched_algebras(self):
        with pytest.raises(ConfigurationError):
            Algebra(4, 2).scalar(1) + Algebra(6, 2).scalar(1)

    def test_algebra_size_limits(self):
        with pytest.raises(ConfigurationError):
            Algebra(17, 8)

    def test_immutable(self, algebra):
        x = algebra.scalar(1)
        with pytest.raises(AttributeError):
            x.terms = {}

    def test_render(self, algebra, th):
        assert render(algebra.zero()) == "0"
        assert "θ1θ2" in render(th[0] * th[1] * 3)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_associative(self, seed):
        a, b, c = _mixed(seed)
        assert residual((a * b) * c, a * (b * c)) < 1e-12

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_distributive(self, seed):
        a, b, c = _mixed(seed)
        assert residual(a * (b + c), a * b + a * c) < 1e-12

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_graded_commutativity(self, seed):
        rng = np.random.default_rng(seed)
        alg = default_algebra()
        x = random_element(alg, rng, Parity.EVEN, (0, 1, 2, 3), True)
        s = random_element(alg, rng, Parity.ODD, (0, 1, 2, 3), True)
        t = random_element(alg, rng, Parity.ODD, (0, 1, 2, 3), True)
        assert residual(x * s, s * x) < 1e-12
        assert residual(s * t, -(t * s)) < 1e-12
        assert residual(s * s, 0) < 1e-12


class TestConjugation:
    def test_graded_theta(self, th):
        # Θ = iθ₁ + θ₂ ↦ θ₁ + iθ₂ and ΘΘ̄ = −2θ₁θ₂
        big = th[0] * 1j + th[1]
        assert isclose(conjugate(big), th[0] + th[1] * 1j, 1e-15)
        assert isclose(big * conjugate(big), th[0] * th[1] * -2, 1e-15)

    def test_real_odd_has_zero_modulus(self, odd):
        xi = odd((0, 1, 2, 3))
        assert residual(xi * conjugate(xi), 0) < 1e-15

    def test_real_even_fixed(self, even):
        x = even(1.5, (0, 1, 2, 3))
        assert residual(conjugate(x), x) == 0

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_involution_and_reversal(self, seed):
        a, b, _ = _mixed(seed)
        assert residual(conjugate(conjugate(a)), a) < 1e-12
        assert residual(conjugate(a * b), conjugate(b) * conjugate(a)) < 1e-12

    def test_paired_tables(self, algebra, th):
        assert isclose(conjugate(th[0], PAIRED_SWAP), -th[1], 0.0)
        assert PAIRED_SWAP.involution_sign(algebra, 0) == -1
        assert ABSTRACT.involution_sign(algebra, 0) == 1

    def test_modulus(self, algebra):
        assert residual(modulus(algebra.scalar(3 + 4j)), 5) < 1e-14


class TestAnalytic:
    @pytest.mark.parametrize("body", [0.3, 1.0, 2.5])
    def test_exp_log(self, even, body):
        a = even(body, (0, 1, 2, 3))
        assert residual(apply_analytic("exp", apply_analytic("log", a)), a) < 1e-12

    def test_sqrt_squares_back(self, even):
        a = even(1.7, (0, 1, 2, 3))
        root = apply_analytic("sqrt", a)
        assert residual(root * root, a) < 1e-12

    def test_power(self, even):
        a = even(1.2, (0, 1, 2, 3))
        assert residual(apply_analytic("power", a, exponent=3), a * a * a) < 1e-12

    def test_hyperbolic_identity(self, even):
        x = even(-0.7, (0, 1, 2, 3))
        ch, sh = apply_analytic("cosh", x), apply_analytic("sinh", x)
        assert residual(ch * ch - sh * sh, 1) < 1e-12

    def test_exp_of_nilpotent(self, th):
        s = th[0] * th[1]
        assert isclose(apply_analytic("exp", s), 1 + s, 0.0)

    def test_complex_log_body(self, algebra):
        assert abs(apply_analytic("log", algebra.scalar(1j)).body - cmath.log(1j)) < 1e-15

    def test_log_rejects_negative_body(self, algebra):
        with pytest.raises(DomainError):
            apply_analytic("log", algebra.scalar(-1.0))

    def test_odd_argument_rejected(self, th):
        with pytest.raises(ParityError):
            apply_analytic("exp", th[0])

    @given(coefficient, coefficient)
    @settings(max_examples=30, deadline=None)
    def test_exp_additive_on_commuting_pair(self, a, b):
        alg = default_algebra()
        x = alg.scalar(a) + alg.theta(1) * alg.theta(2) * b
        y = alg.scalar(b) + alg.theta(3) * alg.theta(4) * a
        lhs = apply_analytic("exp", x + y)
        rhs = apply_analytic("exp", x) * apply_analytic("exp", y)
        assert residual(lhs, rhs) < 1e-9 * max(1.0, abs(lhs.body))
