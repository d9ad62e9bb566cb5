"""Tests for theta functions and the supersphere/supertorus Green functions."""

import math

import pytest

from supergeo.calculus import derivative
from supergeo.errors import ChartError, DomainError, ParityError, TruncationError
from supergeo.grassmann import apply_analytic, invert, residual
from supergeo.green import (
    FaltingsForm,
    GreenForm,
    GreenTriple,
    IdentityKind,
    ThetaContext,
    ThetaForm,
    classical_sphere_green,
    faltings,
    green_log_limit,
    green_triple_check,
    jacobi_theta,
    manin_identity,
    sample_grid,
    sphere_green,
    sphere_green_expansion,
    super_theta,
    super_theta_expansion,
    super_theta_prime_zero_closed,
    torus_green,
    torus_green_hessian,
)
from supergeo.models import SPHERE_CHART, TORUS_CHART, ModelId, ModelKind, complex_point, model_metric
from supergeo.transforms import C11, torus_s_abstract


@pytest.fixture
def theta(odd):
    return odd() * 1j + odd()


@pytest.fixture
def tau(algebra):
    return algebra.scalar(0.15 + 1.05j)


@pytest.fixture
def ctx(tau, odd):
    return ThetaContext.create(tau, odd((2, 3)) * 1j + odd((2, 3)))


@pytest.fixture
def plain(tau):
    return ThetaContext.create(tau)


class TestTheta:
    def test_series_matches_product(self, algebra, tau, even):
        z = algebra.scalar(0.3 + 0.2j) + even(0.0) * 1j
        lhs = jacobi_theta(z, tau, ThetaForm.SERIES)
        assert residual(lhs, jacobi_theta(z, tau, ThetaForm.PRODUCT)) < 1e-10

    def test_zero_at_origin(self, algebra, tau):
        assert abs(jacobi_theta(algebra.zero(), tau).body) < 1e-12

    def test_quasi_periodicity(self, algebra, ctx, theta):
        z = algebra.scalar(0.35 + 0.25j)
        value = super_theta(z, theta, ctx)
        q = apply_analytic("exp", ctx.tau * (math.pi * 1j))
        shifted = super_theta(z + ctx.tau + theta * ctx.delta, theta + ctx.delta, ctx)
        factor = -(1 - theta * ctx.delta * (math.pi * 1j)) * invert(q) * apply_analytic("exp", z * (-2j * math.pi))
        assert residual(shifted, factor * value) < 1e-9
        assert residual(super_theta(z + 1, theta, ctx), -value) < 1e-9
        assert residual(super_theta(-z, theta, ctx), -value) < 1e-9

    def test_expansion_in_odd_modulus(self, algebra, ctx, theta):
        z = algebra.scalar(0.6 + 0.3j)
        assert residual(super_theta_expansion(z, theta, ctx), super_theta(z, theta, ctx)) < 1e-9

    def test_derivative_at_zero(self, algebra, ctx, theta):
        ad = derivative(lambda pt: super_theta(pt.even[0], pt.odd[0], ctx), C11.point(algebra.zero(), theta), 0)
        assert residual(ad, super_theta_prime_zero_closed(theta, ctx)) < 1e-8

    def test_context_validation(self, algebra, th):
        with pytest.raises(DomainError):
            ThetaContext.create(algebra.scalar(1.0))
        with pytest.raises(ParityError):
            ThetaContext.create(algebra.scalar(1j), th[0] * th[1])

    def test_truncation_budget(self, algebra):
        tiny = ThetaContext(algebra.scalar(0.001j), algebra.zero(), max_terms=5)
        with pytest.raises(TruncationError):
            super_theta(algebra.scalar(0.1), algebra.zero(), tiny)


class TestSphereGreen:
    def test_expansion(self, algebra, theta):
        pt = complex_point(SPHERE_CHART, algebra.scalar(0.8 - 0.4j), theta)
        assert residual(sphere_green(pt), sphere_green_expansion(pt.even[0], pt.odd[0])) < 1e-12

    def test_classical_body(self, algebra):
        z = 1.1 + 0.3j
        pt = complex_point(SPHERE_CHART, algebra.scalar(z), algebra.zero())
        assert abs(sphere_green(pt).body - classical_sphere_green(z)) < 1e-14

    def test_vanishes_at_base(self, algebra):
        pt = complex_point(SPHERE_CHART, algebra.zero(), algebra.zero())
        assert sphere_green(pt).terms == {}

    def test_chart(self, algebra):
        with pytest.raises(ChartError):
            sphere_green(C11.point(algebra.scalar(1), algebra.zero()))

    def test_triple(self, algebra, theta):
        triple = GreenTriple(base=complex_point(SPHERE_CHART, algebra.zero(), algebra.zero()),
                             metric=model_metric(ModelId(ModelKind.SPHERE11)), green=sphere_green,
                             classical=classical_sphere_green)
        samples = [complex_point(SPHERE_CHART, algebra.scalar(0.2 * k + 0.3j), theta) for k in range(1, 6)]
        report = green_triple_check(triple, samples)
        assert report.condition("nonnegative").passed
        assert report.condition("hessian-metric").passed
        assert report.condition("classical-body").passed
        assert report.condition("first-order-zero").passed

    def test_triple_needs_samples(self, algebra):
        triple = GreenTriple(base=complex_point(SPHERE_CHART, algebra.zero(), algebra.zero()),
                             metric=model_metric(ModelId(ModelKind.SPHERE11)), green=sphere_green)
        with pytest.raises(DomainError):
            green_triple_check(triple, [])

    @pytest.mark.parametrize("kind", [IdentityKind.SPHERE_DQ, IdentityKind.SPHERE_TILDE])
    def test_distance_identities(self, algebra, theta, kind):
        result = manin_identity(kind, algebra.scalar(0.7 + 0.5j), theta)
        assert result.residual < 1e-10

    def test_tilde_identity_uses_closed_form(self, algebra, theta):
        z = algebra.scalar(1.3 - 0.4j)
        result = manin_identity(IdentityKind.SPHERE_TILDE, z, theta)
        expected = result.per_term["cosh_expected"]
        assert residual(result.rhs, apply_analytic("log", invert(expected))) < 1e-14
        assert residual(result.per_term["super_gap"], result.per_term["cosh_super"] - expected) < 1e-14

    def test_grid(self, algebra, theta):
        samples = sample_grid([0.5, 1j, 1 + 1j], theta, sphere_green)
        assert [z for z, _ in samples] == [0.5, 1j, 1 + 1j]


class TestTorusGreen:
    def _point(self, algebra, theta, z=0.4 + 0.3j):
        return complex_point(TORUS_CHART, algebra.scalar(z), theta)

    def test_neron_form(self, algebra, ctx, theta):
        pt = self._point(algebra, theta)
        assert residual(torus_green(pt, ctx), torus_green(pt, ctx, GreenForm.NERON)) < 1e-9

    def test_periodic_in_real_direction(self, algebra, ctx, theta):
        pt = self._point(algebra, theta)
        moved = complex_point(TORUS_CHART, pt.even[0] + 1, theta)
        assert residual(torus_green(moved, ctx), torus_green(pt, ctx)) < 1e-9

    def test_s_invariance_without_odd_modulus(self, algebra, plain, theta):
        pt = self._point(algebra, theta)
        moved = torus_s_abstract(plain.tau, plain.delta)(pt)
        assert residual(torus_green(moved, plain), torus_green(pt, plain)) < 1e-9

    def test_logarithmic_singularity(self, plain):
        assert abs(green_log_limit(plain) - 1.0) < 1e-3

    def test_lattice_point(self, algebra, plain):
        with pytest.raises(DomainError):
            torus_green(self._point(algebra, algebra.zero(), 0), plain, GreenForm.NERON)

    def test_hessian_without_odd_modulus(self, algebra, plain, theta):
        h = torus_green_hessian(self._point(algebra, theta), plain)
        t = plain.tau.body.imag
        assert residual(h["ZZb"], 1 / (4 * t)) < 1e-7
        assert residual(h["ThThb"], -1 / t) < 1e-7
        assert residual(h["ZThb"], 0) < 1e-7
        assert residual(h["ThZb"], 0) < 1e-7

    def test_faltings(self, ctx, plain, theta, algebra):
        assert residual(faltings(theta, ctx), faltings(theta, ctx, FaltingsForm.CORRECTED)) < 1e-9
        assert residual(faltings(theta, plain), faltings(algebra.zero(), plain)) < 1e-9

    def test_distance_identity(self, algebra, plain, theta):
        result = manin_identity(IdentityKind.TORUS, algebra.scalar(0.3 + 0.2j), theta, plain)
        assert result.residual < 1e-6
        assert set(result.per_term) == {"d_nome", "d_rho", "bernoulli", "d_minus", "tail", "theta_term"}

    def test_identity_errors(self, algebra, theta, plain):
        with pytest.raises(DomainError):
            manin_identity(IdentityKind.TORUS, algebra.scalar(0.3 + 0.2j), theta)
        with pytest.raises(DomainError):
            manin_identity(IdentityKind.TORUS, algebra.zero(), theta, plain)
        with pytest.raises(DomainError):
            manin_identity(IdentityKind.TORUS, algebra.scalar(0.3 + 0.2j), theta, plain, "other")

    def test_shifted_identity_survives_nome_underflow(self, algebra, theta):
        ctx = ThetaContext.create(algebra.scalar(0.1 + 1j))
        z = algebra.scalar(0.3 + 0.2j)
        result = manin_identity(IdentityKind.TORUS, z, theta, ctx, "shifted")
        assert math.isfinite(result.residual)
        assert all(math.isfinite(abs(v.body)) for v in result.per_term.values())
        assert manin_identity(IdentityKind.TORUS, z, theta, ctx).residual < 1e-6
