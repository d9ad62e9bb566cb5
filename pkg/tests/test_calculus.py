"""Tests for superderivatives, charts, maps and pullbacks."""

import pytest

from supergeo.calculus import (
    AuxArena,
    Chart,
    D_operator,
    derivative,
    hessian,
    jacobian,
    partial_even,
    partial_odd,
    pullback_metric,
)
from supergeo.errors import CapacityError, ChartError, DomainError
from supergeo.grassmann import Algebra, apply_analytic, residual
from supergeo.models import (
    MapKind,
    ModelId,
    ModelKind,
    hyperboloid_embedding,
    model_map,
    model_metric,
    semisphere_defect,
    upper_half_chart,
)
from supergeo.transforms import C11

LINE = Chart("line", ("x",))
PLANE = Chart("plane", ("x", "y"), ("s", "t"))


def _gap(a, b):
    return max(residual(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


class TestDerivatives:
    def test_even_derivative(self, even):
        x = even(0.4)
        pt = LINE.point(x)
        f = lambda q: q.even[0] ** 3 * apply_analytic("exp", q.even[0])  # noqa: E731
        ex = apply_analytic("exp", x)
        assert residual(derivative(f, pt, 0), (x * x * 3 + x ** 3) * ex) < 1e-12

    def test_second_derivative_two_ways(self, even):
        x = even(-0.3)
        pt = LINE.point(x)
        f = lambda q: q.even[0] ** 3 * apply_analytic("exp", q.even[0])  # noqa: E731
        expected = (x * 6 + x * x * 6 + x ** 3) * apply_analytic("exp", x)
        assert residual(partial_even(f, pt, 0, order=2), expected) < 1e-12
        assert residual(hessian(f, pt, 0, 0), expected) < 1e-12

    def test_left_odd_derivative(self, algebra, th):
        pt = C11.point(algebra.scalar(1j), algebra.zero())
        xi = th[2]
        assert residual(derivative(lambda q: q.odd[0] * xi, pt, 1), xi) == 0
        assert residual(derivative(lambda q: xi * q.odd[0], pt, 1), -xi) == 0

    def test_partial_odd_index(self, algebra, th):
        pt = PLANE.point(algebra.scalar(1), algebra.scalar(2), th[0], th[1])
        f = lambda q: q.odd[0] * q.odd[1]  # noqa: E731
        assert residual(partial_odd(f, pt, 0), th[1]) == 0
        assert residual(partial_odd(f, pt, 1), -th[0]) == 0
        with pytest.raises(ChartError):
            partial_odd(f, pt, 2)

    def test_mixed_partials_commute(self, even, odd):
        pt = PLANE.point(even(0.5), even(1.5), odd(), odd())
        f = lambda q: q.even[0] ** 2 * q.even[1] * (1 + q.odd[0] * q.odd[1])  # noqa: E731
        assert residual(hessian(f, pt, 0, 1), hessian(f, pt, 1, 0)) < 1e-12
        assert residual(partial_even(f, pt, 0, order=2, j=1), hessian(f, pt, 0, 1)) < 1e-12

    def test_odd_second_derivatives_anticommute(self, even, odd, th):
        pt = PLANE.point(even(0.5), even(1.5), odd((0,)), odd((1,)))
        xi = th[3]
        f = lambda q: q.odd[0] * q.odd[1] * q.even[0] + q.odd[0] * xi  # noqa: E731
        assert residual(hessian(f, pt, 2, 3), -hessian(f, pt, 3, 2)) < 1e-12

    def test_superderivative_squares_to_d_dz(self, algebra, th):
        pt = C11.point(algebra.scalar(0.3 + 0.8j) + th[0] * th[1], th[0] * 1j + th[1])
        xi = th[2]
        f = lambda q: q.even[0] ** 3 + q.odd[0] * xi * q.even[0]  # noqa: E731
        twice = D_operator(lambda q: D_operator(f, q), pt)
        assert residual(twice, derivative(f, pt, 0)) < 1e-12

    def test_claims_are_released(self, even):
        pt = LINE.point(even(0.1))
        derivative(lambda q: derivative(lambda r: r.even[0] ** 2, q, 0), pt, 0)
        assert AuxArena.in_use() == 0

    def test_capacity(self):
        small = Algebra(4, 3)
        pt = LINE.point(small.scalar(1.0))
        with pytest.raises(CapacityError):
            derivative(lambda q: q.even[0], pt, 0)

    def test_index_out_of_range(self, algebra):
        with pytest.raises(ChartError):
            derivative(lambda q: q.even[0], LINE.point(algebra.scalar(1)), 3)


class TestModelMaps:
    def test_beta_inverse_lands_on_semisphere(self, even, odd):
        beta_inv = model_map(MapKind.BETA_INVERSE, 2)
        pt = upper_half_chart(2).point(even(0.7), even(-0.4), odd(), odd())
        assert residual(semisphere_defect(beta_inv(pt)), 0) < 1e-12

    def test_beta_after_inverse_is_identity(self, even, odd):
        pt = upper_half_chart(2).point(even(0.7), even(-0.4), odd(), odd())
        image = model_map(MapKind.BETA, 2).compose(model_map(MapKind.BETA_INVERSE, 2))(pt)
        assert max(residual(a, b) for a, b in zip(image.coords, pt.coords)) < 1e-12

    def test_alpha_pullback_on_body(self, algebra):
        emb = hyperboloid_embedding(2)
        zero = algebra.zero()
        pt = emb.source.point(algebra.scalar(0.4), algebra.scalar(-1.1), zero, zero)
        alpha = model_map(MapKind.ALPHA, 2)
        lhs = pullback_metric(alpha.compose(emb), model_metric(ModelId(ModelKind.SEMISPHERE, 2)), pt)
        rhs = pullback_metric(emb, model_metric(ModelId(ModelKind.HYPERBOLOID, 2)), pt)
        assert _gap(lhs, rhs) < 1e-12

    def test_beta_pullback_on_body(self, algebra):
        zero = algebra.zero()
        pt = upper_half_chart(2).point(algebra.scalar(0.8), algebra.scalar(0.3), zero, zero)
        lhs = pullback_metric(model_map(MapKind.BETA_INVERSE, 2), model_metric(ModelId(ModelKind.SEMISPHERE, 2)), pt)
        assert _gap(lhs, model_metric(ModelId(ModelKind.UPPER_HALF, 2)).matrix(pt)) < 1e-12

    def test_beta_pullback_with_negative_second_coordinate(self, even, odd):
        pt = upper_half_chart(2).point(even(0.9), even(-0.6), odd(), odd())
        lhs = pullback_metric(model_map(MapKind.BETA_INVERSE, 2), model_metric(ModelId(ModelKind.SEMISPHERE, 2)), pt)
        assert _gap(lhs, model_metric(ModelId(ModelKind.UPPER_HALF, 2)).matrix(pt)) < 1e-10

    def test_upper_half_needs_positive_first_coordinate(self, algebra):
        zero = algebra.zero()
        with pytest.raises(DomainError):
            upper_half_chart(2).point(algebra.scalar(-0.4), algebra.scalar(0.8), zero, zero)

    def test_jacobian_shape(self, even, odd):
        beta_inv = model_map(MapKind.BETA_INVERSE, 2)
        pt = upper_half_chart(2).point(even(0.7), even(-0.4), odd(), odd())
        jac = jacobian(beta_inv, pt)
        assert len(jac) == 4 and all(len(row) == 5 for row in jac)

    def test_alpha_rejects_nonpositive_x0(self, algebra):
        alpha = model_map(MapKind.ALPHA, 2)
        zero = algebra.zero()
        pt = alpha.source.point(algebra.scalar(-1), zero, zero, zero, zero, validate=False)
        with pytest.raises(DomainError):
            alpha(pt)

    def test_map_checks_source_chart(self, algebra):
        with pytest.raises(ChartError):
            model_map(MapKind.ALPHA, 2)(LINE.point(algebra.scalar(1)))
