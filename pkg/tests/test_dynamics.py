"""Tests for supergeodesics, joins, foot points and distances."""

import math

import pytest

from supergeo.calculus import derivative
from supergeo.dynamics import (
    PARAM,
    Branch,
    PathKind,
    base_point,
    bosonic_distance,
    ch11_residual,
    closed_geodesic,
    d_q_closed_form,
    foot_point,
    geodesic_residual,
    hat_distance_closed_form,
    hat_point,
    integrate_ch11,
    join_mismatch,
    join_points,
    path_length,
    printed_foot,
    shifted_base_point,
    signed_vertical_distance,
    super_distance,
    torus_pair_cosh,
)
from supergeo.errors import ChartError, DomainError, ParityError
from supergeo.grassmann import residual
from supergeo.models import H32_CHART, ModelId, ModelKind, model_metric
from supergeo.transforms import C11, dilation, mobius_point, translation


@pytest.fixture
def semicircle(even, odd):
    return closed_geodesic(PathKind.TYPE_II, (0.0, 1.0), c1=even(1.2), c2=even(-0.3),
                           omega=even(0.9), u0=even(0.1), xi=odd((2, 3)))


def _c11(even, odd, x, y):
    return C11.point(even(x) + even(y) * 1j, odd() * 1j + odd())


class TestClosedGeodesics:
    def test_semicircle_apex(self, algebra):
        one, zero = algebra.scalar(1), algebra.zero()
        path = closed_geodesic(PathKind.TYPE_II, c1=one, c2=zero)
        z, theta = path.complex_at(0.0)
        assert residual(z, 1j) < 1e-15
        assert theta.terms == {}

    def test_type_ii_solves_geodesic_equations(self, semicircle):
        metric = model_metric(ModelId(ModelKind.CH11))
        for u in (-0.4, 0.3):
            assert max(residual(r, 0) for r in geodesic_residual(metric, semicircle, u)) < 1e-8

    def test_type_i_solves_complex_system(self, even, odd):
        path = closed_geodesic(PathKind.TYPE_I, c=even(0.2) + even(1.4) * 1j,
                               gamma=odd() * 1j + odd(), zeta=odd() * 1j + odd())
        rz, rth = ch11_residual(path, 0.7)
        assert residual(rz, 0) < 1e-8
        assert residual(rth, 0) < 1e-8

    def test_limits(self, algebra):
        path = closed_geodesic(PathKind.TYPE_II, c1=algebra.scalar(2), c2=algebra.scalar(1))
        assert residual(path.complex_at(math.inf)[0], 3) == 0
        assert residual(path.complex_at(-math.inf)[0], -1) == 0

    def test_rejects_bad_data(self, algebra, th):
        with pytest.raises(DomainError):
            closed_geodesic(PathKind.TYPE_II, c1=algebra.scalar(-1), c2=algebra.zero())
        with pytest.raises(DomainError):
            closed_geodesic(PathKind.TYPE_II, c1=algebra.scalar(1 + 1j), c2=algebra.zero())
        with pytest.raises(ParityError):
            closed_geodesic(PathKind.TYPE_II, c1=algebra.scalar(1), c2=algebra.zero(), xi=th[0] * th[1])
        with pytest.raises(DomainError):
            closed_geodesic(PathKind.NUMERIC, c1=algebra.scalar(1))


class TestIntegration:
    def test_rk4_tracks_closed_form(self, algebra, semicircle):
        z0, th0 = semicircle.complex_at(0.0)
        velocity = derivative(lambda q: semicircle.complex_at(q.even[0]), PARAM.point(algebra.zero()), 0)
        numeric = integrate_ch11(C11.point(z0, th0), list(velocity), (0.0, 0.2), step=0.01)
        assert len(numeric.trace) == 21
        last = numeric.trace[-1]
        z1, th1 = semicircle.complex_at(last.u)
        assert residual(last.point.even[0], z1) < 1e-6
        assert residual(last.point.odd[0], th1) < 1e-6

    def test_step_must_be_positive(self, algebra):
        with pytest.raises(DomainError):
            integrate_ch11(base_point(algebra), [algebra.scalar(1j), algebra.zero()], (0.0, 1.0), step=0.0)

    def test_numeric_paths_have_no_residual(self, algebra):
        numeric = integrate_ch11(base_point(algebra), [algebra.scalar(1j), algebra.zero()], (0.0, 0.01), 0.01)
        with pytest.raises(DomainError):
            geodesic_residual(model_metric(ModelId(ModelKind.CH11)), numeric, 0.0)


class TestJoin:
    def test_semicircle_join(self, even, odd):
        p1, p2 = _c11(even, odd, -0.5, 1.0), _c11(even, odd, 0.8, 0.6)
        segments = join_points(p1, p2, odd((4,)))
        assert len(segments) == 3
        assert segments[1].branch is Branch.SEMICIRCLE
        assert join_mismatch(segments) < 1e-12
        z_a, th_a = segments[0].start()
        z_b, th_b = segments[-1].end()
        assert residual(z_a, p1.even[0]) < 1e-12 and residual(th_a, p1.odd[0]) < 1e-12
        assert residual(z_b, p2.even[0]) < 1e-12 and residual(th_b, p2.odd[0]) < 1e-12

    def test_vertical_join(self, algebra, odd):
        p1 = C11.point(algebra.scalar(0.3 + 1j), odd())
        p2 = C11.point(algebra.scalar(0.3 + 2j), odd())
        segments = join_points(p1, p2)
        assert segments[1].branch is Branch.VERTICAL
        assert join_mismatch(segments) < 1e-12
        assert abs(path_length(segments[1]).body - math.log(2)) < 1e-12

    def test_same_body_needs_type_i_only(self, algebra, th):
        z = algebra.scalar(1j)
        segments = join_points(C11.point(z, th[0]), C11.point(z, th[1]))
        assert [s.kind for s in segments] == [PathKind.TYPE_I]

    def test_shared_body_distinct_souls(self, algebra, th):
        with pytest.raises(DomainError):
            join_points(C11.point(algebra.scalar(1j), th[0]), C11.point(1j + th[0] * th[1], th[0]))


class TestDistances:
    def test_bosonic_vertical(self, algebra):
        a, b = base_point(algebra), C11.point(algebra.scalar(3j), algebra.zero())
        assert abs(bosonic_distance(a, b).body - math.log(3)) < 1e-12

    def test_coincident_points(self, even, odd):
        p = _c11(even, odd, 0.2, 0.9)
        assert super_distance(p, p).value.terms == {}

    def test_symmetry(self, even, odd):
        p1, p2 = _c11(even, odd, -0.5, 1.0), _c11(even, odd, 0.8, 0.6)
        assert residual(super_distance(p1, p2).value, super_distance(p2, p1).value) < 1e-9

    def test_real_affine_invariance(self, even, odd):
        p1, p2 = _c11(even, odd, -0.5, 1.0), _c11(even, odd, 0.8, 0.6)
        g = translation(even(0.4)) @ dilation(even(1.3))
        moved = super_distance(mobius_point(g, p1), mobius_point(g, p2))
        assert residual(moved.value, super_distance(p1, p2).value) < 1e-9

    @pytest.mark.parametrize("q", [0.3, 0.7])
    def test_torus_pair(self, algebra, th, q):
        delta = th[0] * 1j + th[1]
        other = C11.point(algebra.scalar(1j * q), delta)
        cosh = super_distance(base_point(algebra), other).cosh
        assert residual(cosh, torus_pair_cosh(algebra.scalar(q), delta)) < 1e-10
        signed = signed_vertical_distance(base_point(algebra), other)
        assert abs(signed.body - math.log(q)) < 1e-12

    def test_hat_point(self, algebra, th):
        rho = algebra.scalar(0.3 + 0.4j)
        theta = th[0] * 1j + th[1]
        signed = signed_vertical_distance(base_point(algebra), hat_point(rho, theta))
        assert residual(signed, hat_distance_closed_form(rho, theta)) < 1e-10

    def test_shifted_base_point(self, algebra, th):
        rho = algebra.scalar(0.6j)
        theta = th[0] * 1j + th[1]
        d = signed_vertical_distance(shifted_base_point(rho, theta), hat_point(rho, theta))
        assert residual(d, math.log(0.6)) < 1e-10

    def test_wrong_chart(self, algebra):
        zero = algebra.zero()
        q = H32_CHART.point(zero, zero, algebra.scalar(1), zero, zero)
        with pytest.raises(ChartError):
            super_distance(q, q)


class TestFootPoint:
    def _boundary(self, algebra, x, y):
        zero = algebra.zero()
        return H32_CHART.point(x, y, zero, zero, zero, validate=False)

    def test_unit_segment(self, algebra):
        zero = algebra.zero()
        p1 = self._boundary(algebra, zero, zero)
        p2 = self._boundary(algebra, algebra.scalar(1), zero)
        q = H32_CHART.point(zero, zero, algebra.scalar(1), zero, zero)
        foot = foot_point(p1, p2, q)
        assert abs(foot.point.even[0].body - 1 / 3) < 1e-10
        assert abs(foot.point.even[2].body - math.sqrt(2) / 3) < 1e-10
        assert abs(foot.distance.cosh.body - math.sqrt(2)) < 1e-10

    def test_matches_closed_forms(self, algebra, even, odd):
        zero = algebra.zero()
        x, y = even(0.7), even(-1.1)
        xi = odd((2, 3))
        p1 = self._boundary(algebra, zero, zero)
        p2 = self._boundary(algebra, x, y)
        q = H32_CHART.point(zero, zero, algebra.scalar(1), zero, zero)
        foot = foot_point(p1, p2, q, xi)
        expected = printed_foot(x + y * 1j, xi)
        assert max(residual(a, b) for a, b in zip(foot.point.coords, expected.coords)) < 1e-10
        assert residual(foot.distance.cosh, d_q_closed_form(x + y * 1j)) < 1e-10

    def test_endpoints_must_be_on_boundary(self, algebra):
        zero, one = algebra.zero(), algebra.scalar(1)
        bulk = H32_CHART.point(zero, zero, one, zero, zero)
        with pytest.raises(DomainError):
            foot_point(bulk, bulk, bulk)
