"""Tests for the model catalog."""

import pytest

from supergeo.errors import DomainError
from supergeo.geometry import christoffel
from supergeo.grassmann import apply_analytic, residual
from supergeo.models import (
    CATALOG_IDS,
    H32_CHART,
    GroupParams,
    ModelId,
    ModelKind,
    ch11_complex,
    ch11_real,
    chart_for,
    group_element,
    h32_printed_christoffel,
    h32_printed_scalar,
    killing_metric,
    maurer_cartan,
    model_metric,
    printed_current,
    renormalized_volume,
)


class TestModelId:
    @pytest.mark.parametrize("text", CATALOG_IDS)
    def test_catalog_round_trip(self, text):
        assert ModelId.parse(text).slug == text

    def test_parametric(self):
        model = ModelId.parse("Upper-Half-3")
        assert model.kind is ModelKind.UPPER_HALF and model.p == 3
        assert chart_for(model).p == 3

    def test_torus_defaults(self):
        model = ModelId.parse("torus")
        assert model.tau.body == 1j
        assert model.delta.terms == {}

    @pytest.mark.parametrize("text", ["upper-half", "flat-2-3", "klein-bottle", "hyperboloid-0"])
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            ModelId.parse(text)

    def test_torus_needs_upper_modulus(self, algebra):
        with pytest.raises(DomainError):
            ModelId(ModelKind.TORUS, tau=algebra.scalar(-1j))

    def test_every_catalog_model_has_a_metric(self):
        for text in CATALOG_IDS:
            model = ModelId.parse(text)
            assert model_metric(model).chart == chart_for(model)


class TestCh11Coordinates:
    def test_complex_real_round_trip(self, even, odd):
        z = even(0.3) + even(1.2) * 1j
        theta = odd() * 1j + odd()
        pt = ch11_real(z, theta)
        z2, th2 = ch11_complex(pt)
        assert residual(z2, z) < 1e-14
        assert residual(th2, theta) < 1e-14


class TestRenormalizedVolume:
    def test_limit_magnitude(self):
        result = renormalized_volume()
        assert result.magnitude_residual < 1e-6
        assert result.raw_limit > 0 > result.paper_value
        assert result.raw_divergent


class TestH32Chart:
    def test_x_may_be_negative(self, algebra):
        z = algebra.zero()
        pt = H32_CHART.point(algebra.scalar(-0.4), algebra.scalar(-1.2), algebra.scalar(1.1), z, z)
        assert pt.even[0].body == -0.4

    @pytest.mark.parametrize("t", [0.0, -0.5])
    def test_t_must_be_positive(self, algebra, t):
        z = algebra.zero()
        with pytest.raises(DomainError):
            H32_CHART.point(algebra.scalar(0.3), z, algebra.scalar(t), z, z)

    def test_boundary_points_skip_validation(self, algebra):
        z = algebra.zero()
        pt = H32_CHART.point(algebra.scalar(0.3), z, z, z, z, validate=False)
        assert pt.even[2].terms == {}


class TestH32Tables:
    @pytest.fixture
    def point(self, algebra):
        z = algebra.zero()
        return H32_CHART.point(algebra.scalar(-0.3), algebra.scalar(0.7), algebra.scalar(1.3), z, z)

    def test_christoffel_body(self, point):
        gamma = christoffel(model_metric(ModelId(ModelKind.H32_BOSONIC)), point)
        t = 1.3
        assert residual(gamma[2][0][0], 1 / t) < 1e-12
        assert residual(gamma[2][1][1], 1 / t) < 1e-12
        assert residual(gamma[0][0][2], -1 / t) < 1e-12
        assert residual(gamma[2][2][2], -1 / t) < 1e-12

    def test_written_table_flips_the_t_xx_sign(self, point):
        assert residual(h32_printed_christoffel(point)[(2, 0, 0)], -1 / 1.3) < 1e-12

    def test_written_scalar_body(self, point):
        assert residual(h32_printed_scalar(point), 2.0) < 1e-12


class TestMaurerCartan:
    @pytest.fixture
    def params(self, algebra, th):
        s = algebra.scalar
        return GroupParams(s(1.1), s(0.4), s(2.3), th[0] * 0.3, th[1] * 0.3)

    @pytest.fixture
    def random_params(self, even, odd):
        return GroupParams(even(0.9), even(0.5), even(1.7), odd(), odd())

    def test_group_element_is_invertible(self, params):
        g = group_element(params)
        ident = g.inverse() @ g
        for i, row in enumerate(ident.entries):
            for j, x in enumerate(row):
                assert residual(x, 1.0 if i == j else 0.0) < 1e-12

    @pytest.mark.parametrize("direction", range(5))
    def test_current_stays_in_the_algebra(self, params, direction):
        assert maurer_cartan(params, direction).residual < 1e-12

    @pytest.mark.parametrize("direction", range(5))
    def test_current_without_odd_parameters(self, algebra, direction):
        s, z = algebra.scalar, algebra.zero()
        assert maurer_cartan(GroupParams(s(1.1), s(0.4), s(2.3), z, z), direction).residual < 1e-12

    @pytest.mark.parametrize("direction", range(5))
    def test_matches_written_current(self, random_params, direction):
        computed = maurer_cartan(random_params, direction).as_dict()
        written = printed_current(random_params, direction)
        for key, value in computed.items():
            assert residual(value, written[key]) < 1e-10, key

    def test_e3_along_lambda(self, random_params):
        e3 = maurer_cartan(random_params, 1).e3
        tt = random_params.theta1 * random_params.theta2
        assert residual(e3, (tt + 1) * apply_analytic("cosh", random_params.beta * 2)) < 1e-10

    def test_odd_currents_at_zero(self, algebra):
        params = GroupParams.zero(algebra)
        first, second = maurer_cartan(params, 3), maurer_cartan(params, 4)
        assert residual(first.E1, 0.5) < 1e-14 and residual(first.E2, 0.5) < 1e-14
        assert residual(second.E1, 0.5) < 1e-14 and residual(second.E2, -0.5) < 1e-14

    def test_killing_metric_even_block(self, algebra):
        s, z = algebra.scalar, algebra.zero()
        params = GroupParams(s(0.8), s(0.6), s(1.9), z, z)
        killing = killing_metric(params)
        written = model_metric(ModelId(ModelKind.GROUP_OSP)).matrix(params.point())
        for i in range(3):
            for j in range(3):
                assert residual(killing[i][j], written[i][j]) < 1e-12

    def test_killing_metric_odd_block(self, algebra):
        killing = killing_metric(GroupParams.zero(algebra))
        assert residual(killing[3][4], 1.0) < 1e-14
        assert residual(killing[4][3], -1.0) < 1e-14
        assert residual(killing[3][3], 0.0) < 1e-14
