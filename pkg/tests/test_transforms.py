"""Tests for OSp(1|2) elements and the super-Möbius action."""

import numpy as np
import pytest

from supergeo.errors import DomainError
from supergeo.grassmann import residual
from supergeo.models import SPHERE_CHART, complex_point
from supergeo.transforms import (
    C11,
    OSpElement,
    TorusAction,
    TorusGenerator,
    dilation,
    inversion,
    is_superconformal,
    mobius_apply,
    mobius_point,
    odd_beta,
    poincare_apply,
    random_real_element,
    sphere_transition,
    torus_apply,
    y_covariance,
)

GENS = (0, 1, 2, 3)


@pytest.fixture
def point(even, odd):
    return C11.point(even(0.4) + even(1.3) * 1j, odd() * 1j + odd())


class TestElements:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_random_real_element(self, algebra, seed):
        g = random_real_element(np.random.default_rng(seed), algebra, GENS)
        assert g.constraint_residual() < 1e-12
        assert g.is_real(1e-15)
        g.validate()

    def test_validate_rejects_broken_constraint(self, algebra):
        one, zero = algebra.scalar(1), algebra.zero()
        with pytest.raises(DomainError):
            OSpElement(one, one, zero, zero, zero, zero).validate()

    def test_composition_is_action(self, algebra, rng, point):
        g, h = random_real_element(rng, algebra, GENS), random_real_element(rng, algebra, GENS)
        z, th = point.even[0], point.odd[0]
        inner = mobius_apply(h, z, th)
        twice = mobius_apply(g, inner.z, inner.theta)
        once = mobius_apply(g @ h, z, th)
        assert residual(once.z, twice.z) < 1e-11
        assert residual(once.theta, twice.theta) < 1e-11


class TestMobius:
    def test_dilation(self, even, point):
        a = even(1.4)
        image = mobius_point(dilation(a), point)
        assert residual(image.even[0], a * a * point.even[0]) < 1e-13
        assert residual(image.odd[0], a * point.odd[0]) < 1e-13

    def test_odd_translation(self, odd, point):
        beta = odd((2, 3))
        image = mobius_point(odd_beta(beta), point)
        z, th = point.even[0], point.odd[0]
        assert residual(image.even[0], z - beta * th) < 1e-14
        assert residual(image.odd[0], th + beta) < 1e-14

    def test_inversion_pole(self, algebra, th):
        g = inversion(algebra)
        assert mobius_apply(g, th[0] * th[1], th[2]).at_infinity
        with pytest.raises(DomainError):
            mobius_point(g, C11.point(th[0] * th[1], th[2]))

    def test_superconformal(self, algebra, rng, point):
        g = random_real_element(rng, algebra, GENS)
        report = is_superconformal(lambda pt: mobius_point(g, pt), [point])
        assert report.ok, report.residual

    def test_y_covariance(self, algebra, rng, point):
        g = random_real_element(rng, algebra, GENS)
        assert y_covariance(g, point.even[0], point.odd[0]).residual < 1e-11

    def test_y_covariance_needs_upper_half(self, algebra, th):
        g = random_real_element(np.random.default_rng(0), algebra, GENS)
        with pytest.raises(DomainError):
            y_covariance(g, algebra.scalar(-1j), th[0])

    def test_bulk_action_restricts_to_boundary(self, algebra, rng, point):
        g = random_real_element(rng, algebra, GENS)
        zero = algebra.zero()
        z, th = point.even[0], point.odd[0]
        bulk = poincare_apply(g, z, zero, zero, th)
        boundary = mobius_apply(g, z, th)
        assert residual(bulk.z, boundary.z) < 1e-11
        assert residual(bulk.theta2, boundary.theta) < 1e-11
        assert residual(bulk.t, 0) < 1e-14
        assert residual(bulk.theta1, 0) < 1e-14


class TestTransitions:
    def test_sphere_transition_squares_to_odd_sign(self, even, odd):
        pt = complex_point(SPHERE_CHART, even(0.7) + even(0.5) * 1j, odd() * 1j + odd())
        phi = sphere_transition()
        back = phi(phi(pt))
        z, zb = pt.even
        th, thb = pt.odd
        assert residual(back.even[0], z) < 1e-13
        assert residual(back.even[1], zb) < 1e-13
        assert residual(back.odd[0], -th) < 1e-13
        assert residual(back.odd[1], -thb) < 1e-13

    def test_torus_s_inverse(self, algebra, odd, point):
        tau, delta = algebra.scalar(0.2 + 1.1j), odd((4, 5))
        forward = torus_apply(TorusAction(TorusGenerator.S, tau, delta), point)
        back = torus_apply(TorusAction(TorusGenerator.S_INVERSE, tau, delta), forward)
        assert residual(back.even[0], point.even[0]) < 1e-14
        assert residual(back.odd[0], point.odd[0]) < 1e-14

    def test_torus_t(self, algebra, point):
        act = TorusAction(TorusGenerator.T, algebra.scalar(1j), algebra.zero())
        assert residual(torus_apply(act, point).even[0], point.even[0] + 1) == 0
