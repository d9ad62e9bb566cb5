"""Tests for supermatrices, the coset lift and osp(1|2)."""

import pytest

from supergeo.errors import DomainError, ParityError
from supergeo.grassmann import apply_analytic, invert, residual
from supergeo.supermatrix import (
    SuperMatrix,
    base_vector,
    berezinian,
    coset_lift,
    flat_form,
    is_orthosymplectic,
    killing,
    osp_structure,
    supertranspose,
)

GENS = (0, 1, 2, 3)


def _random(even, odd, p=2, q=2):
    n = p + q
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if (i < p) == (j < p):
                row.append(even(2.0 if i == j else 0.3, GENS, scale=0.3))
            else:
                row.append(odd(GENS))
        rows.append(row)
    return SuperMatrix(rows, p)


def _hyperboloid_point(even, odd, p):
    xs = [even(0.4 * (i + 1) - 0.5, GENS) for i in range(p)]
    t1, t2 = odd(GENS), odd(GENS)
    norm = t1 * t2 + 1
    for x in xs:
        norm = norm + x * x
    return [apply_analytic("sqrt", norm), *xs, t1, t2]


class TestBerezinian:
    def test_diagonal(self, algebra, th):
        zero = algebra.zero()
        a, b = algebra.scalar(2) + th[0] * th[1], algebra.scalar(3)
        c, d = algebra.scalar(5), algebra.scalar(0.5) + th[2] * th[3]
        m = SuperMatrix([[a, zero, zero, zero], [zero, b, zero, zero],
                         [zero, zero, c, zero], [zero, zero, zero, d]], 2)
        assert residual(berezinian(m), a * b * invert(c * d)) < 1e-14

    def test_multiplicative(self, even, odd):
        x, y = _random(even, odd), _random(even, odd)
        assert residual(berezinian(x @ y), berezinian(x) * berezinian(y)) < 1e-9
        assert residual(berezinian(x.inverse()) * berezinian(x), 1) < 1e-9

    def test_supertranspose_twice_flips_odd_blocks(self, even, odd):
        x = _random(even, odd)
        twice = supertranspose(supertranspose(x))
        for i in range(4):
            for j in range(4):
                sign = -1 if (i < 2) != (j < 2) else 1
                assert residual(twice[i, j], x[i, j] * sign) == 0

    def test_parity_is_checked(self, algebra, th):
        one = algebra.scalar(1)
        with pytest.raises(ParityError):
            SuperMatrix([[one, one], [th[0], one]], 1)


class TestCosetLift:
    @pytest.mark.parametrize("p", [2, 3])
    def test_corrected_lift(self, algebra, even, odd, p):
        h = _hyperboloid_point(even, odd, p)
        lift = coset_lift(h, "corrected")
        ok, res = is_orthosymplectic(lift, flat_form(algebra, p))
        assert ok, res
        image = lift @ base_vector(algebra, p)
        assert max(residual(image[i, 0], h[i]) for i in range(len(h))) < 1e-12

    def test_off_hyperboloid(self, algebra):
        zero = algebra.zero()
        with pytest.raises(DomainError):
            coset_lift([algebra.scalar(2), algebra.scalar(0), algebra.scalar(0), zero, zero])

    def test_unknown_variant(self, algebra):
        zero = algebra.zero()
        one = algebra.scalar(1)
        with pytest.raises(DomainError):
            coset_lift([one, zero, zero, zero, zero], "other")


class TestOsp:
    def test_relations(self):
        structure = osp_structure()
        assert max(structure["residuals"].values()) < 1e-12

    def test_killing_form(self):
        assert killing("L1", "L1") == pytest.approx(-1.0)
        assert killing("L2", "L2") == pytest.approx(1.0)
        assert killing("Q1", "Q2") == pytest.approx(-2.0)
        assert killing("L1", "Q1") == pytest.approx(0.0)
