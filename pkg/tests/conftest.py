import numpy as np
import pytest

from supergeo.grassmann import Parity, default_algebra, random_element


@pytest.fixture
def algebra():
    return default_algebra()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def th(algebra):
    """θ₁ … θ₄."""
    return [algebra.theta(k) for k in range(1, 5)]


@pytest.fixture
def odd(algebra, rng):
    def make(generators=(0, 1), complex_coeffs=False, scale=0.3):
        return random_element(algebra, rng, Parity.ODD, generators, complex_coeffs, scale=scale)
    return make


@pytest.fixture
def even(algebra, rng):
    def make(body, generators=(0, 1), complex_coeffs=False, scale=0.2):
        return random_element(algebra, rng, Parity.EVEN, generators, complex_coeffs, body, scale)
    return make
