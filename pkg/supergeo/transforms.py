"""Super-Möbius, super-Poincaré and supertranslation actions.

Boundary points live on the complex 1|1 chart ``C11`` (Z | Θ). Bulk actions
act on the 𝓗³|² chart (x, y, t | θ₁, θ₂) or, for the torus equivalence, on
multiplicative coordinates (ρ, t | Θ).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from supergeo.calculus import Chart, D_operator, SuperMap, SuperPoint
from supergeo.errors import DomainError
from supergeo.grassmann import (
    Algebra,
    GrassmannNumber,
    Parity,
    apply_analytic,
    conjugate,
    invert,
    modulus,
    modulus_squared,
    random_element,
    residual,
)
from supergeo.models import CH11_CHART, H32_CHART, SPHERE_CHART, TORUS_CHART, ch11_complex, ch11_real
from supergeo.supermatrix import SuperMatrix

logger = logging.getLogger(__name__)

C11 = Chart("c11", ("Z",), ("Th",))
TORUS_BULK = Chart("torus-bulk", ("rho", "t"), ("Th",))


@dataclass(frozen=True)
class OSpElement:
    """(a b αb−βa // c e αe−βc // α β 1+βα) with ae − bc = 1 + αβ."""

    a: GrassmannNumber
    b: GrassmannNumber
    c: GrassmannNumber
    e: GrassmannNumber
    alpha: GrassmannNumber
    beta: GrassmannNumber

    @property
    def algebra(self) -> Algebra:
        return self.a.algebra

    def constraint_residual(self) -> float:
        return residual(self.a * self.e - self.b * self.c, 1 + self.alpha * self.beta)

    def validate(self, tol: float = 1e-12) -> "OSpElement":
        for name in ("a", "b", "c", "e"):
            if not getattr(self, name).is_even():
                raise DomainError(f"OSp entry {name} must be even")
        for name in ("alpha", "beta"):
            if not getattr(self, name).is_odd():
                raise DomainError(f"OSp entry {name} must be odd")
        res = self.constraint_residual()
        if res > tol:
            raise DomainError(f"ae − bc ≠ 1 + αβ (residual {res:.3g})")
        return self

    def is_real(self, tol: float = 0.0) -> bool:
        return all(x.is_real(tol) for x in (self.a, self.b, self.c, self.e, self.alpha, self.beta))

    def matrix(self) -> SuperMatrix:
        a, b, c, e, al, be = self.a, self.b, self.c, self.e, self.alpha, self.beta
        return SuperMatrix(
            [[a, b, al * b - be * a], [c, e, al * e - be * c], [al, be, 1 + be * al]], 2
        )

    @classmethod
    def from_matrix(cls, m: SuperMatrix) -> "OSpElement":
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1], m[2, 0], m[2, 1])

    def __matmul__(self, other: "OSpElement") -> "OSpElement":
        return OSpElement.from_matrix(self.matrix() @ other.matrix())

    def denominator(self, z: GrassmannNumber, theta: GrassmannNumber) -> GrassmannNumber:
        """cZ + e + (αe − βc)Θ."""
        return self.c * z + self.e + (self.alpha * self.e - self.beta * self.c) * theta


def identity_element(algebra: Algebra) -> OSpElement:
    one, zero = algebra.scalar(1), algebra.zero()
    return OSpElement(one, zero, zero, one, zero, zero)


def translation(b: GrassmannNumber) -> OSpElement:
    """Z ↦ Z + b."""
    one, zero = b.algebra.scalar(1), b.algebra.zero()
    return OSpElement(one, b, zero, one, zero, zero)


def dilation(a: GrassmannNumber) -> OSpElement:
    """Z ↦ a²Z, Θ ↦ aΘ."""
    zero = a.algebra.zero()
    return OSpElement(a, zero, zero, invert(a), zero, zero)


def inversion(algebra: Algebra) -> OSpElement:
    """(Z, Θ) ↦ (−1/Z, Θ/Z)."""
    one, zero = algebra.scalar(1), algebra.zero()
    return OSpElement(zero, -one, one, zero, zero, zero)


def odd_alpha(alpha: GrassmannNumber) -> OSpElement:
    """(Z, Θ) ↦ (Z − αZΘ, Θ + αZ)."""
    one, zero = alpha.algebra.scalar(1), alpha.algebra.zero()
    return OSpElement(one, zero, zero, one, alpha, zero)


def odd_beta(beta: GrassmannNumber) -> OSpElement:
    """(Z, Θ) ↦ (Z − βΘ, Θ + β)."""
    one, zero = beta.algebra.scalar(1), beta.algebra.zero()
    return OSpElement(one, zero, zero, one, zero, beta)


def random_real_element(rng: np.random.Generator, algebra: Algebra, generators: Sequence[int],
                        scale: float = 0.3) -> OSpElement:
    """Real element from an Iwasawa body k·a·n dressed with nilpotent parts.

    e is solved from ae − bc = 1 + αβ, so the constraint holds exactly.
    """
    while True:
        phi = rng.uniform(0, 2 * math.pi)
        r = math.exp(rng.uniform(-0.7, 0.7))
        x = rng.uniform(-1.0, 1.0)
        k = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        body = k @ np.diag([r, 1 / r]) @ np.array([[1.0, x], [0.0, 1.0]])
        if abs(body[0, 0]) > 0.2:
            break

    def even(v: float) -> GrassmannNumber:
        return random_element(algebra, rng, Parity.EVEN, generators, body=v, scale=scale)

    alpha = random_element(algebra, rng, Parity.ODD, generators, scale=scale)
    beta = random_element(algebra, rng, Parity.ODD, generators, scale=scale)
    a, b, c = even(body[0, 0]), even(body[0, 1]), even(body[1, 0])
    e = (1 + alpha * beta + b * c) * invert(a)
    return OSpElement(a, b, c, e, alpha, beta)


# Super-Möbius action


@dataclass(frozen=True)
class MobiusResult:
    z: GrassmannNumber | None
    theta: GrassmannNumber | None
    at_infinity: bool = False


def mobius_apply(g: OSpElement, z: GrassmannNumber, theta: GrassmannNumber,
                 form: str = "fraction") -> MobiusResult:
    """Image of (Z, Θ); ``form`` picks the fractional or the expanded formula."""
    u = g.c * z + g.e
    if abs(u.body) == 0:
        return MobiusResult(None, None, at_infinity=True)
    if form == "fraction":
        inv = invert(g.denominator(z, theta))
        z_new = (g.a * z + g.b + (g.alpha * g.b - g.beta * g.a) * theta) * inv
        th_new = (g.alpha * z + g.beta + (1 - g.alpha * g.beta) * theta) * inv
    elif form == "expanded":
        inv = invert(u)
        lin = g.alpha * z + g.beta
        z_new = (g.a * z + g.b) * inv + theta * lin * inv * inv
        th_new = lin * inv + theta * inv
    else:
        raise DomainError(f"unknown Möbius form {form!r}")
    return MobiusResult(z_new, th_new)


def mobius_point(g: OSpElement, point: SuperPoint) -> SuperPoint:
    res = mobius_apply(g, point.even[0], point.odd[0])
    if res.at_infinity:
        raise DomainError(f"{point.body()} is sent to the point at infinity")
    return C11.point(res.z, res.theta)


def mobius_map(g: OSpElement) -> SuperMap:
    """The action of a real element on the real CH¹|¹ chart (x₀, x₁ | θ₁, θ₂)."""

    def act(point: SuperPoint) -> SuperPoint:
        z, theta = ch11_complex(point)
        res = mobius_apply(g, z, theta)
        if res.at_infinity:
            raise DomainError(f"{point.body()} is sent to the point at infinity")
        return ch11_real(res.z, res.theta)

    return SuperMap(CH11_CHART, CH11_CHART, act, "mobius")


@dataclass
class YCovariance:
    y: GrassmannNumber
    y_image: GrassmannNumber
    factor: GrassmannNumber
    residual: float


def y_covariance(g: OSpElement, z: GrassmannNumber, theta: GrassmannNumber) -> YCovariance:
    """Compare Y′ with |F_Γ|²Y for F_Γ = 1/(cZ + e + (αe − βc)Θ)."""
    if z.imag().body.real <= 0:
        raise DomainError("Y covariance needs ε₀(Im Z) > 0")
    res = mobius_apply(g, z, theta)
    if res.at_infinity:
        raise DomainError("Y covariance is undefined at a pole")
    y = y_value(z, theta)
    y_new = y_value(res.z, res.theta)
    factor = invert(g.denominator(z, theta))
    expected = modulus_squared(factor) * y
    return YCovariance(y, y_new, factor, residual(y_new, expected))


def y_value(z: GrassmannNumber, theta: GrassmannNumber) -> GrassmannNumber:
    """Y = Im Z + ½ΘΘ̄."""
    return (z - conjugate(z)) * (-0.5j) + theta * conjugate(theta) * 0.5


# Super-Poincaré extension


@dataclass(frozen=True)
class PoincareResult:
    z: GrassmannNumber | None
    t: GrassmannNumber | None
    theta1: GrassmannNumber | None
    theta2: GrassmannNumber | None
    at_infinity: bool = False


def poincare_apply(g: OSpElement, z: GrassmannNumber, t: GrassmannNumber,
                   theta1: GrassmannNumber, theta2: GrassmannNumber) -> PoincareResult:
    """Bulk extension of the Möbius action to (Z, T | Θ₁, Θ₂)."""
    a, b, c, e, al, be = g.a, g.b, g.c, g.e, g.alpha, g.beta
    ge = al * e - be * c
    gb = al * b - be * a
    den_z = c * z + e + ge * theta2
    den_t = c * t + ge * theta1
    norm = modulus_squared(den_z) + modulus_squared(den_t)
    if abs(norm.body) == 0:
        return PoincareResult(None, None, None, None, at_infinity=True)
    inv = invert(norm)
    num_z = a * z + b + gb * theta2
    num_th = al * z + be + (1 - al * be) * theta2
    z_new = (num_z * conjugate(den_z) + (a * t + gb * theta1) * conjugate(den_t)) * inv
    t_new = ((1 + al * be) * t + gb * theta1 * den_z - ge * theta1 * num_z) * inv
    th1_new = (ge * t + (1 - al * be) * theta1 * den_z - ge * theta1 * num_th) * inv
    th2_new = (num_th * conjugate(den_z) + (al * t + (1 - al * be) * theta1) * conjugate(den_t)) * inv
    return PoincareResult(z_new, t_new, th1_new, th2_new)


# Supertranslations of the torus


class TorusGenerator(str, Enum):
    T = "T"
    S = "S"
    S_INVERSE = "S-inverse"
    S_BULK = "S-bulk"
    T_BULK = "T-bulk"
    EQUIV = "equiv"


@dataclass(frozen=True)
class TorusAction:
    generator: TorusGenerator
    tau: GrassmannNumber
    delta: GrassmannNumber
    n: int = 1

    def nome(self, theta: GrassmannNumber) -> GrassmannNumber:
        """𝔮 = exp 2πi(τ + Θδ)."""
        return apply_analytic("exp", (self.tau + theta * self.delta) * (2j * math.pi))


def torus_apply(act: TorusAction, point: SuperPoint) -> SuperPoint:
    match act.generator:
        case TorusGenerator.T:
            z, th = point.even[0], point.odd[0]
            return C11.point(z + 1, th)
        case TorusGenerator.S:
            z, th = point.even[0], point.odd[0]
            return C11.point(z + act.tau + th * act.delta, th + act.delta)
        case TorusGenerator.S_INVERSE:
            z, th = point.even[0], point.odd[0]
            th_back = th - act.delta
            return C11.point(z - act.tau - th_back * act.delta, th_back)
        case TorusGenerator.S_BULK | TorusGenerator.T_BULK:
            return _bulk_translation(act, point)
        case TorusGenerator.EQUIV:
            rho, t = point.even
            th = point.odd[0]
            q = act.nome(th)
            q_n = q ** act.n if act.n >= 0 else invert(q) ** (-act.n)
            return TORUS_BULK.point(q_n * rho, modulus(q_n) * t, th + act.delta * act.n)
    raise DomainError(f"unknown torus generator {act.generator}")


def _bulk_translation(act: TorusAction, point: SuperPoint) -> SuperPoint:
    if point.chart != H32_CHART:
        raise DomainError("bulk supertranslations act on (x, y, t | θ₁, θ₂)")
    x, y, t = point.even
    t1, t2 = point.odd
    if act.generator is TorusGenerator.S_BULK:
        return H32_CHART.point(x + 1, y, t, t1, t2)
    if not act.delta.is_real():
        raise DomainError("the bulk extension needs a real odd modulus δ")
    shift = act.tau + t2 * act.delta
    return H32_CHART.point(x + shift.real(), y + shift.imag(), t + t1 * act.delta, t1, t2 + act.delta)


# Maps on abstract charts (Z, Z̄ | Θ, Θ̄)


def sphere_transition() -> SuperMap:
    """(Z, Θ) ↦ (−1/Z, Θ/Z) with the conjugate coordinates carried along."""

    def act(point: SuperPoint) -> SuperPoint:
        z, zb = point.even
        th, thb = point.odd
        iz, izb = invert(z), invert(zb)
        return SPHERE_CHART.point(-iz, -izb, th * iz, thb * izb, validate=False)

    return SuperMap(SPHERE_CHART, SPHERE_CHART, act, "sphere-transition")


def torus_s_abstract(tau: GrassmannNumber, delta: GrassmannNumber) -> SuperMap:
    """S on (Z, Z̄ | Θ, Θ̄): Z̄ ↦ Z̄ + τ̄ + δ̄Θ̄."""
    tau_bar, delta_bar = conjugate(tau), conjugate(delta)

    def act(point: SuperPoint) -> SuperPoint:
        z, zb = point.even
        th, thb = point.odd
        return TORUS_CHART.point(z + tau + th * delta, zb + tau_bar + delta_bar * thb,
                                 th + delta, thb + delta_bar, validate=False)

    return SuperMap(TORUS_CHART, TORUS_CHART, act, "torus-S")


# Superconformality


@dataclass
class SuperconformalReport:
    ok: bool
    residual: float
    factors: list[GrassmannNumber]


def is_superconformal(phi: Callable[[SuperPoint], SuperPoint] | SuperMap, points: Sequence[SuperPoint],
                      tol: float = 1e-10) -> SuperconformalReport:
    """Check 𝔻Z′ = Θ′·𝔻Θ′ at ``points`` and return the factors 𝔻Θ′.

    Maps on the 1|1 chart see no Z̄ or Θ̄, so holomorphy holds by construction.
    """
    worst, factors = 0.0, []
    for point in points:
        if point.chart != C11:
            raise DomainError(f"superconformality is checked on the c11 chart, got {point.chart.name}")
        d_z = D_operator(lambda pt: phi(pt).even[0], point)
        d_th = D_operator(lambda pt: phi(pt).odd[0], point)
        th_new = phi(point).odd[0]
        worst = max(worst, residual(d_z, th_new * d_th))
        factors.append(d_th)
    return SuperconformalReport(worst < tol, worst, factors)
