"""Super-Green functions on the supersphere and the supertorus.

Theta functions are evaluated on Grassmann arguments by summing the series
term by term with nilpotent exponentials. Barred quantities use ``i_unit=-1j``
with Z̄ and τ̄ passed as independent coordinates, so conj(ϑ(Z; τ)) is
``jacobi_theta(Z̄, τ̄, i_unit=-1j)`` and holomorphic derivatives can be taken
on the abstract (Z, Z̄ | Θ, Θ̄) charts.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from supergeo.calculus import SuperPoint, hessian
from supergeo.config import get_settings
from supergeo.dynamics import (
    DistanceKind,
    base_point,
    foot_point,
    hat_point,
    shifted_base_point,
    signed_vertical_distance,
    tilde_construction,
)
from supergeo.errors import ChartError, DomainError, TruncationError
from supergeo.geometry import SuperMetric, display_from_potential
from supergeo.grassmann import (
    GrassmannNumber,
    Parity,
    apply_analytic,
    conjugate,
    invert,
    modulus_squared,
    require_parity,
    residual,
)
from supergeo.models import H32_CHART, SPHERE_CHART, TORUS_CHART, complex_point

logger = logging.getLogger(__name__)

Z, ZB, TH, THB = 0, 1, 2, 3
TWO_PI = 2 * math.pi


def _log(x: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("log", x)


def _exp(x: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("exp", x)


def _log_abs(w: GrassmannNumber, w_bar: GrassmannNumber) -> GrassmannNumber:
    """log|w| = ½ log(w w̄) with w̄ supplied independently."""
    return _log(w * w_bar) * 0.5


def bernoulli2(x: GrassmannNumber) -> GrassmannNumber:
    """B₂(x) = x² − x + 1/6."""
    return x * x - x + 1.0 / 6.0


# Theta functions


@dataclass(frozen=True)
class ThetaContext:
    """Modulus τ and odd modulus δ of a supertorus, with truncation settings."""

    tau: GrassmannNumber
    delta: GrassmannNumber
    eps: float = field(default_factory=lambda: get_settings().series_eps)
    max_terms: int = field(default_factory=lambda: get_settings().max_series_terms)

    def __post_init__(self):
        require_parity(self.tau, Parity.EVEN, "τ")
        require_parity(self.delta, Parity.ODD, "δ")
        if self.tau.body.imag <= 0:
            raise DomainError(f"Im τ must have a positive body, got {self.tau.body}")

    @classmethod
    def create(cls, tau: GrassmannNumber, delta: GrassmannNumber | None = None) -> "ThetaContext":
        return cls(tau, tau.algebra.zero() if delta is None else delta)

    @property
    def algebra(self):
        return self.tau.algebra

    @property
    def tau_bar(self) -> GrassmannNumber:
        return conjugate(self.tau)

    @property
    def delta_bar(self) -> GrassmannNumber:
        return conjugate(self.delta)

    @property
    def im_tau(self) -> GrassmannNumber:
        return (self.tau - self.tau_bar) * (-0.5j)

    @property
    def q_abs(self) -> float:
        """Body of |q| for q = e^{πiτ}."""
        return math.exp(-math.pi * self.tau.body.imag)

    def shifted_tau(self, theta: GrassmannNumber) -> GrassmannNumber:
        """τ + Θδ."""
        return self.tau + theta * self.delta

    def shifted_tau_bar(self, theta_bar: GrassmannNumber) -> GrassmannNumber:
        """conj(τ + Θδ) = τ̄ + δ̄Θ̄."""
        return self.tau_bar + self.delta_bar * theta_bar

    def nome(self, theta: GrassmannNumber) -> GrassmannNumber:
        """𝔮 = e^{2πi(τ+Θδ)}."""
        return _exp(self.shifted_tau(theta) * (TWO_PI * 1j))


class ThetaForm(str, Enum):
    SERIES = "series"
    PRODUCT = "product"


def _series_order(z: GrassmannNumber, tau: GrassmannNumber, eps: float, max_terms: int) -> int:
    t = abs(tau.body.imag)
    if t <= 0:
        raise DomainError("theta series diverge for ε₀(|q|) ≥ 1")
    y = abs(z.body.imag)
    n = math.ceil(y / t + math.sqrt(math.log(eps) / (-math.pi * t))) + 2
    if n > max_terms:
        raise TruncationError(f"theta series needs {n} terms, budget is {max_terms}")
    return n


def _product_order(z: GrassmannNumber, tau: GrassmannNumber, eps: float, max_terms: int) -> int:
    t = abs(tau.body.imag)
    if t <= 0:
        raise DomainError("theta products diverge for ε₀(|q|) ≥ 1")
    y = abs(z.body.imag)
    n = math.ceil((-math.log(eps) + TWO_PI * y) / (TWO_PI * t)) + 2
    if n > max_terms:
        raise TruncationError(f"theta product needs {n} factors, budget is {max_terms}")
    return n


def _theta_sum(z, tau, weight: Callable[[int], float], i_unit: complex, eps: float, max_terms: int):
    n_max = _series_order(z, tau, eps, max_terms)
    total = z.algebra.zero()
    for n in range(-n_max, n_max + 1):
        w = weight(n)
        if w == 0:
            continue
        phase = (tau * ((n + 0.5) ** 2) + z * (2 * n + 1)) * (i_unit * math.pi)
        total = total + _exp(phase) * ((-1) ** n * w)
    return total


def _limits(eps: float | None, max_terms: int | None) -> tuple[float, int]:
    settings = get_settings()
    return (settings.series_eps if eps is None else eps,
            settings.max_series_terms if max_terms is None else max_terms)


def jacobi_theta(z: GrassmannNumber, tau: GrassmannNumber, form: ThetaForm = ThetaForm.SERIES,
                 i_unit: complex = 1j, eps: float | None = None, max_terms: int | None = None) -> GrassmannNumber:
    """ϑ(Z; τ) = −i Σ(−1)ⁿ exp(πi[τ(n+½)² + (2n+1)Z]), or its product form.

    product: −i e^{πiZ} Q^{1/8} Π(1−Qⁿ)(1−ρQⁿ)(1−ρ⁻¹Qⁿ⁻¹) with Q = e^{2πiτ}, ρ = e^{2πiZ}.
    """
    eps, max_terms = _limits(eps, max_terms)
    if ThetaForm(form) is ThetaForm.SERIES:
        return _theta_sum(z, tau, lambda n: 1.0, i_unit, eps, max_terms) * (-i_unit)
    n_max = _product_order(z, tau, eps, max_terms)
    big_q = _exp(tau * (2 * math.pi * i_unit))
    rho = _exp(z * (2 * math.pi * i_unit))
    rho_inv = _exp(z * (-2 * math.pi * i_unit))
    prod = 1 - rho_inv
    q_n = z.algebra.scalar(1)
    for _ in range(n_max):
        q_n = q_n * big_q
        prod = prod * (1 - q_n) * (1 - rho * q_n) * (1 - rho_inv * q_n)
    return _exp((z + tau * 0.25) * (math.pi * i_unit)) * prod * (-i_unit)


def theta_prime(z: GrassmannNumber, tau: GrassmannNumber, i_unit: complex = 1j,
                eps: float | None = None, max_terms: int | None = None) -> GrassmannNumber:
    """∂ϑ/∂Z = π Σ(−1)ⁿ(2n+1) exp(πi[τ(n+½)² + (2n+1)Z])."""
    eps, max_terms = _limits(eps, max_terms)
    return _theta_sum(z, tau, lambda n: 2 * n + 1, i_unit, eps, max_terms) * math.pi


def theta_dot(z: GrassmannNumber, tau: GrassmannNumber, i_unit: complex = 1j,
              eps: float | None = None, max_terms: int | None = None) -> GrassmannNumber:
    """∂ϑ/∂τ = π Σ(−1)ⁿ(n+½)² exp(πi[τ(n+½)² + (2n+1)Z])."""
    eps, max_terms = _limits(eps, max_terms)
    return _theta_sum(z, tau, lambda n: (n + 0.5) ** 2, i_unit, eps, max_terms) * math.pi


def theta_prime_zero_closed(tau: GrassmannNumber, eps: float | None = None,
                            max_terms: int | None = None) -> GrassmannNumber:
    """ϑ′(0; τ) = 2π Q^{1/8} Π(1−Qⁿ)³."""
    eps, max_terms = _limits(eps, max_terms)
    zero = tau.algebra.zero()
    big_q = _exp(tau * (TWO_PI * 1j))
    prod = tau.algebra.scalar(1)
    q_n = tau.algebra.scalar(1)
    for _ in range(_product_order(zero, tau, eps, max_terms)):
        q_n = q_n * big_q
        prod = prod * (1 - q_n) ** 3
    return _exp(tau * (math.pi * 0.25j)) * prod * TWO_PI


def super_theta(z: GrassmannNumber, theta: GrassmannNumber, ctx: ThetaContext) -> GrassmannNumber:
    """𝒯(Z, Θ; τ, δ) = ϑ(Z; τ + Θδ)."""
    return jacobi_theta(z, ctx.shifted_tau(theta), eps=ctx.eps, max_terms=ctx.max_terms)


def super_theta_bar(z_bar: GrassmannNumber, theta_bar: GrassmannNumber, ctx: ThetaContext) -> GrassmannNumber:
    """conj 𝒯 evaluated on independent barred coordinates."""
    return jacobi_theta(z_bar, ctx.shifted_tau_bar(theta_bar), i_unit=-1j, eps=ctx.eps, max_terms=ctx.max_terms)


def super_theta_expansion(z: GrassmannNumber, theta: GrassmannNumber, ctx: ThetaContext) -> GrassmannNumber:
    """ϑ(Z; τ) + Θδ ϑ̇(Z; τ)."""
    kw = {"eps": ctx.eps, "max_terms": ctx.max_terms}
    return jacobi_theta(z, ctx.tau, **kw) + theta * ctx.delta * theta_dot(z, ctx.tau, **kw)


def super_theta_prime_zero(theta: GrassmannNumber, ctx: ThetaContext, i_unit: complex = 1j) -> GrassmannNumber:
    """𝒯′(0, Θ) from the differentiated series; ``theta`` is Θ̄ when ``i_unit`` is −i."""
    tau = ctx.shifted_tau(theta) if i_unit == 1j else ctx.shifted_tau_bar(theta)
    return theta_prime(tau.algebra.zero(), tau, i_unit, ctx.eps, ctx.max_terms)


def super_theta_prime_zero_closed(theta: GrassmannNumber, ctx: ThetaContext) -> GrassmannNumber:
    """2πQ^{1/8}Π(1−Qⁿ)³ · (1 + (πi/4)Θδ − 6πi Σ mQᵐ/(1−Qᵐ) Θδ)."""
    td = theta * ctx.delta
    return theta_prime_zero_closed(ctx.tau, ctx.eps, ctx.max_terms) * (
        1 + td * (math.pi * 0.25j) - _lambert(ctx) * td * (6j * math.pi)
    )


def _lambert(ctx: ThetaContext, i_unit: complex = 1j) -> GrassmannNumber:
    """Σ mQᵐ/(1−Qᵐ) at Q = e^{2πiτ}, or its conjugate."""
    tau = ctx.tau if i_unit == 1j else ctx.tau_bar
    big_q = _exp(tau * (2 * math.pi * i_unit))
    total = tau.algebra.zero()
    q_m = tau.algebra.scalar(1)
    for m in range(1, _product_order(tau.algebra.zero(), tau, ctx.eps, ctx.max_terms) + 1):
        q_m = q_m * big_q
        total = total + q_m * invert(1 - q_m) * m
    return total


# Supersphere


def sphere_green(point: SuperPoint) -> GrassmannNumber:
    """G_P(Z, Θ) = √(ZZ̄/(1+ZZ̄+ΘΘ̄)) for P = (0; 0)."""
    if point.chart != SPHERE_CHART:
        raise ChartError(f"sphere_green lives on {SPHERE_CHART.name}, got {point.chart.name}")
    z, zb = point.even
    th, thb = point.odd
    zz = z * zb
    if abs(zz.body) == 0:
        return point.algebra.zero()
    return apply_analytic("sqrt", zz * invert(zz + th * thb + 1))


def sphere_green_expansion(z: GrassmannNumber, theta: GrassmannNumber) -> GrassmannNumber:
    """|Z|/√(1+|Z|²) · (1 − ΘΘ̄/(2(1+|Z|²)))."""
    r2 = modulus_squared(z)
    s = theta * conjugate(theta)
    return apply_analytic("sqrt", r2 * invert(1 + r2)) * (1 - s * invert((1 + r2) * 2))


def classical_sphere_green(z: complex) -> float:
    return abs(z) / math.sqrt(1 + abs(z) ** 2)


@dataclass
class GreenTriple:
    base: SuperPoint
    metric: SuperMetric
    green: Callable[[SuperPoint], GrassmannNumber]
    classical: Callable[[complex], float] | None = None


@dataclass
class ConditionResult:
    name: str
    passed: bool
    residual: float
    notes: str = ""


@dataclass
class GreenTripleReport:
    conditions: list[ConditionResult]
    components: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionResult:
        return next(c for c in self.conditions if c.name == name)


def green_components(triple: GreenTriple, z: complex) -> dict[str, complex]:
    """Body values of the 1 and ΘΘ̄ components of G at (Z, Θ) = (z, 0)."""
    algebra = triple.base.algebra
    chart = triple.base.chart
    point = complex_point(chart, algebra.scalar(z), algebra.zero())
    g0 = triple.green(point).body
    # ∂Θ∂Θ̄(G₁ΘΘ̄) = −G₁
    g1 = -hessian(triple.green, point, TH, THB).body
    return {"1": g0, "ThThb": g1}


def green_triple_check(triple: GreenTriple, samples: Sequence[SuperPoint], tol: float = 1e-7,
                       radii: tuple[float, float] = (1e-3, 1e-4)) -> GreenTripleReport:
    """Evaluate the four Green-triple conditions; never raises on a failed condition."""
    if len(samples) < 5:
        raise DomainError("a Green triple check needs at least five samples")
    chart = triple.base.chart
    conditions = []

    worst = min(triple.green(s).body.real for s in samples)
    conditions.append(ConditionResult("nonnegative", worst >= -tol, max(0.0, -worst)))

    z0 = complex(triple.base.even[0].body)
    r1, r2 = radii
    comps1 = green_components(triple, z0 + r1)
    comps2 = green_components(triple, z0 + r2)
    ratios = {}
    worst_zero = 0.0
    first_order = True
    for name in comps1:
        a, b = comps1[name] / r1, comps2[name] / r2
        ratios[name] = abs(b)
        gap = abs(a - b) / max(abs(b), 1e-300)
        worst_zero = max(worst_zero, gap)
        if abs(b) <= tol or gap > 1e-3:
            first_order = False
    conditions.append(ConditionResult("first-order-zero", first_order, worst_zero,
                                      "relative drift of component/r between the two radii"))

    display = display_from_potential(chart, lambda pt: _log(triple.green(pt)))
    worst_metric = 0.0
    for s in samples:
        lhs, rhs = display(s), triple.metric.matrix(s)
        for i in range(chart.dim):
            for j in range(chart.dim):
                worst_metric = max(worst_metric, residual(lhs[i][j], rhs[i][j]))
    conditions.append(ConditionResult("hessian-metric", worst_metric < tol, worst_metric))

    worst_body = 0.0
    if triple.classical is not None:
        for s in samples:
            z = complex(s.even[0].body)
            body_point = complex_point(chart, s.algebra.scalar(z), s.algebra.zero())
            worst_body = max(worst_body, abs(triple.green(body_point).body - triple.classical(z)))
    conditions.append(ConditionResult("classical-body", worst_body < tol, worst_body,
                                      "" if triple.classical else "no classical oracle supplied"))
    for c in conditions:
        logger.debug("green triple %s: passed=%s residual=%.3g", c.name, c.passed, c.residual)
    return GreenTripleReport(conditions, ratios)


# Supertorus


class GreenForm(str, Enum):
    DEFINITION = "definition"
    NERON = "neron"
    EXPANDED = "expanded"


def _torus_parts(point: SuperPoint, ctx: ThetaContext):
    if point.chart != TORUS_CHART:
        raise ChartError(f"torus_green lives on {TORUS_CHART.name}, got {point.chart.name}")
    z, zb = point.even
    th, thb = point.odd
    tau_p, tau_pb = ctx.shifted_tau(th), ctx.shifted_tau_bar(thb)
    t_p = (tau_p - tau_pb) * (-0.5j)
    y = (z - zb) * (-0.5j)
    return z, zb, th, thb, tau_p, tau_pb, t_p, y


def _log_abs_product(w_fn, nome: GrassmannNumber, nome_bar: GrassmannNumber, n_max: int) -> GrassmannNumber:
    """Σₙ log|1 − w(𝔮ⁿ)| with the barred factor built from 𝔮̄ⁿ."""
    total = nome.algebra.zero()
    q_n, qb_n = nome.algebra.scalar(1), nome.algebra.scalar(1)
    for _ in range(n_max):
        q_n, qb_n = q_n * nome, qb_n * nome_bar
        a, b = w_fn(q_n, qb_n)
        total = total + _log_abs(1 - a, 1 - b)
    return total


def torus_green(point: SuperPoint, ctx: ThetaContext, form: GreenForm = GreenForm.DEFINITION) -> GrassmannNumber:
    """𝒢(Z, Θ) on the abstract torus chart.

    definition: log|𝒯/𝒯′(0)| − 2π((y² + 2ΘΘ̄)/(2T) − (1/π)Σlog|1−𝔮ⁿ| + T/12 − log 2π/(2π));
    neron: log|(1−ρ)Π(1−ρ𝔮ⁿ)(1−ρ⁻¹𝔮ⁿ)| − πB₂(y/T)T − 2πΘΘ̄/T;
    expanded: the δ-expansion around ϑ(Z; τ). Here T = Im(τ + Θδ), y = Im Z.
    """
    form = GreenForm(form)
    z, zb, th, thb, tau_p, tau_pb, t_p, y = _torus_parts(point, ctx)
    if form is GreenForm.EXPANDED:
        return _torus_green_expanded(point, ctx)
    inv_t = invert(t_p)
    tt = th * thb
    nome = _exp(tau_p * (TWO_PI * 1j))
    nome_bar = _exp(tau_pb * (-TWO_PI * 1j))
    n_max = _product_order(z, ctx.tau, ctx.eps, ctx.max_terms)
    if form is GreenForm.DEFINITION:
        theta_val = super_theta(z, th, ctx)
        theta_bar = super_theta_bar(zb, thb, ctx)
        if abs(theta_val.body) <= 1e-300:
            raise DomainError("𝒢 is −∞ on the lattice")
        prime = super_theta_prime_zero(th, ctx)
        prime_bar = super_theta_prime_zero(thb, ctx, i_unit=-1j)
        ratio = _log_abs(theta_val * invert(prime), theta_bar * invert(prime_bar))
        sums = _log_abs_product(lambda a, b: (a, b), nome, nome_bar, n_max)
        return ratio - (
            (y * y + tt * 2) * inv_t * 0.5
            - sums * (1 / math.pi)
            + t_p * (1.0 / 12.0)
            - math.log(TWO_PI) / TWO_PI
        ) * TWO_PI
    rho, rho_bar = _exp(z * (TWO_PI * 1j)), _exp(zb * (-TWO_PI * 1j))
    rho_inv, rho_inv_bar = _exp(z * (-TWO_PI * 1j)), _exp(zb * (TWO_PI * 1j))
    if abs((1 - rho).body) <= 1e-300:
        raise DomainError("𝒢 is −∞ on the lattice")
    neron = (
        _log_abs(1 - rho, 1 - rho_bar)
        + _log_abs_product(lambda a, b: (rho * a, rho_bar * b), nome, nome_bar, n_max)
        + _log_abs_product(lambda a, b: (rho_inv * a, rho_inv_bar * b), nome, nome_bar, n_max)
    )
    return neron - bernoulli2(y * inv_t) * t_p * math.pi - tt * inv_t * TWO_PI


def _torus_green_expanded(point: SuperPoint, ctx: ThetaContext) -> GrassmannNumber:
    z, zb = point.even
    th, thb = point.odd
    t = ctx.im_tau
    inv_t = invert(t)
    y = (z - zb) * (-0.5j)
    td, td_bar = th * ctx.delta, ctx.delta_bar * thb
    im_td = (td - td_bar) * (-0.5j)
    dd = ctx.delta * ctx.delta_bar
    zero = point.algebra.zero()
    classical = torus_green(point.replace(TH, zero).replace(THB, zero), ThetaContext.create(ctx.tau), GreenForm.NERON)

    def lambert_sum(i_unit: complex, zz: GrassmannNumber) -> GrassmannNumber:
        tau = ctx.tau if i_unit == 1j else ctx.tau_bar
        big_q = _exp(tau * (2 * math.pi * i_unit))
        rho = _exp(zz * (2 * math.pi * i_unit))
        rho_inv = _exp(zz * (-2 * math.pi * i_unit))
        total = zz.algebra.zero()
        q_m = zz.algebra.scalar(1)
        for m in range(1, _product_order(zz, tau, ctx.eps, ctx.max_terms) + 1):
            q_m = q_m * big_q
            num = (2 - rho * q_m - rho_inv * q_m) * q_m * m
            total = total + num * invert((1 - rho * q_m) * (1 - rho_inv * q_m))
        return total

    im_sum = (lambert_sum(1j, z) * td - td_bar * lambert_sum(-1j, zb)) * (-0.5j)
    ratio = y * inv_t
    return classical + (
        im_sum
        + (ratio * ratio * 0.5 - 1.0 / 12.0) * im_td
        - (inv_t + y * y * dd * inv_t * inv_t * inv_t * 0.25) * th * thb
    ) * TWO_PI


def green_log_limit(ctx: ThetaContext, radii: tuple[float, float] = (1e-5, 1e-6)) -> float:
    """𝒢/log|Z| extrapolated to Z → 0 along Z = r(1+i), linear in 1/log|Z|."""
    algebra = ctx.algebra
    xs, fs = [], []
    for r in radii:
        z = algebra.scalar(r * (1 + 1j))
        g = torus_green(complex_point(TORUS_CHART, z, algebra.zero()), ctx).body.real
        log_abs = math.log(r * math.sqrt(2))
        xs.append(1 / log_abs)
        fs.append(g / log_abs)
    (x1, x2), (f1, f2) = xs, fs
    return (f1 * x2 - f2 * x1) / (x2 - x1)


HESSIAN_PAIRS = {"ZZb": (Z, ZB), "ZThb": (Z, THB), "ThZb": (TH, ZB), "ThThb": (TH, THB)}


def torus_green_hessian(point: SuperPoint, ctx: ThetaContext) -> dict[str, GrassmannNumber]:
    """−(1/2π)∂_a∂_b 𝒢 for the four mixed pairs."""
    fn = lambda pt: torus_green(pt, ctx)  # noqa: E731
    return {name: hessian(fn, point, a, b) * (-1 / TWO_PI) for name, (a, b) in HESSIAN_PAIRS.items()}


def printed_torus_hessian(point: SuperPoint, ctx: ThetaContext) -> dict[str, GrassmannNumber]:
    """Closed forms for the four mixed second derivatives as displayed."""
    z, zb = point.even
    th, thb = point.odd
    t = ctx.im_tau
    inv_t = invert(t)
    y = (z - zb) * (-0.5j)
    d, d_bar = ctx.delta, ctx.delta_bar
    dd = d * d_bar
    im_td = (th * d - d_bar * thb) * (-0.5j)
    inv_t2 = inv_t * inv_t
    inv_t3 = inv_t2 * inv_t
    return {
        "ZZb": inv_t * 0.25 - im_td * inv_t2 * 0.25 + dd * th * thb * inv_t3 * 0.125,
        "ZThb": y * d_bar * inv_t2 * 0.25j - y * dd * th * inv_t3 * 0.25,
        "ThZb": -(y * d * inv_t2 * 0.25j) - y * dd * thb * inv_t3 * 0.25,
        "ThThb": -inv_t - y * y * dd * inv_t3 * 0.25,
    }


class FaltingsForm(str, Enum):
    DEFINITION = "definition"
    CORRECTED = "corrected"
    PRINTED = "printed"


def faltings(theta: GrassmannNumber, ctx: ThetaContext, form: FaltingsForm = FaltingsForm.DEFINITION) -> GrassmannNumber:
    """F(Θ) = −(1/2π) log|T⁶ 𝒯′(0, Θ)⁸| with T = Im(τ + Θδ).

    corrected and printed rewrite it through the product for ϑ′(0); they differ
    in the Lambert coefficient (24 and 1) and the constant (−(4/π) and −(1/π) times log 2π).
    """
    form = FaltingsForm(form)
    theta_bar = conjugate(theta)
    t_p = (ctx.shifted_tau(theta) - ctx.shifted_tau_bar(theta_bar)) * (-0.5j)
    log_t = _log(t_p)
    if form is FaltingsForm.DEFINITION:
        prime = super_theta_prime_zero(theta, ctx)
        prime_bar = super_theta_prime_zero(theta_bar, ctx, i_unit=-1j)
        return (log_t * 6 + _log_abs(prime, prime_bar) * 8) * (-1 / TWO_PI)
    big_q, big_q_bar = _exp(ctx.tau * (TWO_PI * 1j)), _exp(ctx.tau_bar * (-TWO_PI * 1j))
    n_max = _product_order(ctx.algebra.zero(), ctx.tau, ctx.eps, ctx.max_terms)
    sums = _log_abs_product(lambda a, b: (a, b), big_q, big_q_bar, n_max)
    lambert = (_lambert(ctx) * theta * ctx.delta).imag()
    coefficient, constant = (24, 4 / math.pi) if form is FaltingsForm.CORRECTED else (1, 1 / math.pi)
    return (log_t * (-3 / math.pi) - sums * (12 / math.pi) + t_p - lambert * coefficient
            - math.log(TWO_PI) * constant)


# Identities with hyperbolic distances


class IdentityKind(str, Enum):
    SPHERE_DQ = "sphere-dq"
    SPHERE_TILDE = "sphere-tilde"
    TORUS = "torus"


@dataclass
class IdentityResult:
    kind: IdentityKind
    inputs: dict[str, GrassmannNumber]
    lhs: GrassmannNumber
    rhs: GrassmannNumber
    per_term: dict[str, GrassmannNumber]

    @property
    def residual(self) -> float:
        return residual(self.lhs, self.rhs)


def _sphere_lhs(z: GrassmannNumber, theta: GrassmannNumber) -> GrassmannNumber:
    return _log(sphere_green(complex_point(SPHERE_CHART, z, theta)))


def _sphere_dq(z: GrassmannNumber, theta: GrassmannNumber) -> IdentityResult:
    algebra = z.algebra
    zero = algebra.zero()
    p1 = H32_CHART.point(zero, zero, zero, zero, zero, validate=False)
    p2 = H32_CHART.point(z.real(), z.imag(), zero, zero, zero, validate=False)
    q = H32_CHART.point(zero, zero, algebra.scalar(1), zero, zero)
    c = foot_point(p1, p2, q).distance.cosh
    inv_c = invert(c)
    s = theta * conjugate(theta)
    rhs = _log(inv_c - inv_c * (1 - inv_c * inv_c) * s * 0.5)
    return IdentityResult(IdentityKind.SPHERE_DQ, {"Z": z, "Th": theta}, _sphere_lhs(z, theta), rhs,
                          {"cosh_dq": c})


def _sphere_tilde(z: GrassmannNumber, theta: GrassmannNumber) -> IdentityResult:
    tilde = tilde_construction(z, theta)
    rhs = _log(invert(tilde.cosh_expected))
    return IdentityResult(IdentityKind.SPHERE_TILDE, {"Z": z, "Th": theta}, _sphere_lhs(z, theta), rhs, {
        "cosh_expected": tilde.cosh_expected,
        "cosh_super": tilde.cosh_super,
        "cosh_printed": tilde.cosh_printed,
        "super_gap": tilde.cosh_super - tilde.cosh_expected,
    })


def _torus(z: GrassmannNumber, theta: GrassmannNumber, ctx: ThetaContext, variant: str) -> IdentityResult:
    if variant not in ("bosonic", "shifted"):
        raise DomainError(f"unknown torus identity variant {variant!r}")
    p0 = base_point(z.algebra)
    unit_band = math.sqrt(ctx.eps)

    def dist(w: GrassmannNumber) -> GrassmannNumber:
        hat = hat_point(w, theta)
        if variant == "bosonic":
            return signed_vertical_distance(p0, hat, DistanceKind.BOSONIC)
        if abs(abs(w.body) - 1) < unit_band:
            # P̃₀ degenerates on |w| = 1, where the vertical distance is zero
            return w.algebra.zero()
        return signed_vertical_distance(shifted_base_point(w, theta), hat, DistanceKind.SUPER)

    nome = ctx.nome(theta)
    rho = _exp(z * (TWO_PI * 1j))
    rho_inv = _exp(z * (-TWO_PI * 1j))
    d_nome, d_rho, d_minus = dist(nome), dist(rho), dist(1 - rho)
    n_max = _product_order(z, ctx.tau, ctx.eps, ctx.max_terms)
    tail = z.algebra.zero()
    q_n = z.algebra.scalar(1)
    reach = max(abs(rho.body), abs(rho_inv.body))
    for _ in range(n_max):
        q_n = q_n * nome
        if abs(q_n.body) * reach < ctx.eps:
            break
        tail = tail + dist(1 - q_n * rho) + dist(1 - q_n * rho_inv)
    inv_nome = invert(d_nome)
    bernoulli = d_nome * bernoulli2(d_rho * inv_nome) * 0.5
    soul = inv_nome * theta * conjugate(theta) * (4 * math.pi ** 2)
    rhs = bernoulli + d_minus + tail + soul
    lhs = torus_green(complex_point(TORUS_CHART, z, theta), ctx)
    per_term = {"d_nome": d_nome, "d_rho": d_rho, "bernoulli": bernoulli, "d_minus": d_minus,
                "tail": tail, "theta_term": soul}
    return IdentityResult(IdentityKind.TORUS, {"Z": z, "Th": theta, "tau": ctx.tau, "delta": ctx.delta},
                          lhs, rhs, per_term)


def manin_identity(kind: IdentityKind, z: GrassmannNumber, theta: GrassmannNumber,
                   ctx: ThetaContext | None = None, variant: str = "bosonic") -> IdentityResult:
    """Compare a Green function with its expression through hyperbolic distances."""
    require_parity(z, Parity.EVEN, "Z")
    require_parity(theta, Parity.ODD, "Θ")
    if abs(z.body) == 0:
        raise DomainError("the identities hold off the zero locus Z = 0")
    kind = IdentityKind(kind)
    if kind is IdentityKind.SPHERE_DQ:
        result = _sphere_dq(z, theta)
    elif kind is IdentityKind.SPHERE_TILDE:
        result = _sphere_tilde(z, theta)
    else:
        if ctx is None:
            raise DomainError("the torus identity needs a ThetaContext")
        result = _torus(z, theta, ctx, variant)
    logger.info("%s identity residual %.3g", kind.value, result.residual)
    return result


def sample_grid(z_values: Sequence[complex], theta: GrassmannNumber,
                fn: Callable[[SuperPoint], GrassmannNumber], chart=SPHERE_CHART) -> list[tuple[complex, GrassmannNumber]]:
    """Green values on a grid of body points with a common Θ."""
    algebra = theta.algebra
    return [(complex(v), fn(complex_point(chart, algebra.scalar(complex(v)), theta)))
            for v in np.asarray(z_values, dtype=complex).ravel()]
