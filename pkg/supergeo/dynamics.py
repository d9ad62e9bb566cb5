"""Supergeodesics of CH¹|¹ and the distances built on them.

Closed-form paths are evaluated on the complex coordinates (Z, Θ) and exposed
on the real chart (x₀, x₁ | θ₁, θ₂) of the CH¹|¹ metric, so the generic
Christoffel machinery and the complex geodesic system can both be checked
against them. Distances are even Grassmann numbers; boundary configurations
of 𝓗³|² use the chart (x, y, t | θ₁, θ₂).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import minimize_scalar

from supergeo.calculus import Chart, SuperPoint, derivative, partial_even
from supergeo.config import get_settings
from supergeo.errors import ChartError, DomainError, ParityError
from supergeo.geometry import SuperMetric, geodesic_acceleration
from supergeo.grassmann import (
    Algebra,
    GrassmannNumber,
    Parity,
    apply_analytic,
    conjugate,
    invert,
    modulus,
    modulus_squared,
    require_parity,
    residual,
)
from supergeo.models import CH11_CHART, H32_CHART, ch11_complex, ch11_real
from supergeo.transforms import C11, y_value

logger = logging.getLogger(__name__)

PARAM = Chart("param", ("u",))


class PathKind(str, Enum):
    TYPE_I = "type-I"
    TYPE_II = "type-II"
    NUMERIC = "numeric"
    EXPLICIT = "explicit"


class Branch(str, Enum):
    SEMICIRCLE = "semicircle"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class TracePoint:
    u: float
    point: SuperPoint
    velocity: tuple[GrassmannNumber, ...]


@dataclass
class GeodesicPath:
    """A supergeodesic, closed form or sampled.

    ``params`` holds c, γ, ζ for Type-I and c₁, c₂ (or c₃), ω, u₀, ξ for
    Type-II; ``u_start``/``u_end`` pin the exact (possibly nilpotent-shifted)
    endpoint parameters when the path was solved from endpoint data.
    """

    kind: PathKind
    chart: Chart
    u_range: tuple[float, float]
    params: dict[str, GrassmannNumber] = field(default_factory=dict)
    branch: Branch | None = None
    trace: list[TracePoint] = field(default_factory=list)
    truncated: bool = False
    fn: Callable[[GrassmannNumber], SuperPoint] | None = field(default=None, repr=False)

    @property
    def algebra(self) -> Algebra:
        if self.params:
            return next(iter(self.params.values())).algebra
        if self.trace:
            return self.trace[0].point.algebra
        raise DomainError("path carries no algebra")

    def _param(self, u) -> GrassmannNumber:
        if isinstance(u, GrassmannNumber):
            require_parity(u, Parity.EVEN, "path parameter")
            return u
        return self.algebra.scalar(float(u))

    def _closed(self, u) -> tuple[GrassmannNumber, GrassmannNumber]:
        p = self.params
        if self.kind is PathKind.TYPE_I:
            u = self._param(u)
            return p["c"], p["gamma"] * u + p["zeta"]
        if isinstance(u, float) and math.isinf(u):
            return self._limit(u)
        sigma = (self._param(u) + p["u0"]) * p["omega"]
        if self.branch is Branch.VERTICAL:
            z = apply_analytic("exp", sigma) * 1j + p["c3"]
        else:
            w = apply_analytic("tanh", sigma) + apply_analytic("sech", sigma) * 1j
            z = p["c1"] * w + p["c2"]
        return z, p["xi"] * z

    def _limit(self, u: float) -> tuple[GrassmannNumber, GrassmannNumber]:
        p = self.params
        direction = u * p["omega"].body.real
        if self.branch is Branch.VERTICAL:
            if direction > 0:
                raise DomainError("the vertical branch runs off to the point at infinity")
            z = p["c3"] * 1
        else:
            z = p["c1"] * (1 if direction > 0 else -1) + p["c2"]
        return z, p["xi"] * z

    def complex_at(self, u) -> tuple[GrassmannNumber, GrassmannNumber]:
        """(Z, Θ) at parameter ``u``."""
        if self.kind in (PathKind.TYPE_I, PathKind.TYPE_II):
            return self._closed(u)
        pt = self.at(u)
        if pt.chart == C11:
            return pt.even[0], pt.odd[0]
        if pt.chart == CH11_CHART:
            return ch11_complex(pt)
        raise ChartError(f"{pt.chart.name} has no complex coordinates")

    def at(self, u) -> SuperPoint:
        match self.kind:
            case PathKind.TYPE_I | PathKind.TYPE_II:
                return ch11_real(*self._closed(u))
            case PathKind.EXPLICIT:
                return self.fn(self._param(u))
            case PathKind.NUMERIC:
                target = u.body.real if isinstance(u, GrassmannNumber) else float(u)
                for node in self.trace:
                    if abs(node.u - target) <= 1e-9 * max(1.0, abs(target)):
                        return node.point
                raise DomainError(f"u = {target} is not a node of the trace")
        raise DomainError(f"unknown path kind {self.kind}")

    def start(self) -> tuple[GrassmannNumber, GrassmannNumber]:
        return self.complex_at(self.params.get("u_start", self.u_range[0]))

    def end(self) -> tuple[GrassmannNumber, GrassmannNumber]:
        return self.complex_at(self.params.get("u_end", self.u_range[1]))


# Closed forms


def _real_even(x: GrassmannNumber, name: str) -> None:
    require_parity(x, Parity.EVEN, name)
    if not x.is_real(1e-14):
        raise DomainError(f"{name} must have real coefficients")


def closed_geodesic(kind: PathKind, u_range: tuple[float, float] = (0.0, 1.0),
                    **params: GrassmannNumber) -> GeodesicPath:
    """Type-I (Z = c, Θ = γu + ζ) or Type-II (semicircle or vertical line, Θ = ξZ)."""
    if kind is PathKind.TYPE_I:
        require_parity(params["c"], Parity.EVEN, "c")
        require_parity(params["gamma"], Parity.ODD, "gamma")
        require_parity(params["zeta"], Parity.ODD, "zeta")
        return GeodesicPath(kind, CH11_CHART, u_range, dict(params))
    if kind is not PathKind.TYPE_II:
        raise DomainError(f"{kind.value} paths have no closed form")
    algebra = next(iter(params.values())).algebra
    params.setdefault("omega", algebra.scalar(1))
    params.setdefault("u0", algebra.zero())
    params.setdefault("xi", algebra.zero())
    if "c3" in params:
        branch = Branch.VERTICAL
        names = ("c3", "omega", "u0")
    else:
        branch = Branch.SEMICIRCLE
        names = ("c1", "c2", "omega", "u0")
        if params["c1"].body.real <= 0:
            raise DomainError("the semicircle radius c₁ needs a positive body")
    for name in names:
        _real_even(params[name], name)
    if not params["xi"].is_odd():
        raise ParityError("xi must be odd")
    if not params["xi"].is_real(1e-14):
        raise DomainError("xi must have real coefficients")
    return GeodesicPath(PathKind.TYPE_II, CH11_CHART, u_range, dict(params), branch=branch)


# Residuals


def _u_derivatives(fn: Callable[[SuperPoint], object], u: GrassmannNumber):
    pt = PARAM.point(u)
    return derivative(fn, pt, 0), partial_even(fn, pt, 0, order=2)


def geodesic_residual(metric: SuperMetric, path: GeodesicPath, u) -> list[GrassmannNumber]:
    """Ẍ^A + Σ Ẋ^P Ẋ^Q Γ^A_PQ along ``path`` at ``u``."""
    if path.kind is PathKind.NUMERIC:
        raise DomainError("sampled traces carry no derivatives; compare them to a closed form instead")
    if path.chart != metric.chart:
        raise ChartError(f"path lives on {path.chart.name}, metric on {metric.chart.name}")
    u = path._param(u)
    first, second = _u_derivatives(lambda q: path.at(q.even[0]), u)
    accel = geodesic_acceleration(metric, path.at(u), list(first))
    return [s - a for s, a in zip(second, accel)]


def ch11_acceleration(z: GrassmannNumber, theta: GrassmannNumber, dz: GrassmannNumber,
                      dtheta: GrassmannNumber) -> tuple[GrassmannNumber, GrassmannNumber]:
    """Z̈ = −(i/Y)Ż² − (Θ̄/Y)ŻΘ̇ and Θ̈ = −(i/Y)ŻΘ̇."""
    inv_y = invert(y_value(z, theta))
    a_z = -(dz * dz * inv_y * 1j) - conjugate(theta) * inv_y * dz * dtheta
    a_th = -(dz * dtheta * inv_y * 1j)
    return a_z, a_th


def ch11_residual(path: GeodesicPath, u) -> tuple[GrassmannNumber, GrassmannNumber]:
    """Left-hand sides of the complex CH¹|¹ geodesic system along ``path``."""
    u = path._param(u)

    def coords(q: SuperPoint):
        return path.complex_at(q.even[0])

    (dz, dth), (ddz, ddth) = _u_derivatives(coords, u)
    z, theta = path.complex_at(u)
    a_z, a_th = ch11_acceleration(z, theta, dz, dth)
    return ddz - a_z, ddth - a_th


# Numerical integration


State = list[GrassmannNumber]


def _rk4_step(state: State, rhs: Callable[[State], State], h: float) -> State:
    k1 = rhs(state)
    k2 = rhs([s + k * (0.5 * h) for s, k in zip(state, k1)])
    k3 = rhs([s + k * (0.5 * h) for s, k in zip(state, k2)])
    k4 = rhs([s + k * h for s, k in zip(state, k3)])
    return [s + (a + b * 2 + c * 2 + d) * (h / 6.0) for s, a, b, c, d in zip(state, k1, k2, k3, k4)]


def _integrate(chart: Chart, point: SuperPoint, velocity: Sequence[GrassmannNumber],
               accel: Callable[[SuperPoint, State], State], check: Callable[[SuperPoint], None],
               u_range: tuple[float, float] | None, step: float | None) -> GeodesicPath:
    settings = get_settings()
    step = settings.rk4_step if step is None else step
    if step <= 0:
        raise DomainError(f"integrator step must be positive, got {step}")
    u_a, u_b = u_range if u_range is not None else (0.0, settings.rk4_span)
    span = settings.rk4_span
    u_a, u_b = max(-span, min(span, u_a)), max(-span, min(span, u_b))
    n = chart.dim
    steps = max(1, math.ceil(abs(u_b - u_a) / step - 1e-9))
    h = (u_b - u_a) / steps

    def rhs(state: State) -> State:
        x = chart.point(*state[:n], validate=False)
        return list(state[n:]) + accel(x, state[n:])

    state = list(point.coords) + list(velocity)
    trace = [TracePoint(u_a, point, tuple(velocity))]
    truncated = False
    for k in range(1, steps + 1):
        state = _rk4_step(state, rhs, h)
        x = chart.point(*state[:n], validate=False)
        try:
            check(x)
        except DomainError:
            logger.debug("integrator left %s at u = %.6g", chart.name, u_a + k * h)
            truncated = True
            break
        trace.append(TracePoint(u_a + k * h, x, tuple(state[n:])))
    return GeodesicPath(PathKind.NUMERIC, chart, (u_a, trace[-1].u), trace=trace, truncated=truncated)


def integrate_geodesic(metric: SuperMetric, point: SuperPoint, velocity: Sequence[GrassmannNumber],
                       u_range: tuple[float, float] | None = None, step: float | None = None) -> GeodesicPath:
    """Classical RK4 on the Grassmann-valued system (X, V)' = (V, −Σ VVΓ)."""
    if point.chart != metric.chart:
        raise ChartError(f"initial point on {point.chart.name}, metric on {metric.chart.name}")
    point.validate()
    return _integrate(metric.chart, point, velocity,
                      lambda x, v: geodesic_acceleration(metric, x, v),
                      lambda x: x.validate(), u_range, step)


def _upper_half(point: SuperPoint) -> None:
    if point.even[0].imag().body.real <= 0:
        raise DomainError(f"ε₀(Im Z) must stay positive, got {point.even[0].body}")


def integrate_ch11(point: SuperPoint, velocity: Sequence[GrassmannNumber],
                   u_range: tuple[float, float] | None = None, step: float | None = None) -> GeodesicPath:
    """RK4 on the complex system for (Z, Θ); Z̄ and Θ̄ follow by conjugation."""
    if point.chart != C11:
        raise ChartError(f"the complex system runs on c11, got {point.chart.name}")
    _upper_half(point)

    def accel(x: SuperPoint, v: State) -> State:
        return list(ch11_acceleration(x.even[0], x.odd[0], v[0], v[1]))

    return _integrate(C11, point, velocity, accel, _upper_half, u_range, step)


def trace_length(path: GeodesicPath, metric: SuperMetric) -> GrassmannNumber:
    """∫ √(Σ g_AB v^A v^B) du over a sampled trace, Simpson coefficientwise."""
    if path.kind is not PathKind.NUMERIC or len(path.trace) < 3:
        raise DomainError("trace_length needs a sampled trace with at least three nodes")
    speeds = []
    for node in path.trace:
        g = metric.matrix(node.point)
        v = node.velocity
        q = node.point.algebra.zero()
        for a, row in enumerate(g):
            for b, g_ab in enumerate(row):
                if g_ab.terms and v[a].terms and v[b].terms:
                    q = q + g_ab * v[a] * v[b]
        speeds.append(apply_analytic("sqrt", q.real()))
    us = np.array([node.u for node in path.trace])
    masks = sorted({m for s in speeds for m in s.terms})
    algebra = path.algebra
    terms = {}
    for m in masks:
        values = np.array([s.coefficient(m).real for s in speeds])
        terms[m] = float(simpson(values, x=us))
    return GrassmannNumber(algebra, terms)


# Joining points


def _artanh(v: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("log", (1 + v) * invert(1 - v)) * 0.5


def _type_i(z: GrassmannNumber, theta_from: GrassmannNumber, theta_to: GrassmannNumber) -> GeodesicPath:
    return closed_geodesic(PathKind.TYPE_I, (0.0, 1.0), c=z, gamma=theta_to - theta_from, zeta=theta_from)


def join_points(p1: SuperPoint, p2: SuperPoint, xi: GrassmannNumber | None = None,
                tol: float = 1e-12) -> list[GeodesicPath]:
    """Type-I to (Z₁, ξZ₁), Type-II to (Z₂, ξZ₂), Type-I to P₂.

    Points lie on the c11 chart; a point with ε₀(Im Z) = 0 is a boundary
    point, reached at u = ±∞ and joined without its Type-I segment.
    """
    for p in (p1, p2):
        if p.chart != C11:
            raise ChartError(f"join_points works on c11 points, got {p.chart.name}")
    z1, th1 = p1.even[0], p1.odd[0]
    z2, th2 = p2.even[0], p2.odd[0]
    xi = z1.algebra.zero() if xi is None else xi
    if residual(z1, z2) <= tol:
        return [_type_i(z1, th1, th2)]
    if abs(z1.body - z2.body) <= tol:
        raise DomainError("the points share a body; no Type-II geodesic joins their even parts")
    x1, y1 = z1.real(), z1.imag()
    x2, y2 = z2.real(), z2.imag()
    on_boundary = [abs(y.body) <= tol for y in (y1, y2)]
    if any(y.body.real < -tol for y in (y1, y2)):
        raise DomainError("points must lie in the closed upper half plane")

    if abs(x1.body - x2.body) <= tol:
        if residual(x1, x2) > tol:
            raise DomainError("bodies on a vertical line whose real parts differ in the soul")
        ends = [-math.inf if b else apply_analytic("log", y) for y, b in zip((y1, y2), on_boundary)]
        extra = {"c3": x1}
        branch_name = Branch.VERTICAL
    else:
        c2 = (x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2) * invert((x1 - x2) * 2)
        c1 = apply_analytic("sqrt", (x1 - c2) * (x1 - c2) + y1 * y1)
        ends = []
        for x, b in zip((x1, x2), on_boundary):
            v = (x - c2) * invert(c1)
            ends.append(math.copysign(math.inf, v.body.real) if b else _artanh(v))
        extra = {"c1": c1, "c2": c2}
        branch_name = Branch.SEMICIRCLE

    def body(s):
        return s if isinstance(s, float) else s.body.real

    omega = 1.0 if body(ends[1]) > body(ends[0]) else -1.0
    u_ends = [s * omega for s in ends]
    algebra = z1.algebra
    params = dict(extra, omega=algebra.scalar(omega), u0=algebra.zero(), xi=xi)
    main = closed_geodesic(PathKind.TYPE_II, (body(u_ends[0]), body(u_ends[1])), **params)
    for key, value in zip(("u_start", "u_end"), u_ends):
        if isinstance(value, GrassmannNumber):
            main.params[key] = value
    logger.debug("joined %s and %s by a %s Type-II segment", z1.body, z2.body, branch_name.value)

    segments = []
    if not on_boundary[0]:
        segments.append(_type_i(z1, th1, xi * z1))
    segments.append(main)
    if not on_boundary[1]:
        segments.append(_type_i(z2, xi * z2, th2))
    return segments


def join_mismatch(segments: Sequence[GeodesicPath]) -> float:
    """Largest coefficient gap between the end of one segment and the start of the next."""
    worst = 0.0
    for left, right in zip(segments, segments[1:]):
        (za, ta), (zb, tb) = left.end(), right.start()
        worst = max(worst, residual(za, zb), residual(ta, tb))
    return worst


def path_length(path: GeodesicPath) -> GrassmannNumber:
    """ω(u₂ − u₁) along a Type-II segment."""
    if path.kind is not PathKind.TYPE_II:
        raise DomainError("closed-form length is defined on Type-II segments")
    start = path.params.get("u_start")
    end = path.params.get("u_end")
    if start is None or end is None:
        start, end = path._param(path.u_range[0]), path._param(path.u_range[1])
    return (end - start) * path.params["omega"]


# Distances


class DistanceKind(str, Enum):
    BOSONIC = "bosonic-d"
    D_Q = "d-q"
    SUPER = "super-d"


@dataclass(frozen=True)
class DistanceValue:
    value: GrassmannNumber
    kind: DistanceKind
    cosh: GrassmannNumber

    @property
    def body(self) -> float:
        return self.value.body.real


def _arccosh(excess: GrassmannNumber, kind: DistanceKind, tol: float = 1e-12) -> DistanceValue:
    """d from cosh d − 1, kept apart from the 1 so short distances stay accurate."""
    if excess.imag().max_abs() > 1e-9:
        raise DomainError(f"cosh of a distance must be real, got 1 + {excess}")
    x = excess.real()
    b = x.body.real
    if b < -tol:
        raise DomainError(f"cosh d has body {1 + b} < 1")
    if b <= 1e-24:
        if kind is DistanceKind.SUPER and x.soul.max_abs() > tol:
            raise DomainError("coincident bodies with distinct souls sit on the arccosh branch point")
        return DistanceValue(x.algebra.zero(), kind, 1 + x)
    root = apply_analytic("sqrt", x * (x + 2))
    return DistanceValue(apply_analytic("log", 1 + x + root), kind, 1 + x)


def _heights_and_gap(p1: SuperPoint, p2: SuperPoint):
    if p1.chart != p2.chart:
        raise ChartError(f"points on {p1.chart.name} and {p2.chart.name}")
    if p1.chart == C11:
        z1, z2 = p1.even[0], p2.even[0]
        return z1.imag(), z2.imag(), modulus_squared(z1 - z2).real()
    if p1.chart == H32_CHART:
        gap = sum(((a - b) * (a - b) for a, b in zip(p1.even, p2.even)), p1.algebra.zero())
        return p1.even[2], p2.even[2], gap
    raise ChartError(f"distances are defined on c11 and h32, got {p1.chart.name}")


def bosonic_distance(p1: SuperPoint, p2: SuperPoint, kind: DistanceKind = DistanceKind.BOSONIC) -> DistanceValue:
    """cosh d = 1 + |Z₁ − Z₂|²/(2 Im Z₁ Im Z₂); on 𝓗³|² the gap includes the heights."""
    h1, h2, gap = _heights_and_gap(p1, p2)
    if h1.body.real <= 0 or h2.body.real <= 0:
        raise DomainError("both points need a positive height body")
    return _arccosh(gap * invert(h1 * h2 * 2), kind)


def _uy_terms(z1: GrassmannNumber, th1: GrassmannNumber, z2: GrassmannNumber, th2: GrassmannNumber,
              y1: GrassmannNumber, y2: GrassmannNumber) -> tuple[GrassmannNumber, GrassmannNumber]:
    w = z1 - z2 - th1 * th2
    inv1, inv2 = invert(y1), invert(y2)
    big_r = modulus_squared(w) * inv1 * inv2
    tb1, tb2 = conjugate(th1), conjugate(th2)
    plus1, plus2 = th1 + tb1 * 1j, th2 + tb2 * 1j
    minus1, minus2 = th1 - tb1 * 1j, th2 - tb2 * 1j
    small_r = (
        (th1 * tb1 * 2 + minus2 * plus1 * 1j) * inv1 * 0.25
        + (th2 * tb2 * 2 + minus1 * plus2 * 1j) * inv2 * 0.25
        + plus2 * plus1 * w.real() * inv1 * inv2 * 0.25
    )
    return big_r, small_r


def super_distance(p1: SuperPoint, p2: SuperPoint) -> DistanceValue:
    """cosh 𝐝 = 1 + ½R − 2r with Y_i = Im Z_i + ½Θ_iΘ̄_i."""
    for p in (p1, p2):
        if p.chart != C11:
            raise ChartError(f"the super distance works on c11 points, got {p.chart.name}")
    z1, th1 = p1.even[0], p1.odd[0]
    z2, th2 = p2.even[0], p2.odd[0]
    y1, y2 = y_value(z1, th1), y_value(z2, th2)
    if y1.body.real <= 0 or y2.body.real <= 0:
        raise DomainError("the super distance needs ε₀(Y) > 0 at both points")
    big_r, small_r = _uy_terms(z1, th1, z2, th2, y1, y2)
    return _arccosh(big_r * 0.5 - small_r * 2, DistanceKind.SUPER)


def signed_vertical_distance(p1: SuperPoint, p2: SuperPoint,
                             kind: DistanceKind = DistanceKind.SUPER) -> GrassmannNumber:
    """Distance with the sign of log(Im Z₂/Im Z₁) on the body."""
    d = super_distance(p1, p2) if kind is DistanceKind.SUPER else bosonic_distance(p1, p2)
    h1, h2 = p1.even[0].imag().body.real, p2.even[0].imag().body.real
    return d.value if h2 >= h1 else -d.value


def base_point(algebra: Algebra) -> SuperPoint:
    """P₀ = (i; 0)."""
    return C11.point(algebra.scalar(1j), algebra.zero())


def hat_point(rho: GrassmannNumber, theta: GrassmannNumber) -> SuperPoint:
    """P̂ = (ΘΘ̄/4 + i|ρ|; (1+i)Θ/2)."""
    r = modulus(rho)
    return C11.point(theta * conjugate(theta) * 0.25 + r * 1j, theta * (0.5 + 0.5j))


def hat_distance_closed_form(rho: GrassmannNumber, theta: GrassmannNumber) -> GrassmannNumber:
    """log|ρ| + (1+|ρ|)/(4|ρ|(1−|ρ|)) ΘΘ̄, the signed distance from P₀ to P̂."""
    r = modulus(rho)
    s = theta * conjugate(theta)
    return apply_analytic("log", r) + (1 + r) * invert(r * (1 - r) * 4) * s


def shifted_base_point(rho: GrassmannNumber, theta: GrassmannNumber, variant: str = "corrected") -> SuperPoint:
    """P̃₀ = (i(1 + bΘΘ̄); 0) with 𝐝(P̃₀, P̂) free of ΘΘ̄ for the corrected b.

    corrected: b = (1+|ρ|)/(4|ρ|(1−|ρ|)); printed: b = −(|ρ|²+1)/(4|ρ|(|ρ|²−1)).
    """
    r = modulus(rho)
    s = theta * conjugate(theta)
    if variant == "corrected":
        b = (1 + r) * invert(r * (1 - r) * 4)
    elif variant == "printed":
        b = -(r * r + 1) * invert(r * (r * r - 1) * 4)
    else:
        raise DomainError(f"unknown shift variant {variant!r}")
    return C11.point((1 + b * s) * 1j, rho.algebra.zero())


def torus_pair_cosh(q_abs: GrassmannNumber, delta: GrassmannNumber) -> GrassmannNumber:
    """cosh 𝐝(P₀, Q₀) = 1 + ((1−|q|)² − 2δδ̄)/(2(|q| + δδ̄/2)) for Q₀ = (i|q|; δ)."""
    s = delta * conjugate(delta)
    return 1 + ((1 - q_abs) * (1 - q_abs) - s * 2) * invert((q_abs + s * 0.5) * 2)


# Foot point and the tilde construction


@dataclass
class FootPoint:
    point: SuperPoint
    u: GrassmannNumber
    distance: DistanceValue


def _boundary(point: SuperPoint, tol: float = 1e-12) -> None:
    if point.chart != H32_CHART:
        raise ChartError(f"foot points live on h32, got {point.chart.name}")
    if abs(point.even[2].body) > tol:
        raise DomainError(f"{point.body()} is not on the boundary t = 0")


def foot_point(p1: SuperPoint, p2: SuperPoint, q: SuperPoint, xi: GrassmannNumber | None = None,
               newton_steps: int = 12) -> FootPoint:
    """The point of {P₁, P₂}_ξ closest to Q on the body, and d_Q = d(Q, P^Q₁₂).

    The geodesic is the semicircle over the segment P₁P₂ in the vertical plane
    through both; its odd coordinates are ξ times the horizontal offset from P₁.
    """
    _boundary(p1)
    _boundary(p2)
    if q.chart != H32_CHART or q.even[2].body.real <= 0:
        raise DomainError("Q must be a bulk point of h32")
    algebra = q.algebra
    xi = algebra.zero() if xi is None else xi
    dx, dy = p2.even[0] - p1.even[0], p2.even[1] - p1.even[1]
    length_sq = dx * dx + dy * dy
    if abs(length_sq.body) <= 1e-24:
        raise DomainError("P₁ and P₂ share a body")
    length = apply_analytic("sqrt", length_sq)
    inv_len = invert(length)
    ex, ey = dx * inv_len, dy * inv_len
    half = length * 0.5

    def on_geodesic(u: GrassmannNumber) -> SuperPoint:
        along = half * apply_analytic("tanh", u) + half
        height = half * apply_analytic("sech", u)
        return H32_CHART.point(p1.even[0] + along * ex, p1.even[1] + along * ey, height,
                               xi * along * ex, xi * along * ey, validate=False)

    def cosh_to(u: GrassmannNumber) -> GrassmannNumber:
        h1, h2, gap = _heights_and_gap(q, on_geodesic(u))
        return 1 + gap * invert(h1 * h2 * 2)

    def body_objective(u: float) -> float:
        return cosh_to(algebra.scalar(u)).body.real

    span = get_settings().rk4_span
    res = minimize_scalar(body_objective, bracket=(-1.0, 1.0), method="golden", tol=1e-12)
    u = algebra.scalar(max(-span, min(span, float(res.x))))
    for _ in range(newton_steps):
        d1, d2 = _u_derivatives(lambda pt: cosh_to(pt.even[0]), u)
        if abs(d2.body) <= 1e-300:
            break
        correction = (d1 * invert(d2)).real()
        u = u - correction
        if correction.max_abs() <= 1e-16:
            break
    foot = on_geodesic(u)
    logger.debug("foot point at u = %s", u.body)
    return FootPoint(foot, u, bosonic_distance(q, foot, DistanceKind.D_Q))


def d_q_closed_form(z: GrassmannNumber) -> GrassmannNumber:
    """cosh d_Q = √(1 + 1/|Z|²) for P₁ = 0, P₂ = Z and Q = (0, 0, 1)."""
    r2 = modulus_squared(z).real()
    return apply_analytic("sqrt", 1 + invert(r2))


def printed_foot(z: GrassmannNumber, xi: GrassmannNumber) -> SuperPoint:
    """(x, y, √(|Z|²(1+|Z|²)); xξ, yξ)/(2 + |Z|²)."""
    x, y = z.real(), z.imag()
    r2 = x * x + y * y
    inv = invert(r2 + 2)
    t = apply_analytic("sqrt", r2 * (r2 + 1)) * inv
    return H32_CHART.point(x * inv, y * inv, t, x * xi * inv, y * xi * inv, validate=False)


@dataclass
class TildeConstruction:
    q_tilde: SuperPoint
    p_tilde: SuperPoint
    path: GeodesicPath
    cosh_super: GrassmannNumber
    cosh_printed: GrassmannNumber
    cosh_expected: GrassmannNumber
    display_gap: float


def modified_geodesic(z: GrassmannNumber, theta: GrassmannNumber) -> GeodesicPath:
    """Z(σ) = (|Z|/2 − iΘΘ̄e^σ/(4 cosh σ))(tanh σ + i sech σ) + |Z|/2, Θ(σ) = Θ(1 + tanh σ + i sech σ)/2."""
    r = modulus(z)
    s = theta * conjugate(theta)

    def at(sigma: GrassmannNumber) -> SuperPoint:
        w = apply_analytic("tanh", sigma) + apply_analytic("sech", sigma) * 1j
        ratio = apply_analytic("exp", sigma) * invert(apply_analytic("cosh", sigma))
        zz = (r * 0.5 - s * ratio * 0.25j) * w + r * 0.5
        return C11.point(zz, theta * (1 + w) * 0.5)

    return GeodesicPath(PathKind.EXPLICIT, C11, (-math.inf, math.inf), {"r": r, "s": s}, fn=at)


def tilde_construction(z: GrassmannNumber, theta: GrassmannNumber) -> TildeConstruction:
    """Q̃ and P̃₁₂ for P₁ = (0; 0), P₂ = (Z; Θ), with cosh 𝐝(Q̃, P̃₁₂) three ways.

    ``cosh_super`` uses the super distance as defined, ``cosh_printed`` the
    displayed evaluation (which keeps only the body of Y at Q̃) and
    ``cosh_expected`` the closed form √(1 + 1/|Z|² + ΘΘ̄/|Z|²).
    """
    if abs(z.body) == 0:
        raise DomainError("the tilde construction needs ε₀(|Z|) > 0")
    algebra = z.algebra
    r = modulus(z)
    s = theta * conjugate(theta)
    r2 = r * r
    d = r2 + 2
    inv_d = invert(d)
    c = apply_analytic("sqrt", r2 + 1)
    a = (r * 2 + c) * invert(r * (d - r * c) * 2)
    q_tilde = C11.point((1 + a * s) * 1j, algebra.zero())
    p_tilde = C11.point(
        r * inv_d + c * inv_d * inv_d * s + (r * c * inv_d + r2 * inv_d * inv_d * s * 0.5) * 1j,
        theta * 0.5 * (1 - r2 * inv_d + c * inv_d * 2j),
    )

    path = modified_geodesic(z, theta)
    sigma = _artanh(-(r2 * inv_d)).body.real
    z_disp, th_disp = path.complex_at(sigma)
    gap = max(residual(z_disp, p_tilde.even[0]), residual(th_disp, p_tilde.odd[0]))

    cosh_super = super_distance(q_tilde, p_tilde).cosh
    z1, z2 = q_tilde.even[0], p_tilde.even[0]
    th1, th2 = q_tilde.odd[0], p_tilde.odd[0]
    y1 = algebra.scalar(y_value(z1, th1).body)
    big_r, small_r = _uy_terms(z1, th1, z2, th2, y1, y_value(z2, th2))
    cosh_printed = (1 + big_r * 0.5 - small_r * 2).real()
    expected = apply_analytic("sqrt", 1 + (1 + s) * invert(r2))
    return TildeConstruction(q_tilde, p_tilde, path, cosh_super, cosh_printed, expected, gap)
