"""Verification suites.

Checks register themselves with the :func:`check` decorator, one suite at a
time, and :func:`run_suite` evaluates them into a :class:`SuiteReport`.
Every check draws from its own generator, seeded from the suite seed and the
check name, so reports are byte-identical across runs and independent of the
order in which checks run.
"""

import cmath
import logging
import math
import time
import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from supergeo.calculus import derivative, hermitian_pullback, pullback_metric
from supergeo.config import get_settings
from supergeo.dynamics import (
    PARAM,
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
    printed_foot,
    shifted_base_point,
    signed_vertical_distance,
    super_distance,
    tilde_construction,
    torus_pair_cosh,
)
from supergeo.errors import ConfigurationError
from supergeo.geometry import (
    calibrate,
    christoffel,
    classify,
    curvature,
    hermitian_ricci,
    mixed_pairs,
    sdet,
    volume_density,
)
from supergeo.grassmann import (
    GrassmannNumber,
    Parity,
    apply_analytic,
    conjugate,
    default_algebra,
    invert,
    random_element,
    residual,
)
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
    printed_torus_hessian,
    sphere_green,
    sphere_green_expansion,
    super_theta,
    super_theta_expansion,
    super_theta_prime_zero_closed,
    torus_green,
    torus_green_hessian,
)
from supergeo.models import (
    CH11_ABSTRACT,
    CH11_CHART,
    GROUP_CHART,
    H32_CHART,
    SPHERE_CHART,
    TORUS_CHART,
    GroupParams,
    MapKind,
    ModelId,
    ModelKind,
    ch11_y,
    complex_point,
    h32_printed_christoffel,
    h32_printed_ricci,
    h32_printed_scalar,
    h32_printed_volume,
    hyperboloid_embedding,
    killing_metric,
    maurer_cartan,
    model_map,
    model_metric,
    printed_current,
    printed_group_volume,
    renormalized_volume,
    upper_half_chart,
)
from supergeo.schemas import CheckResult, CheckStatus, SuiteReport
from supergeo.supermatrix import (
    SuperMatrix,
    base_vector,
    berezinian,
    coset_lift,
    flat_form,
    is_orthosymplectic,
    osp_structure,
)
from supergeo.transforms import (
    C11,
    dilation,
    inversion,
    is_superconformal,
    mobius_map,
    mobius_point,
    poincare_apply,
    random_real_element,
    sphere_transition,
    torus_s_abstract,
    translation,
    y_covariance,
)

logger = logging.getLogger(__name__)

ALL = "all"
SUITE_NAMES = (
    "algebra", "calculus", "supermatrix", "curvature", "invariance", "geodesics",
    "distances", "green-sphere", "green-torus", "group", "renorm-volume",
)

GENS = (0, 1, 2, 3)
PAIR = (0, 1)
SOUL = (2, 3)


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[[np.random.Generator], float | tuple[float, str]]
    tolerance: str | float
    report_only: bool = False
    expected: str | None = None


REGISTRY: dict[str, list[Check]] = {name: [] for name in SUITE_NAMES}


def check(suite: str, name: str, tolerance: str | float = "exact_tol", report_only: bool = False,
          expected: str | None = None):
    """Register a check; ``tolerance`` is a literal or the name of a settings field."""

    def decorator(fn):
        REGISTRY[suite].append(Check(name, fn, tolerance, report_only, expected))
        return fn

    return decorator


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),)))


def _tolerance(spec: str | float) -> float:
    if isinstance(spec, str):
        return float(getattr(get_settings(), spec))
    return float(spec)


def run_check(item: Check, seed: int, tolerance: float, label: str | None = None) -> CheckResult:
    """Evaluate one check; an exception is a failure, never a discrepancy."""
    label = label or item.name
    try:
        out = item.fn(check_rng(seed, item.name))
    except Exception as exc:
        logger.warning("check %s raised %s: %s", label, type(exc).__name__, exc)
        return CheckResult(name=label, status=CheckStatus.FAIL, max_residual=None, tolerance=tolerance,
                           notes=f"{type(exc).__name__}: {exc}", expected=item.expected)
    value, notes = out if isinstance(out, tuple) else (out, "")
    result = CheckResult.evaluate(label, value, tolerance, item.report_only, notes, item.expected)
    logger.debug("check %s: %s (%.3g < %.3g)", label, result.status.value, value, tolerance)
    return result


def run_suite(name: str, seed: int | None = None, overrides: dict[str, float] | None = None) -> SuiteReport:
    """Run one suite, or every suite in order for ``all``."""
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    overrides = dict(overrides or {})
    if name == ALL:
        selected = list(SUITE_NAMES)
    elif name in REGISTRY:
        selected = [name]
    else:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {', '.join((*SUITE_NAMES, ALL))}")

    known = set()
    for suite in selected:
        for item in REGISTRY[suite]:
            known.update({item.name, f"{suite}/{item.name}"})
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigurationError(f"no such check for --tol: {', '.join(unknown)}")

    started = time.perf_counter()
    results = []
    for suite in selected:
        logger.info("running suite %s (seed %d)", suite, seed)
        for item in REGISTRY[suite]:
            label = f"{suite}/{item.name}" if name == ALL else item.name
            tol = overrides.get(label, overrides.get(item.name, _tolerance(item.tolerance)))
            results.append(run_check(item, seed, tol, label))
    report = SuiteReport(suite=name, seed=seed, checks=results,
                         wall_time=time.perf_counter() - started if settings.record_timing else None)
    logger.info("suite %s: %d checks, %d failed", name, len(results), len(report.failed))
    return report


# Random data


def _even(rng, body: complex, gens=PAIR, scale: float = 0.2, complex_coeffs: bool = False) -> GrassmannNumber:
    return random_element(default_algebra(), rng, Parity.EVEN, gens, complex_coeffs, body, scale)


def _odd(rng, gens=PAIR, scale: float = 0.3, complex_coeffs: bool = False) -> GrassmannNumber:
    return random_element(default_algebra(), rng, Parity.ODD, gens, complex_coeffs, None, scale)


def _theta(rng, gens=PAIR) -> GrassmannNumber:
    """iθ₁ + θ₂ with real odd θ₁, θ₂."""
    return _odd(rng, gens) * 1j + _odd(rng, gens)


def _upper_z(rng, gens=PAIR) -> GrassmannNumber:
    """x + iy with real x, y and ε₀(y) > 0."""
    return _even(rng, rng.uniform(-1.0, 1.0), gens) + _even(rng, rng.uniform(0.5, 2.0), gens) * 1j


def _c11_point(rng, gens=PAIR):
    return C11.point(_upper_z(rng, gens), _theta(rng, gens))


def _ch11_point(rng, gens=PAIR):
    return CH11_CHART.point(_even(rng, rng.uniform(0.5, 2.0), gens), _even(rng, rng.uniform(-1.0, 1.0), gens),
                            _odd(rng, gens), _odd(rng, gens))


def _h32_point(rng):
    return H32_CHART.point(_even(rng, rng.uniform(-1.0, 1.0)), _even(rng, rng.uniform(-1.0, 1.0)),
                           _even(rng, rng.uniform(0.5, 2.0)), _odd(rng), _odd(rng))


def _body_z(rng, r_range=(0.3, 2.0)) -> GrassmannNumber:
    return default_algebra().scalar(cmath.rect(rng.uniform(*r_range), rng.uniform(0.0, 2 * math.pi)))


def _tau(rng, im_range=(0.6, 1.5)) -> GrassmannNumber:
    return default_algebra().scalar(complex(rng.uniform(-0.5, 0.5), rng.uniform(*im_range)))


def _torus_z(rng, tau: GrassmannNumber) -> GrassmannNumber:
    """Body point well inside the fundamental cell, off the lattice."""
    t = tau.body.imag
    return default_algebra().scalar(complex(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.45) * t))


def _matrix_gap(lhs, rhs) -> float:
    return max(residual(x, y) for row_l, row_r in zip(lhs, rhs) for x, y in zip(row_l, row_r))


def _random_supermatrix(rng, p: int = 2, q: int = 2) -> SuperMatrix:
    n = p + q
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if (i < p) == (j < p):
                row.append(_even(rng, 2.0 if i == j else rng.uniform(-0.5, 0.5), GENS, scale=0.3))
            else:
                row.append(_odd(rng, GENS))
        rows.append(row)
    return SuperMatrix(rows, p)


# algebra


@check("algebra", "associativity")
def _associativity(rng):
    worst = 0.0
    for _ in range(20):
        a, b, c = (random_element(default_algebra(), rng, Parity.MIXED, GENS, True) for _ in range(3))
        worst = max(worst, residual((a * b) * c, a * (b * c)))
    return worst


@check("algebra", "supercommutativity")
def _supercommutativity(rng):
    worst = 0.0
    for _ in range(20):
        x, y = _even(rng, rng.uniform(-1, 1), GENS, complex_coeffs=True), _even(rng, 0.0, GENS)
        s, t = _odd(rng, GENS, complex_coeffs=True), _odd(rng, GENS)
        worst = max(worst, residual(x * y, y * x), residual(x * s, s * x), residual(s * t, -(t * s)),
                    residual(s * s, 0.0))
    return worst


@check("algebra", "inverse")
def _inverse(rng):
    worst = 0.0
    for _ in range(20):
        a = _even(rng, complex(rng.uniform(0.5, 2.0), rng.uniform(-1, 1)), GENS, complex_coeffs=True)
        worst = max(worst, residual(a * invert(a), 1.0), residual(invert(a) * a, 1.0))
    return worst


@check("algebra", "exp-log")
def _exp_log(rng):
    worst = 0.0
    for _ in range(20):
        a = _even(rng, rng.uniform(0.5, 2.0), GENS)
        x = _even(rng, rng.uniform(-1, 1), GENS)
        worst = max(worst, residual(apply_analytic("exp", apply_analytic("log", a)), a),
                    residual(apply_analytic("log", apply_analytic("exp", x)), x))
    return worst


@check("algebra", "sqrt")
def _sqrt(rng):
    worst = 0.0
    for _ in range(20):
        a = _even(rng, rng.uniform(0.2, 3.0), GENS)
        root = apply_analytic("sqrt", a)
        worst = max(worst, residual(root * root, a))
    return worst


@check("algebra", "hyperbolic-identity")
def _hyperbolic(rng):
    worst = 0.0
    for _ in range(20):
        x = _even(rng, rng.uniform(-2, 2), GENS)
        ch, sh = apply_analytic("cosh", x), apply_analytic("sinh", x)
        worst = max(worst, residual(ch * ch - sh * sh, 1.0))
    return worst


@check("algebra", "conjugation")
def _conjugation(rng):
    """Involution, anti-automorphism and the conventions for Θ = iθ₁ + θ₂."""
    alg = default_algebra()
    worst = 0.0
    for _ in range(20):
        a = random_element(alg, rng, Parity.MIXED, GENS, True)
        b = random_element(alg, rng, Parity.MIXED, GENS, True)
        worst = max(worst, residual(conjugate(conjugate(a)), a),
                    residual(conjugate(a * b), conjugate(b) * conjugate(a)))
        xi = _odd(rng, GENS)
        worst = max(worst, residual(xi * conjugate(xi), 0.0))
    t1, t2 = alg.theta(1), alg.theta(2)
    big = t1 * 1j + t2
    worst = max(worst, residual(conjugate(big), t1 + t2 * 1j), residual(big * conjugate(big), t1 * t2 * -2))
    return worst


# calculus


@check("calculus", "even-derivatives")
def _even_derivatives(rng):
    worst = 0.0
    for _ in range(10):
        x = _even(rng, rng.uniform(-1, 1))
        pt = PARAM.point(x)
        f = lambda q: q.even[0] ** 3 * apply_analytic("exp", q.even[0])  # noqa: E731
        ex = apply_analytic("exp", x)
        first = (x * x * 3 + x ** 3) * ex
        second = (x * 6 + x * x * 6 + x ** 3) * ex
        worst = max(worst, residual(derivative(f, pt, 0), first),
                    residual(derivative(lambda q: derivative(f, q, 0), pt, 0), second))
    return worst


@check("calculus", "odd-derivatives")
def _odd_derivatives(rng):
    worst = 0.0
    for _ in range(10):
        xi = _odd(rng, SOUL)
        pt = C11.point(_upper_z(rng), _theta(rng))
        left = derivative(lambda q: q.odd[0] * xi, pt, 1)
        right = derivative(lambda q: xi * q.odd[0], pt, 1)
        worst = max(worst, residual(left, xi), residual(right, -xi))
        # ∂Θ∂Θ = 0 on any function
        f = lambda q: q.even[0] * q.odd[0] * xi  # noqa: E731
        worst = max(worst, residual(derivative(lambda q: derivative(f, q, 1), pt, 1), 0.0))
    return worst


@check("calculus", "alpha-pullback", tolerance="table_tol")
def _alpha_pullback(rng):
    """α pulls the semisphere metric back to the hyperboloid metric along the hyperboloid."""
    p = 2
    emb = hyperboloid_embedding(p)
    alpha = model_map(MapKind.ALPHA, p)
    hyper = model_metric(ModelId(ModelKind.HYPERBOLOID, p))
    semi = model_metric(ModelId(ModelKind.SEMISPHERE, p))
    worst = 0.0
    for _ in range(5):
        pt = emb.source.point(*(_even(rng, rng.uniform(-1, 1)) for _ in range(p)), _odd(rng), _odd(rng))
        lhs = pullback_metric(alpha.compose(emb), semi, pt)
        rhs = pullback_metric(emb, hyper, pt)
        worst = max(worst, _matrix_gap(lhs, rhs))
    return worst


@check("calculus", "beta-pullback", tolerance="table_tol")
def _beta_pullback(rng):
    """β⁻¹ pulls the semisphere metric back to the upper-half metric."""
    p = 2
    beta_inv = model_map(MapKind.BETA_INVERSE, p)
    semi = model_metric(ModelId(ModelKind.SEMISPHERE, p))
    upper = model_metric(ModelId(ModelKind.UPPER_HALF, p))
    chart = upper_half_chart(p)
    worst = 0.0
    for _ in range(5):
        pt = chart.point(_even(rng, rng.uniform(0.5, 2.0)), _even(rng, rng.uniform(-1, 1)), _odd(rng), _odd(rng))
        worst = max(worst, _matrix_gap(pullback_metric(beta_inv, semi, pt), upper.matrix(pt)))
    return worst


# supermatrix


@check("supermatrix", "berezinian-multiplicative", tolerance="table_tol")
def _ber_mult(rng):
    worst = 0.0
    for _ in range(10):
        x, y = _random_supermatrix(rng), _random_supermatrix(rng)
        worst = max(worst, residual(berezinian(x @ y), berezinian(x) * berezinian(y)),
                    residual(berezinian(x.inverse()) * berezinian(x), 1.0))
    return worst


@check("supermatrix", "coset-lift")
def _coset_lift(rng):
    """The lift is orthosymplectic and sends the base point H₀ to H."""
    alg = default_algebra()
    worst = 0.0
    for p in (2, 3):
        g = flat_form(alg, p)
        for _ in range(20):
            xs = [_even(rng, rng.uniform(-1, 1), GENS) for _ in range(p)]
            t1, t2 = _odd(rng, GENS), _odd(rng, GENS)
            norm = t1 * t2 + 1
            for x in xs:
                norm = norm + x * x
            h = [apply_analytic("sqrt", norm), *xs, t1, t2]
            lift = coset_lift(h, "corrected")
            _, res = is_orthosymplectic(lift, g)
            image = lift @ base_vector(alg, p)
            worst = max(worst, res, *(residual(image.entries[i][0], h[i]) for i in range(len(h))))
    return worst


@check("supermatrix", "coset-lift-printed", report_only=True,
       expected="the written lift is orthosymplectic")
def _coset_lift_printed(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(5):
        xs = [_even(rng, rng.uniform(-1, 1), GENS) for _ in range(2)]
        t1, t2 = _odd(rng, GENS), _odd(rng, GENS)
        h = [apply_analytic("sqrt", t1 * t2 + 1 + xs[0] * xs[0] + xs[1] * xs[1]), *xs, t1, t2]
        _, res = is_orthosymplectic(coset_lift(h, "printed"), flat_form(alg, 2))
        worst = max(worst, res)
    return worst


@check("supermatrix", "ch11-sdet", tolerance="table_tol")
def _ch11_sdet(rng):
    metric = model_metric(ModelId(ModelKind.CH11_HERMITIAN))
    worst = 0.0
    for _ in range(10):
        pt = complex_point(CH11_ABSTRACT, _upper_z(rng), _theta(rng))
        y = ch11_y(pt)
        worst = max(worst, residual(sdet(metric, pt), -invert(y * y * 4)))
    return worst


# curvature


def _h32_samples(rng, n: int = 3):
    return [_h32_point(rng) for _ in range(n)]


@check("curvature", "h32-christoffel", tolerance="table_tol", report_only=True,
       expected="written nonzero Christoffel table")
def _h32_christoffel(rng):
    metric = model_metric(ModelId(ModelKind.H32_BOSONIC))
    worst = 0.0
    for pt in _h32_samples(rng, 5):
        gamma, printed = christoffel(metric, pt), h32_printed_christoffel(pt)
        n = H32_CHART.dim
        for a in range(n):
            for p in range(n):
                for q in range(n):
                    worst = max(worst, residual(gamma[a][p][q], printed.get((a, p, q), 0.0)))
    return worst


@check("curvature", "h32-ricci", tolerance="table_tol", report_only=True, expected="written Ricci table")
def _h32_ricci(rng):
    metric = model_metric(ModelId(ModelKind.H32_BOSONIC))
    best, scores = calibrate(metric, _h32_samples(rng, 2), h32_printed_ricci)
    return scores[best], f"best convention {best.value}"


@check("curvature", "h32-scalar", tolerance="table_tol", report_only=True, expected="2 − 27θ₁θ₂/t")
def _h32_scalar(rng):
    metric = model_metric(ModelId(ModelKind.H32_BOSONIC))
    points = _h32_samples(rng, 2)
    best, _ = calibrate(metric, points, h32_printed_ricci)
    worst = max(residual(curvature(metric, pt, best).scalar, h32_printed_scalar(pt)) for pt in points)
    return worst, f"convention {best.value}"


@check("curvature", "h32-bosonic", tolerance="table_tol", report_only=True,
       expected="bosonic with ε₀(R) = 2")
def _h32_bosonic(rng):
    metric = model_metric(ModelId(ModelKind.H32_BOSONIC))
    points = _h32_samples(rng)
    best, _ = calibrate(metric, points, h32_printed_ricci)
    report = classify(metric, points, convention=best)
    body = report.scalar_body if report.scalar_body is not None else math.inf
    return abs(body - 2.0) + report.scalar_spread, f"ε₀(R) = {body:.9g}, bosonic={report.bosonic}"


@check("curvature", "h32-volume", tolerance="table_tol", report_only=True, expected="written volume form")
def _h32_volume(rng):
    metric = model_metric(ModelId(ModelKind.H32_BOSONIC))
    return max(residual(volume_density(metric, pt), h32_printed_volume(pt)) for pt in _h32_samples(rng))


@check("curvature", "ch11-einstein", tolerance="table_tol")
def _ch11_einstein(rng):
    """The Hermitian Ricci form of CH¹|¹ is −H on every mixed pair."""
    metric = model_metric(ModelId(ModelKind.CH11_HERMITIAN))
    worst = 0.0
    for _ in range(10):
        pt = complex_point(CH11_ABSTRACT, _upper_z(rng), _theta(rng))
        ricci, h = hermitian_ricci(metric, pt), metric.matrix(pt)
        for a, b in mixed_pairs(CH11_ABSTRACT):
            worst = max(worst, residual(ricci[a][b], -h[a][b]))
    return worst


# invariance


def _ch11_invariance(rng, make) -> float:
    metric = model_metric(ModelId(ModelKind.CH11))
    worst = 0.0
    for _ in range(10):
        g = make(rng)
        pt = _ch11_point(rng)
        worst = max(worst, _matrix_gap(pullback_metric(mobius_map(g), metric, pt), metric.matrix(pt)))
    return worst


def _real_affine(rng):
    a = _even(rng, rng.uniform(0.5, 1.5), GENS)
    b = _even(rng, rng.uniform(-1, 1), GENS)
    return translation(b) @ dilation(a)


@check("invariance", "ch11-affine", tolerance="invariance_tol")
def _ch11_affine(rng):
    return _ch11_invariance(rng, _real_affine)


@check("invariance", "ch11-osp", tolerance="invariance_tol")
def _ch11_osp(rng):
    """General real elements, the inversion included."""
    alg = default_algebra()
    worst = _ch11_invariance(rng, lambda r: random_real_element(r, alg, GENS))
    return max(worst, _ch11_invariance(rng, lambda r: inversion(alg)))


@check("invariance", "y-covariance", tolerance=1e-11)
def _y_cov(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(20):
        g = random_real_element(rng, alg, GENS)
        z = _upper_z(rng) + _even(rng, 0.0, SOUL, complex_coeffs=True)
        worst = max(worst, y_covariance(g, z, _theta(rng, GENS)).residual)
    return worst


@check("invariance", "superconformal", tolerance="invariance_tol")
def _superconformal(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(5):
        g = random_real_element(rng, alg, PAIR)
        points = [_c11_point(rng, SOUL) for _ in range(2)]
        worst = max(worst, is_superconformal(lambda pt: mobius_point(g, pt), points).residual)
    return worst


@check("invariance", "poincare-boundary", tolerance="invariance_tol")
def _poincare_boundary(rng):
    """On t = θ₁ = 0 the bulk action restricts to the Möbius action."""
    alg = default_algebra()
    worst = 0.0
    for _ in range(10):
        g = random_real_element(rng, alg, GENS)
        z, th = _upper_z(rng), _theta(rng)
        bulk = poincare_apply(g, z, alg.zero(), alg.zero(), th)
        edge = mobius_point(g, C11.point(z, th))
        worst = max(worst, residual(bulk.z, edge.even[0]), residual(bulk.theta2, edge.odd[0]),
                    residual(bulk.t, 0.0), residual(bulk.theta1, 0.0))
    return worst


@check("invariance", "sphere-transition", tolerance="invariance_tol")
def _sphere_transition(rng):
    metric = model_metric(ModelId(ModelKind.SPHERE11))
    worst = 0.0
    for _ in range(5):
        pt = complex_point(SPHERE_CHART, _body_z(rng, (0.5, 2.0)), _theta(rng))
        worst = max(worst, _matrix_gap(hermitian_pullback(sphere_transition(), metric.matrix, pt),
                                       metric.matrix(pt)))
    return worst


def _torus_s_gap(rng, with_delta: bool) -> float:
    alg = default_algebra()
    worst = 0.0
    for _ in range(3):
        tau = _tau(rng)
        delta = _odd(rng, SOUL, complex_coeffs=True) if with_delta else alg.zero()
        metric = model_metric(ModelId(ModelKind.TORUS, tau=tau, delta=delta))
        pt = complex_point(TORUS_CHART, _torus_z(rng, tau), _theta(rng))
        worst = max(worst, _matrix_gap(hermitian_pullback(torus_s_abstract(tau, delta), metric.matrix, pt),
                                       metric.matrix(pt)))
    return worst


@check("invariance", "torus-s", tolerance="invariance_tol")
def _torus_s(rng):
    return _torus_s_gap(rng, with_delta=False)


@check("invariance", "torus-s-odd-modulus", tolerance="invariance_tol")
def _torus_s_odd(rng):
    return _torus_s_gap(rng, with_delta=True)


# geodesics


def _type_ii(rng, u_range=(-1.0, 1.0)):
    return closed_geodesic(PathKind.TYPE_II, u_range, c1=_even(rng, rng.uniform(0.5, 2.0)),
                           c2=_even(rng, rng.uniform(-1, 1)), omega=_even(rng, rng.uniform(0.5, 1.5)),
                           u0=_even(rng, rng.uniform(-0.5, 0.5)), xi=_odd(rng))


def _type_i(rng, u_range=(-1.0, 1.0)):
    return closed_geodesic(PathKind.TYPE_I, u_range, c=_upper_z(rng), gamma=_theta(rng), zeta=_theta(rng))


def _sample_u(rng, n: int = 10):
    return [float(u) for u in rng.uniform(-1.0, 1.0, n)]


@check("geodesics", "type-ii-equations", tolerance=1e-8)
def _type_ii_residual(rng):
    metric = model_metric(ModelId(ModelKind.CH11))
    worst = 0.0
    for _ in range(2):
        path = _type_ii(rng)
        for u in _sample_u(rng, 50):
            worst = max(worst, *(residual(r, 0.0) for r in geodesic_residual(metric, path, u)))
    return worst


@check("geodesics", "type-i-equations", tolerance=1e-8)
def _type_i_residual(rng):
    metric = model_metric(ModelId(ModelKind.CH11))
    worst = 0.0
    for _ in range(2):
        path = _type_i(rng)
        for u in _sample_u(rng, 50):
            worst = max(worst, *(residual(r, 0.0) for r in geodesic_residual(metric, path, u)))
    return worst


@check("geodesics", "complex-system", tolerance=1e-8)
def _complex_system(rng):
    worst = 0.0
    for make in (_type_i, _type_ii):
        for _ in range(3):
            path = make(rng)
            for u in _sample_u(rng):
                rz, rth = ch11_residual(path, u)
                worst = max(worst, residual(rz, 0.0), residual(rth, 0.0))
    return worst


@check("geodesics", "rk4-closed-form", tolerance="ode_tol")
def _rk4(rng):
    alg = default_algebra()
    path = _type_ii(rng, (0.0, 1.0))
    z0, th0 = path.complex_at(0.0)
    velocity = derivative(lambda q: path.complex_at(q.even[0]), PARAM.point(alg.zero()), 0)
    numeric = integrate_ch11(C11.point(z0, th0), list(velocity), u_range=(0.0, 1.0))
    last = numeric.trace[-1]
    z1, th1 = path.complex_at(last.u)
    return max(residual(last.point.even[0], z1), residual(last.point.odd[0], th1))


@check("geodesics", "join-continuity")
def _join(rng):
    worst = 0.0
    for _ in range(10):
        p1, p2 = _c11_point(rng), _c11_point(rng)
        segments = join_points(p1, p2, _odd(rng))
        z_a, th_a = segments[0].start()
        z_b, th_b = segments[-1].end()
        worst = max(worst, join_mismatch(segments), residual(z_a, p1.even[0]), residual(th_a, p1.odd[0]),
                    residual(z_b, p2.even[0]), residual(th_b, p2.odd[0]))
    return worst


# distances


def _boundary_points(rng):
    alg = default_algebra()
    x, y = _even(rng, rng.uniform(-2, 2)), _even(rng, rng.uniform(-2, 2))
    zero = alg.zero()
    p1 = H32_CHART.point(zero, zero, zero, zero, zero, validate=False)
    p2 = H32_CHART.point(x, y, zero, zero, zero, validate=False)
    q = H32_CHART.point(zero, zero, alg.scalar(1.0), zero, zero)
    return p1, p2, q, x + y * 1j


@check("distances", "d-q-closed-form", tolerance=1e-10)
def _d_q(rng):
    worst = 0.0
    for _ in range(10):
        p1, p2, q, z = _boundary_points(rng)
        worst = max(worst, residual(foot_point(p1, p2, q).distance.cosh, d_q_closed_form(z)))
    return worst


@check("distances", "foot-point", tolerance=1e-10)
def _foot(rng):
    worst = 0.0
    for _ in range(10):
        p1, p2, q, z = _boundary_points(rng)
        xi = _odd(rng, SOUL)
        foot = foot_point(p1, p2, q, xi).point
        printed = printed_foot(z, xi)
        worst = max(worst, *(residual(a, b) for a, b in zip(foot.coords, printed.coords)))
    return worst


@check("distances", "torus-pair", tolerance=1e-10)
def _torus_pair(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(10):
        q = rng.uniform(0.2, 0.8)
        delta = _theta(rng)
        s = delta * conjugate(delta)
        other = C11.point(alg.scalar(1j * q), delta)
        signed = signed_vertical_distance(base_point(alg), other)
        closed = math.log(q) + s * ((1 + q) / (2 * q * (1 - q)))
        cosh = super_distance(base_point(alg), other).cosh
        worst = max(worst, residual(signed, closed), residual(cosh, torus_pair_cosh(alg.scalar(q), delta)))
    return worst


@check("distances", "hat-point", tolerance=1e-10)
def _hat(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(10):
        rho = alg.scalar(cmath.rect(rng.uniform(0.2, 0.8), rng.uniform(0, 2 * math.pi)))
        theta = _theta(rng)
        signed = signed_vertical_distance(base_point(alg), hat_point(rho, theta))
        worst = max(worst, residual(signed, hat_distance_closed_form(rho, theta)))
    return worst


def _shift_soul(rng, variant: str) -> float:
    alg = default_algebra()
    worst = 0.0
    for _ in range(10):
        r = rng.uniform(0.2, 0.8)
        rho = alg.scalar(cmath.rect(r, rng.uniform(0, 2 * math.pi)))
        theta = _theta(rng)
        d = signed_vertical_distance(shifted_base_point(rho, theta, variant), hat_point(rho, theta))
        worst = max(worst, residual(d, math.log(r)))
    return worst


@check("distances", "shifted-base-point", tolerance=1e-10)
def _shift(rng):
    return _shift_soul(rng, "corrected")


@check("distances", "shifted-base-point-printed", tolerance=1e-10, report_only=True,
       expected="the written shift removes the ΘΘ̄ term")
def _shift_printed(rng):
    return _shift_soul(rng, "printed")


@check("distances", "symmetry", tolerance="invariance_tol")
def _symmetry(rng):
    worst = 0.0
    for _ in range(100):
        p1, p2 = _c11_point(rng, GENS), _c11_point(rng, GENS)
        worst = max(worst, residual(super_distance(p1, p2).value, super_distance(p2, p1).value),
                    residual(bosonic_distance(p1, p2).value, bosonic_distance(p2, p1).value))
    return worst


def _distance_invariance(rng, make) -> float:
    worst = 0.0
    for _ in range(100):
        g = make(rng)
        p1, p2 = _c11_point(rng), _c11_point(rng)
        moved = super_distance(mobius_point(g, p1), mobius_point(g, p2))
        worst = max(worst, residual(moved.value, super_distance(p1, p2).value))
    return worst


@check("distances", "affine-invariance", tolerance="invariance_tol")
def _affine_invariance(rng):
    return _distance_invariance(rng, _real_affine)


@check("distances", "osp-invariance", tolerance="invariance_tol")
def _osp_invariance(rng):
    alg = default_algebra()
    return _distance_invariance(rng, lambda r: random_real_element(r, alg, SOUL))


@check("distances", "tilde-construction", tolerance=1e-10, report_only=True,
       expected="cosh 𝐝(Q̃, P̃₁₂) = √(1 + 1/|Z|² + ΘΘ̄/|Z|²)")
def _tilde(rng):
    worst = 0.0
    for _ in range(5):
        result = tilde_construction(_body_z(rng), _theta(rng))
        worst = max(worst, residual(result.cosh_super, result.cosh_expected), result.display_gap)
    return worst


# green-sphere


def _sphere_triple():
    alg = default_algebra()
    return GreenTriple(base=complex_point(SPHERE_CHART, alg.zero(), alg.zero()),
                       metric=model_metric(ModelId(ModelKind.SPHERE11)), green=sphere_green,
                       classical=classical_sphere_green)


def _sphere_samples(rng, n: int = 5):
    return [complex_point(SPHERE_CHART, _body_z(rng, (0.3, 1.5)), _theta(rng)) for _ in range(n)]


@check("green-sphere", "green-triple", tolerance=1e-7)
def _green_triple(rng):
    report = green_triple_check(_sphere_triple(), _sphere_samples(rng))
    worst = max(c.residual if c.passed else max(c.residual, 1.0)
                for c in report.conditions if c.name != "first-order-zero")
    return worst, ", ".join(f"{c.name}={c.passed}" for c in report.conditions)


@check("green-sphere", "first-order-zero", tolerance=1e-3)
def _first_order(rng):
    cond = green_triple_check(_sphere_triple(), _sphere_samples(rng)).condition("first-order-zero")
    return cond.residual if cond.passed else max(cond.residual, 1.0)


@check("green-sphere", "expansion", tolerance="exact_tol")
def _sphere_expansion(rng):
    worst = 0.0
    for _ in range(10):
        pt = complex_point(SPHERE_CHART, _body_z(rng) + _even(rng, 0.0, SOUL, complex_coeffs=True), _theta(rng))
        worst = max(worst, residual(sphere_green(pt), sphere_green_expansion(pt.even[0], pt.odd[0])))
    return worst


def _sphere_identity(rng, kind: IdentityKind) -> float:
    return max(manin_identity(kind, _body_z(rng), _theta(rng)).residual for _ in range(20))


@check("green-sphere", "distance-identity", tolerance=1e-10)
def _sphere_dq(rng):
    return _sphere_identity(rng, IdentityKind.SPHERE_DQ)


@check("green-sphere", "tilde-identity", tolerance=1e-10)
def _sphere_tilde(rng):
    return _sphere_identity(rng, IdentityKind.SPHERE_TILDE)


# green-torus


def _ctx(rng, with_delta: bool = True, im_range=(0.6, 1.5)) -> ThetaContext:
    tau = _tau(rng, im_range)
    return ThetaContext.create(tau, _theta(rng, SOUL) if with_delta else None)


def _torus_point(rng, ctx: ThetaContext, theta: GrassmannNumber | None = None):
    return complex_point(TORUS_CHART, _torus_z(rng, ctx.tau), _theta(rng) if theta is None else theta)


@check("green-torus", "series-product", tolerance=1e-10)
def _series_product(rng):
    worst = 0.0
    for _ in range(10):
        tau = _tau(rng, (0.08, 1.5))
        z = _torus_z(rng, tau) + _even(rng, 0.0, complex_coeffs=True)
        worst = max(worst, residual(jacobi_theta(z, tau, ThetaForm.SERIES), jacobi_theta(z, tau, ThetaForm.PRODUCT)))
    return worst


@check("green-torus", "super-theta-properties", tolerance=1e-9)
def _super_theta_props(rng):
    """Periodicity, parity, quasi-periodicity and the Taylor expansion in Θδ."""
    worst = 0.0
    for _ in range(5):
        ctx = _ctx(rng)
        z, th = _torus_z(rng, ctx.tau), _theta(rng)
        value = super_theta(z, th, ctx)
        q = apply_analytic("exp", ctx.tau * (math.pi * 1j))
        shift = super_theta(z + ctx.tau + th * ctx.delta, th + ctx.delta, ctx)
        factor = -(1 - th * ctx.delta * (math.pi * 1j)) * invert(q) * apply_analytic("exp", z * (-2j * math.pi))
        worst = max(worst, residual(super_theta(z + 1, th, ctx), -value), residual(super_theta(-z, th, ctx), -value),
                    residual(shift, factor * value), residual(super_theta_expansion(z, th, ctx), value))
    return worst


@check("green-torus", "theta-prime-zero", tolerance=1e-8)
def _theta_prime_zero(rng):
    alg = default_algebra()
    worst = 0.0
    for _ in range(5):
        ctx, th = _ctx(rng), _theta(rng)
        ad = derivative(lambda pt: super_theta(pt.even[0], pt.odd[0], ctx), C11.point(alg.zero(), th), 0)
        worst = max(worst, residual(ad, super_theta_prime_zero_closed(th, ctx)))
    return worst


@check("green-torus", "neron-form", tolerance=1e-9)
def _neron(rng):
    worst = 0.0
    for _ in range(5):
        ctx = _ctx(rng)
        pt = _torus_point(rng, ctx)
        worst = max(worst, residual(torus_green(pt, ctx), torus_green(pt, ctx, GreenForm.NERON)))
    return worst


@check("green-torus", "expanded-form", tolerance=1e-9, report_only=True,
       expected="the expanded form equals the definition for every δ")
def _expanded(rng):
    worst = 0.0
    for _ in range(3):
        ctx = _ctx(rng)
        pt = _torus_point(rng, ctx)
        worst = max(worst, residual(torus_green(pt, ctx), torus_green(pt, ctx, GreenForm.EXPANDED)))
    return worst


@check("green-torus", "t-invariance", tolerance=1e-9)
def _t_invariance(rng):
    worst = 0.0
    for _ in range(5):
        ctx = _ctx(rng)
        pt = _torus_point(rng, ctx)
        moved = complex_point(TORUS_CHART, pt.even[0] + 1, pt.odd[0])
        worst = max(worst, residual(torus_green(moved, ctx), torus_green(pt, ctx)))
    return worst


def _s_gap(rng, with_delta: bool) -> float:
    worst = 0.0
    for _ in range(3):
        ctx = _ctx(rng, with_delta)
        pt = _torus_point(rng, ctx)
        moved = torus_s_abstract(ctx.tau, ctx.delta)(pt)
        worst = max(worst, residual(torus_green(moved, ctx), torus_green(pt, ctx)))
    return worst


@check("green-torus", "s-invariance", tolerance=1e-9)
def _s_invariance(rng):
    return _s_gap(rng, with_delta=False)


@check("green-torus", "s-invariance-odd-modulus", tolerance=1e-9, report_only=True,
       expected="invariant for every δ")
def _s_invariance_odd(rng):
    return _s_gap(rng, with_delta=True)


@check("green-torus", "logarithmic-singularity", tolerance=1e-3)
def _log_limit(rng):
    return abs(green_log_limit(_ctx(rng, with_delta=False)) - 1.0)


def _hessian_gap(rng, ctx: ThetaContext, theta: GrassmannNumber) -> float:
    pt = _torus_point(rng, ctx, theta)
    computed, printed = torus_green_hessian(pt, ctx), printed_torus_hessian(pt, ctx)
    return max(residual(computed[k], printed[k]) for k in computed)


@check("green-torus", "hessian", tolerance=1e-7)
def _hessian(rng):
    return max(_hessian_gap(rng, _ctx(rng, with_delta=False), _theta(rng)) for _ in range(2))


@check("green-torus", "hessian-odd-modulus", tolerance=1e-7, report_only=True,
       expected="written second derivatives for δ ≠ 0")
def _hessian_odd(rng):
    alg = default_algebra()
    ctx = ThetaContext.create(_tau(rng), alg.theta(3) * complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
    return _hessian_gap(rng, ctx, alg.theta(1) * complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))


@check("green-torus", "hessian-metric", tolerance=1e-7, report_only=True,
       expected="−(1/π)∂∂̄𝒢 reproduces the torus metric")
def _hessian_metric(rng):
    ctx = _ctx(rng, with_delta=False)
    metric = model_metric(ModelId(ModelKind.TORUS, tau=ctx.tau, delta=ctx.delta))
    pt = _torus_point(rng, ctx)
    h, m = torus_green_hessian(pt, ctx), metric.matrix(pt)
    pairs = {"ZZb": (0, 1), "ZThb": (0, 3), "ThZb": (2, 1), "ThThb": (2, 3)}
    return max(residual(h[k] * 2, m[a][b]) for k, (a, b) in pairs.items())


@check("green-torus", "faltings", tolerance=1e-9)
def _faltings(rng):
    worst = 0.0
    for _ in range(5):
        ctx, th = _ctx(rng), _theta(rng)
        worst = max(worst, residual(faltings(th, ctx), faltings(th, ctx, FaltingsForm.CORRECTED)))
    plain = _ctx(rng, with_delta=False)
    zero = default_algebra().zero()
    return max(worst, residual(faltings(_theta(rng), plain), faltings(zero, plain)))


@check("green-torus", "faltings-printed", tolerance=1e-9, report_only=True,
       expected="written Lambert coefficient and constant")
def _faltings_printed(rng):
    ctx, th = _ctx(rng), _theta(rng)
    return residual(faltings(th, ctx), faltings(th, ctx, FaltingsForm.PRINTED))


def _torus_identity_z(rng, ctx: ThetaContext) -> GrassmannNumber:
    """A body point whose hat distances stay away from the branch point |w| = 1."""
    while True:
        z = _torus_z(rng, ctx.tau)
        if abs(abs(1 - cmath.exp(2j * math.pi * z.body)) - 1) > 0.05:
            return z


@check("green-torus", "distance-identity", tolerance=1e-6)
def _torus_identity(rng):
    worst = 0.0
    for _ in range(3):
        ctx = _ctx(rng, with_delta=False)
        worst = max(worst, manin_identity(IdentityKind.TORUS, _torus_identity_z(rng, ctx), _theta(rng), ctx).residual)
    return worst


@check("green-torus", "distance-identity-shifted", tolerance=1e-6, report_only=True,
       expected="the shifted-base-point expression equals 𝒢 for δ ≠ 0")
def _torus_identity_shifted(rng):
    ctx = _ctx(rng)
    return manin_identity(IdentityKind.TORUS, _torus_identity_z(rng, ctx), _theta(rng), ctx, "shifted").residual


# group


def _group_params(rng) -> GroupParams:
    return GroupParams(_even(rng, rng.uniform(0.2, 6.0)), _even(rng, rng.uniform(0.2, 1.0)),
                       _even(rng, rng.uniform(0.2, 6.0)), _odd(rng), _odd(rng))


@check("group", "osp-relations")
def _osp(rng):
    return max(osp_structure()["residuals"].values())


@check("group", "maurer-cartan", tolerance=1e-10)
def _mc(rng):
    worst = 0.0
    for _ in range(3):
        params = _group_params(rng)
        worst = max(worst, *(maurer_cartan(params, d).residual for d in range(GROUP_CHART.dim)))
    return worst


@check("group", "maurer-cartan-printed", tolerance=1e-10)
def _mc_printed(rng):
    params = _group_params(rng)
    worst = 0.0
    for d in range(GROUP_CHART.dim):
        computed, printed = maurer_cartan(params, d).as_dict(), printed_current(params, d)
        worst = max(worst, *(residual(computed[k], printed[k]) for k in computed))
    return worst


@check("group", "killing-metric", tolerance=1e-10, report_only=True, expected="written group metric")
def _killing(rng):
    params = _group_params(rng)
    metric = model_metric(ModelId(ModelKind.GROUP_OSP))
    return _matrix_gap(killing_metric(params), metric.matrix(params.point()))


@check("group", "volume", tolerance=1e-10, report_only=True, expected="2(1 + 3θ₁θ₂) sinh 2λ")
def _group_volume(rng):
    params = _group_params(rng)
    metric = model_metric(ModelId(ModelKind.GROUP_OSP))
    return residual(volume_density(metric, params.point()), printed_group_volume(params))


# renorm-volume


@check("renorm-volume", "magnitude", tolerance=1e-6)
def _volume_magnitude(rng):
    result = renormalized_volume()
    return result.magnitude_residual, f"limit {result.raw_limit:.12g}"


@check("renorm-volume", "sign", tolerance=1e-6, report_only=True, expected="−24π²")
def _volume_sign(rng):
    result = renormalized_volume()
    return abs(result.raw_limit - result.paper_value) / abs(result.paper_value), f"limit {result.raw_limit:.12g}"


@check("renorm-volume", "raw-divergence", tolerance=0.5)
def _raw_divergence(rng):
    return 0.0 if renormalized_volume().raw_divergent else 1.0
