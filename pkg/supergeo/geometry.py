"""Supermetrics, connection, curvature and volume densities.

Real metrics use the left convention: the quadratic form on a tangent vector
v is Σ g_AB v^A v^B with g_AB = (−1)^{ab} g_BA, and a line-element term
f·dX^I dX^J contributes f/2 to g_IJ and (−1)^{ij} f/2 to g_JI.

Hermitian metrics are stored as display matrices on abstract charts
(Z…, Z̄… | Θ…, Θ̄…) with M_IJ = −∂_I∂_J K for a potential K.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from supergeo.calculus import AuxArena, Chart, SuperPoint, Superfield, derivative, hessian
from supergeo.errors import ChartError, DomainError, NonInvertibleError, SingularMetricError
from supergeo.grassmann import GrassmannNumber, Parity, apply_analytic, extract_front, residual
from supergeo.supermatrix import SuperMatrix, berezinian, gauss_jordan_inverse

logger = logging.getLogger(__name__)

Matrix = list[list[GrassmannNumber]]


class MetricKind(str, Enum):
    GRADED = "graded-symmetric"
    HERMITIAN = "hermitian"


@dataclass(frozen=True)
class SuperMetric:
    """Metric on a chart given by its full component matrix at each point."""

    chart: Chart
    components: Callable[[SuperPoint], Matrix]
    kind: MetricKind = MetricKind.GRADED
    name: str = ""

    def matrix(self, point: SuperPoint) -> Matrix:
        if point.chart != self.chart:
            raise ChartError(f"metric {self.name} lives on {self.chart.name}, got {point.chart.name}")
        return self.components(point)

    def component(self, a: int, b: int) -> Superfield:
        odd = (self.chart.parity_of(a) + self.chart.parity_of(b)) % 2
        return Superfield(
            self.chart,
            lambda pt: self.matrix(pt)[a][b],
            Parity.ODD if odd else Parity.EVEN,
            f"{self.name}[{a},{b}]",
        )

    def symmetry_residual(self, point: SuperPoint) -> float:
        """Largest defect of g_AB = (−1)^{ab} g_BA (graded) or M_JI = (−1)^{ij} M_IJ (Hermitian)."""
        g = self.matrix(point)
        worst = 0.0
        for a in range(self.chart.dim):
            for b in range(self.chart.dim):
                sign = -1 if self.chart.parity_of(a) and self.chart.parity_of(b) else 1
                worst = max(worst, residual(g[a][b], g[b][a] * sign))
        return worst

    def parity_holds(self, point: SuperPoint) -> bool:
        g = self.matrix(point)
        for a in range(self.chart.dim):
            for b in range(self.chart.dim):
                odd = (self.chart.parity_of(a) + self.chart.parity_of(b)) % 2
                if not (g[a][b].is_odd() if odd else g[a][b].is_even()):
                    return False
        return True


def metric_from_line_element(
    chart: Chart,
    line_element: Callable[[SuperPoint], dict[tuple[int, int], GrassmannNumber]],
    name: str = "",
) -> SuperMetric:
    """Left-convention metric from coefficients f of f·dX^I dX^J."""

    def components(point: SuperPoint) -> Matrix:
        zero = point.algebra.zero()
        g = [[zero for _ in range(chart.dim)] for _ in range(chart.dim)]
        for (i, j), f in line_element(point).items():
            pi, pj = chart.parity_of(i), chart.parity_of(j)
            if i == j:
                if not pi:
                    g[i][i] = g[i][i] + f
                continue
            half = f * 0.5
            g[i][j] = g[i][j] + half
            g[j][i] = g[j][i] + (-half if pi and pj else half)
        return g

    return SuperMetric(chart, components, MetricKind.GRADED, name)


def pullback(phi, metric: SuperMetric, name: str = "") -> SuperMetric:
    """φ*g as a metric on φ's source chart."""
    from supergeo.calculus import pullback_metric

    return SuperMetric(phi.source, lambda pt: pullback_metric(phi, metric, pt), metric.kind,
                       name or f"{phi.name}*{metric.name}")


# Connection


def metric_inverse(metric: SuperMetric, point: SuperPoint) -> Matrix:
    """g⁻¹ with g·g⁻¹ = Id exactly."""
    try:
        return gauss_jordan_inverse(metric.matrix(point))
    except NonInvertibleError as exc:
        raise SingularMetricError(f"{metric.name} is degenerate at {point.body()}") from exc


def _metric_derivatives(metric: SuperMetric, point: SuperPoint) -> list[Matrix]:
    return [derivative(metric.matrix, point, c) for c in range(point.chart.dim)]


def christoffel(metric: SuperMetric, point: SuperPoint) -> list[list[list[GrassmannNumber]]]:
    """Γ[A][P][Q] = Γ^A_PQ for the Levi-Civita connection of a left-convention metric.

    Derived from the Euler–Lagrange equations of Σ g_AB v^A v^B, so that the
    geodesic equation reads a^A = −Σ v^P v^Q Γ^A_PQ.
    """
    chart = point.chart
    n = chart.dim
    par = [chart.parity_of(i) for i in range(n)]
    g = metric.matrix(point)
    dg = _metric_derivatives(metric, point)
    zero = point.algebra.zero()

    # M_CA = (−1)^{c(1+a)} g_CA
    M = [[g[c][a] * (-1 if (par[c] * (1 + par[a])) % 2 else 1) for a in range(n)] for c in range(n)]
    try:
        M_inv = gauss_jordan_inverse(M)
    except NonInvertibleError as exc:
        raise SingularMetricError(f"{metric.name} is degenerate at {point.body()}") from exc

    def K(c: int, a: int, b: int) -> GrassmannNumber:
        pa, pb, pc = par[a], par[b], par[c]
        s1 = (pc * (1 + pb) + pb * (pa + pb + pc)) % 2
        s2 = ((pa + pb) * (pa + pb + pc)) % 2
        first = dg[a][c][b]
        second = dg[c][a][b] * 0.5
        return (first if s1 else -first) + (-second if s2 else second)

    Ks = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                sym = (K(c, a, b) + K(c, b, a) * (-1 if par[a] * par[b] else 1)) * 0.5
                Ks[c][a][b] = sym
                Ks[c][b][a] = sym * (-1 if par[a] * par[b] else 1)

    gamma = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for p_ in range(n):
            for q_ in range(n):
                acc = zero
                for c in range(n):
                    if not M_inv[a][c].terms or not Ks[c][p_][q_].terms:
                        continue
                    term = M_inv[a][c] * Ks[c][p_][q_]
                    acc = acc + (term if ((par[p_] + par[q_]) * (par[a] + par[c])) % 2 else -term)
                gamma[a][p_][q_] = acc
    return gamma


def geodesic_acceleration(metric: SuperMetric, point: SuperPoint,
                          velocity: Sequence[GrassmannNumber]) -> list[GrassmannNumber]:
    """a^A = −Σ v^P v^Q Γ^A_PQ."""
    gamma = christoffel(metric, point)
    n = point.chart.dim
    zero = point.algebra.zero()
    out = []
    for a in range(n):
        acc = zero
        for p_ in range(n):
            if not velocity[p_].terms:
                continue
            for q_ in range(n):
                if velocity[q_].terms and gamma[a][p_][q_].terms:
                    acc = acc - velocity[p_] * velocity[q_] * gamma[a][p_][q_]
        out.append(acc)
    return out


def energy_drift(metric: SuperMetric, point: SuperPoint, velocity: Sequence[GrassmannNumber]) -> GrassmannNumber:
    """d/du of Σ g_AB v^A v^B along the geodesic spray; vanishes for a metric connection."""
    accel = geodesic_acceleration(metric, point, velocity)
    algebra = point.algebra
    with AuxArena.claim(algebra, 2) as bits:
        mask = (1 << bits[0]) | (1 << bits[1])
        eps = algebra.monomial(mask)
        moved = point
        for i, v in enumerate(velocity):
            moved = moved.shifted(i, eps * v)
        g = metric.matrix(moved)
        w = [v + eps * a for v, a in zip(velocity, accel)]
        total = algebra.zero()
        n = point.chart.dim
        for a in range(n):
            for b in range(n):
                if g[a][b].terms:
                    total = total + g[a][b] * w[a] * w[b]
        return extract_front(total, mask)


# Curvature


class RiemannConvention(str, Enum):
    """Sign family for R^D_ABC: derivative side × sign of the quadratic terms."""

    STANDARD = "right-derivative"
    LEFT_DERIVATIVE = "left-derivative"
    FLIPPED_QUADRATIC = "right-derivative-flipped"
    LEFT_FLIPPED = "left-derivative-flipped"

    @property
    def right_derivative(self) -> bool:
        return self in (RiemannConvention.STANDARD, RiemannConvention.FLIPPED_QUADRATIC)

    @property
    def quadratic_sign(self) -> int:
        return 1 if self in (RiemannConvention.STANDARD, RiemannConvention.LEFT_DERIVATIVE) else -1


@dataclass
class CurvatureReport:
    christoffel: list[list[list[GrassmannNumber]]]
    riemann: list[list[list[list[GrassmannNumber]]]]
    ricci: Matrix
    scalar: GrassmannNumber
    at: SuperPoint
    convention: RiemannConvention = RiemannConvention.STANDARD


def riemann(metric: SuperMetric, point: SuperPoint,
            convention: RiemannConvention = RiemannConvention.STANDARD):
    """R[D][A][B][C] = R^D_ABC and the Christoffel table it was built from.

    R^D_ABC = −Γ^D_AB,C + (−1)^{bc} Γ^D_AC,B
              + (−1)^{b(a+e)} Γ^D_EB Γ^E_AC − (−1)^{c(a+b+e)} Γ^D_EC Γ^E_AB
    """
    chart = point.chart
    n = chart.dim
    par = [chart.parity_of(i) for i in range(n)]
    gamma = christoffel(metric, point)
    dgamma = [derivative(lambda q: christoffel(metric, q), point, c) for c in range(n)]
    zero = point.algebra.zero()

    def comma(d: int, a: int, b: int, c: int) -> GrassmannNumber:
        # Γ^D_AB,C
        value = dgamma[c][d][a][b]
        if convention.right_derivative and (par[c] * (par[a] + par[b] + par[d] + 1)) % 2:
            return -value
        return value

    R = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for d in range(n):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    acc = -comma(d, a, b, c)
                    second = comma(d, a, c, b)
                    acc = acc + (-second if par[b] * par[c] else second)
                    quad = zero
                    for e in range(n):
                        if gamma[d][e][b].terms and gamma[e][a][c].terms:
                            t = gamma[d][e][b] * gamma[e][a][c]
                            quad = quad + (-t if (par[b] * (par[a] + par[e])) % 2 else t)
                        if gamma[d][e][c].terms and gamma[e][a][b].terms:
                            t = gamma[d][e][c] * gamma[e][a][b]
                            quad = quad - (-t if (par[c] * (par[a] + par[b] + par[e])) % 2 else t)
                    R[d][a][b][c] = acc + quad * convention.quadratic_sign
    return R, gamma


def curvature(metric: SuperMetric, point: SuperPoint,
              convention: RiemannConvention = RiemannConvention.STANDARD) -> CurvatureReport:
    """Riemann, Ricci R_AC = Σ_B (−1)^{b(a+1)} R^B_ABC and scalar Σ R_AB (g⁻¹)_AB."""
    n = point.chart.dim
    par = [point.chart.parity_of(i) for i in range(n)]
    R, gamma = riemann(metric, point, convention)
    zero = point.algebra.zero()
    ricci = [[zero] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            acc = zero
            for b in range(n):
                term = R[b][a][b][c]
                acc = acc + (-term if (par[b] * (par[a] + 1)) % 2 else term)
            ricci[a][c] = acc
    g_inv = metric_inverse(metric, point)
    scalar = zero
    for a in range(n):
        for b in range(n):
            if ricci[a][b].terms and g_inv[a][b].terms:
                scalar = scalar + ricci[a][b] * g_inv[a][b]
    logger.debug("curvature of %s at %s: scalar body %s", metric.name, point.body(), scalar.body)
    return CurvatureReport(gamma, R, ricci, scalar, point, convention)


def antisymmetry_residual(report: CurvatureReport) -> float:
    """Largest defect of R^D_ACB = −(−1)^{bc} R^D_ABC."""
    chart = report.at.chart
    n = chart.dim
    par = [chart.parity_of(i) for i in range(n)]
    R = report.riemann
    worst = 0.0
    for d in range(n):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    sign = 1 if par[b] * par[c] else -1
                    worst = max(worst, residual(R[d][a][c][b], R[d][a][b][c] * sign))
    return worst


def calibrate(metric: SuperMetric, points: Sequence[SuperPoint],
              reference: Callable[[SuperPoint], dict[tuple[int, int], GrassmannNumber]]
              ) -> tuple[RiemannConvention, dict[RiemannConvention, float]]:
    """Pick the convention whose Ricci table best matches ``reference`` at ``points``.

    Components absent from the reference are expected to vanish.
    """
    scores: dict[RiemannConvention, float] = {}
    for convention in RiemannConvention:
        worst = 0.0
        for point in points:
            ricci = curvature(metric, point, convention).ricci
            expected = reference(point)
            n = point.chart.dim
            for a in range(n):
                for b in range(n):
                    target = expected.get((a, b), point.algebra.zero())
                    worst = max(worst, residual(ricci[a][b], target))
        scores[convention] = worst
    best = min(scores, key=scores.get)
    logger.debug("calibration residuals: %s", {k.value: v for k, v in scores.items()})
    return best, scores


@dataclass
class Classification:
    einstein: bool
    einstein_constant: float | None
    einstein_residual: float
    bosonic: bool
    scalar_body: float | None
    scalar_spread: float


def _ratio_constant(lhs: Matrix, rhs: Matrix) -> float | None:
    best = None
    for row_l, row_r in zip(lhs, rhs):
        for x, y in zip(row_l, row_r):
            if abs(y.body) > abs(best[1].body if best else 0):
                best = (x, y)
    if best is None or abs(best[1].body) == 0:
        return None
    return (best[0].body / best[1].body).real


def classify(metric: SuperMetric, samples: Sequence[SuperPoint], tol: float = 1e-9,
             convention: RiemannConvention = RiemannConvention.STANDARD) -> Classification:
    """Einstein (R = c·g at every sample) and Bosonic (ε₀(R) constant) tests."""
    if len(samples) < 3:
        raise ChartError("classification needs at least three sample points")
    constants, worst, bodies = [], 0.0, []
    for point in samples:
        if metric.kind is MetricKind.HERMITIAN:
            ricci = hermitian_ricci(metric, point)
            g = metric.matrix(point)
            scalar_body = None
        else:
            report = curvature(metric, point, convention)
            ricci, g = report.ricci, metric.matrix(point)
            scalar_body = report.scalar.body.real
        c = _ratio_constant(ricci, g)
        if c is None:
            c = 0.0
        constants.append(c)
        for row_r, row_g in zip(ricci, g):
            for x, y in zip(row_r, row_g):
                worst = max(worst, residual(x, y * c))
        if scalar_body is not None:
            bodies.append(scalar_body)
    spread_c = max(constants) - min(constants)
    einstein = worst < tol and spread_c < tol
    spread = (max(bodies) - min(bodies)) if bodies else 0.0
    return Classification(
        einstein=einstein,
        einstein_constant=constants[0] if einstein else None,
        einstein_residual=max(worst, spread_c),
        bosonic=bool(bodies) and spread < tol,
        scalar_body=bodies[0] if bodies else None,
        scalar_spread=spread,
    )


# Hermitian metrics


def hermitian_metric(chart: Chart, display: Callable[[SuperPoint], Matrix], name: str = "") -> SuperMetric:
    return SuperMetric(chart, display, MetricKind.HERMITIAN, name)


def holomorphic_split(chart: Chart) -> tuple[list[int], list[int]]:
    """Indices of holomorphic and antiholomorphic coordinates on an abstract chart."""
    if chart.p % 2 or chart.q % 2:
        raise ChartError(f"{chart.name} is not an abstract (Z, Z̄ | Θ, Θ̄) chart")
    hp, hq = chart.p // 2, chart.q // 2
    hol = list(range(hp)) + list(range(chart.p, chart.p + hq))
    anti = list(range(hp, chart.p)) + list(range(chart.p + hq, chart.dim))
    return hol, anti


def mixed_pairs(chart: Chart) -> list[tuple[int, int]]:
    hol, anti = holomorphic_split(chart)
    return [(i, j) for i in hol for j in anti] + [(j, i) for i in hol for j in anti]


def display_from_line_element(
    chart: Chart,
    line_element: Callable[[SuperPoint], dict[tuple[int, int], GrassmannNumber]],
) -> Callable[[SuperPoint], Matrix]:
    """Display matrix of Σ f·dX^I dX^J with I holomorphic and J antiholomorphic.

    M_IJ = ½(−1)^{i+j+ij} f and M_JI = (−1)^{ij} M_IJ.
    """

    def display(point: SuperPoint) -> Matrix:
        zero = point.algebra.zero()
        out = [[zero] * chart.dim for _ in range(chart.dim)]
        for (i, j), f in line_element(point).items():
            pi, pj = chart.parity_of(i), chart.parity_of(j)
            m = f * (-0.5 if (pi + pj + pi * pj) % 2 else 0.5)
            out[i][j] = out[i][j] + m
            out[j][i] = out[j][i] + (-m if pi and pj else m)
        return out

    return display


def display_from_potential(chart: Chart, potential: Callable[[SuperPoint], GrassmannNumber],
                           scale: float = 1.0) -> Callable[[SuperPoint], Matrix]:
    """M_IJ = −scale·∂_I∂_J K on mixed pairs, zero elsewhere."""
    pairs = mixed_pairs(chart)

    def display(point: SuperPoint) -> Matrix:
        zero = point.algebra.zero()
        out = [[zero] * chart.dim for _ in range(chart.dim)]
        for i, j in pairs:
            out[i][j] = hessian(potential, point, i, j) * (-scale)
        return out

    return display


def sdet(metric: SuperMetric, point: SuperPoint) -> GrassmannNumber:
    """Berezinian of the component matrix."""
    return berezinian(SuperMatrix(metric.matrix(point), point.chart.p, check=False))


def _abs_even(x: GrassmannNumber) -> GrassmannNumber:
    return -x if x.body.real < 0 else x


def hermitian_ricci(metric: SuperMetric, point: SuperPoint) -> Matrix:
    """R_IJ = −∂_I∂_J log|Sdet M| on mixed pairs."""
    chart = point.chart

    def log_sdet(pt: SuperPoint) -> GrassmannNumber:
        return apply_analytic("log", _abs_even(sdet(metric, pt)))

    zero = point.algebra.zero()
    out = [[zero] * chart.dim for _ in range(chart.dim)]
    for i, j in mixed_pairs(chart):
        out[i][j] = -hessian(log_sdet, point, i, j)
    return out


def volume_density(metric: SuperMetric, point: SuperPoint) -> GrassmannNumber:
    """√|Ber| of the Hermitian display, or of g_AB(−1)^{a+ab} for a graded metric."""
    if metric.kind is MetricKind.HERMITIAN:
        ber = sdet(metric, point)
    else:
        chart = point.chart
        g = metric.matrix(point)
        n = chart.dim
        between = []
        for a in range(n):
            pa = chart.parity_of(a)
            row = []
            for b in range(n):
                pb = chart.parity_of(b)
                row.append(-g[a][b] if (pa + pa * pb) % 2 else g[a][b])
            between.append(row)
        ber = berezinian(SuperMatrix(between, chart.p, check=False))
    try:
        return apply_analytic("sqrt", _abs_even(ber))
    except DomainError as exc:
        raise SingularMetricError(f"volume density of {metric.name} undefined at {point.body()}") from exc
