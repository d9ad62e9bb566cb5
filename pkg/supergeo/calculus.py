"""Super points, superfields and exact differentiation.

Derivatives are taken by perturbing a coordinate with a nilpotent direction
built from auxiliary generators: a single fresh odd generator η for odd
coordinates, the even product ε = η_aη_b for even ones. The coefficient of
the perturbation, moved to the front, is the left derivative.
"""

import logging
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from supergeo.errors import CapacityError, ChartError, ParityError
from supergeo.grassmann import (
    Algebra,
    GrassmannNumber,
    Parity,
    extract_front,
    parity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chart:
    """Coordinate chart with p even and q odd coordinates."""

    name: str
    even_names: tuple[str, ...]
    odd_names: tuple[str, ...] = ()
    body_check: Callable[["SuperPoint"], None] | None = field(default=None, compare=False, repr=False)

    @property
    def p(self) -> int:
        return len(self.even_names)

    @property
    def q(self) -> int:
        return len(self.odd_names)

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def names(self) -> tuple[str, ...]:
        return self.even_names + self.odd_names

    def parity_of(self, index: int) -> int:
        """0 for even coordinates, 1 for odd ones."""
        if not 0 <= index < self.dim:
            raise ChartError(f"coordinate index {index} out of range for {self.name} ({self.p}|{self.q})")
        return 0 if index < self.p else 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ChartError(f"{self.name} has no coordinate {name!r}") from None

    def point(self, *coords: GrassmannNumber, validate: bool = True) -> "SuperPoint":
        pt = SuperPoint(self, tuple(coords[: self.p]), tuple(coords[self.p:]))
        if validate:
            pt.validate()
        return pt


@dataclass(frozen=True)
class SuperPoint:
    chart: Chart
    even: tuple[GrassmannNumber, ...]
    odd: tuple[GrassmannNumber, ...] = ()

    def __post_init__(self):
        if len(self.even) != self.chart.p or len(self.odd) != self.chart.q:
            raise ChartError(
                f"{self.chart.name} expects {self.chart.p}|{self.chart.q} coordinates, "
                f"got {len(self.even)}|{len(self.odd)}"
            )
        for name, x in zip(self.chart.even_names, self.even):
            if not x.is_even():
                raise ParityError(f"even coordinate {name} has parity {parity(x).value}")
        for name, x in zip(self.chart.odd_names, self.odd):
            if not x.is_odd():
                raise ParityError(f"odd coordinate {name} has parity {parity(x).value}")

    @property
    def coords(self) -> tuple[GrassmannNumber, ...]:
        return self.even + self.odd

    @property
    def algebra(self) -> Algebra:
        return self.coords[0].algebra

    def __getitem__(self, key: int | str) -> GrassmannNumber:
        if isinstance(key, str):
            key = self.chart.index(key)
        return self.coords[key]

    def replace(self, index: int, value: GrassmannNumber) -> "SuperPoint":
        coords = list(self.coords)
        coords[index] = value
        return SuperPoint(self.chart, tuple(coords[: self.chart.p]), tuple(coords[self.chart.p:]))

    def shifted(self, index: int, delta: GrassmannNumber) -> "SuperPoint":
        return self.replace(index, self.coords[index] + delta)

    def validate(self) -> "SuperPoint":
        if self.chart.body_check is not None:
            self.chart.body_check(self)
        return self

    def body(self) -> tuple[complex, ...]:
        return tuple(x.body for x in self.coords)


@dataclass(frozen=True)
class Superfield:
    """Grassmann-valued function on a chart."""

    chart: Chart
    evaluator: Callable[[SuperPoint], GrassmannNumber]
    declared_parity: Parity = Parity.EVEN
    name: str = ""

    def __call__(self, point: SuperPoint) -> GrassmannNumber:
        if point.chart != self.chart:
            raise ChartError(f"field {self.name or '?'} lives on {self.chart.name}, got {point.chart.name}")
        return self.evaluator(point)

    def parity_holds(self, point: SuperPoint) -> bool:
        value = self(point)
        return value.is_even() if self.declared_parity is Parity.EVEN else value.is_odd()


@dataclass(frozen=True)
class SuperMap:
    """Map between charts given by its coordinate formulas."""

    source: Chart
    target: Chart
    evaluator: Callable[[SuperPoint], SuperPoint]
    name: str = ""

    def __call__(self, point: SuperPoint) -> SuperPoint:
        if point.chart != self.source:
            raise ChartError(f"map {self.name or '?'} starts on {self.source.name}, got {point.chart.name}")
        image = self.evaluator(point)
        if image.chart != self.target:
            raise ChartError(f"map {self.name or '?'} should land on {self.target.name}")
        return image

    def compose(self, inner: "SuperMap") -> "SuperMap":
        """self ∘ inner."""
        if inner.target != self.source:
            raise ChartError(f"cannot compose {self.name} after {inner.name}")
        return SuperMap(inner.source, self.target, lambda pt: self(inner(pt)), f"{self.name}∘{inner.name}")

    def component(self, index: int) -> Superfield:
        declared = Parity.EVEN if index < self.target.p else Parity.ODD
        return Superfield(self.source, lambda pt: self(pt).coords[index], declared, f"{self.name}[{index}]")


def identity_map(chart: Chart) -> SuperMap:
    return SuperMap(chart, chart, lambda pt: pt, "id")


# Auxiliary generators

_aux_offset: ContextVar[int] = ContextVar("supergeo_aux_offset", default=0)


class AuxArena:
    """Scoped claims on the auxiliary generator block of an algebra."""

    @staticmethod
    @contextmanager
    def claim(algebra: Algebra, count: int) -> Iterator[list[int]]:
        start = _aux_offset.get()
        if start + count > algebra.num_aux:
            raise CapacityError(
                f"need {count} auxiliary generators, {algebra.num_aux - start} left"
            )
        token = _aux_offset.set(start + count)
        try:
            yield [algebra.num_physical + start + i for i in range(count)]
        finally:
            _aux_offset.reset(token)

    @staticmethod
    def in_use() -> int:
        return _aux_offset.get()


def _extract(value: Any, mask: int) -> Any:
    if isinstance(value, GrassmannNumber):
        return extract_front(value, mask)
    if isinstance(value, SuperPoint):
        return tuple(extract_front(x, mask) for x in value.coords)
    if isinstance(value, list):
        return [_extract(v, mask) for v in value]
    if isinstance(value, tuple):
        return tuple(_extract(v, mask) for v in value)
    if isinstance(value, dict):
        return {k: _extract(v, mask) for k, v in value.items()}
    raise TypeError(f"cannot differentiate values of type {type(value).__name__}")


def derivative(fn: Callable[[SuperPoint], Any], point: SuperPoint, index: int) -> Any:
    """Left derivative ∂_index of ``fn`` at ``point``, exact.

    ``fn`` may return a GrassmannNumber, a SuperPoint or nested lists/tuples of them.
    """
    odd = point.chart.parity_of(index)
    algebra = point.algebra
    with AuxArena.claim(algebra, 1 if odd else 2) as bits:
        mask = 0
        for b in bits:
            mask |= 1 << b
        direction = algebra.monomial(mask)
        return _extract(fn(point.shifted(index, direction)), mask)


def partial_odd(f: Callable[[SuperPoint], Any], point: SuperPoint, i: int) -> Any:
    """Left derivative along the i-th odd coordinate."""
    if not 0 <= i < point.chart.q:
        raise ChartError(f"odd index {i} out of range for {point.chart.name}")
    return derivative(f, point, point.chart.p + i)


def partial_even(
    f: Callable[[SuperPoint], Any], point: SuperPoint, i: int, order: int = 1, j: int | None = None
) -> Any:
    """∂_i f, or ∂_i∂_j f from one evaluation at p + ε₁e_i + ε₂e_j."""
    p = point.chart.p
    for k in (i, i if j is None else j):
        if not 0 <= k < p:
            raise ChartError(f"even index {k} out of range for {point.chart.name}")
    if order == 1:
        return derivative(f, point, i)
    if order != 2:
        raise ChartError("only first and second order derivatives are supported")
    j = i if j is None else j
    algebra = point.algebra
    with AuxArena.claim(algebra, 4) as bits:
        eps1 = (1 << bits[0]) | (1 << bits[1])
        eps2 = (1 << bits[2]) | (1 << bits[3])
        shifted = point.shifted(i, algebra.monomial(eps1)).shifted(j, algebra.monomial(eps2))
        return _extract(f(shifted), eps1 | eps2)


def hessian(f: Callable[[SuperPoint], Any], point: SuperPoint, a: int, b: int) -> Any:
    """∂_a(∂_b f) with b innermost."""
    return derivative(lambda q: derivative(f, q, b), point, a)


def D_operator(f: Callable[[SuperPoint], GrassmannNumber], point: SuperPoint) -> GrassmannNumber:
    """𝔻f = ∂f/∂Θ + Θ·∂f/∂Z on a 1|1 chart."""
    if point.chart.p != 1 or point.chart.q != 1:
        raise ChartError(f"𝔻 needs a 1|1 chart, got {point.chart.p}|{point.chart.q}")
    theta = point.odd[0]
    return derivative(f, point, 1) + theta * derivative(f, point, 0)


def jacobian(phi: SuperMap, point: SuperPoint) -> list[list[GrassmannNumber]]:
    """J[A][C] = ∂^L_A φ^C."""
    return [list(derivative(phi, point, a)) for a in range(point.chart.dim)]


def pullback_metric(phi: SuperMap, metric, point: SuperPoint) -> list[list[GrassmannNumber]]:
    """Components of φ*g at ``point`` for a left-convention metric g.

    h_AB = Σ_CD (−1)^{ab+a+b+ac+ad+bd} g_CD(φ(p)) J_A^C J_B^D.
    """
    if phi.source != point.chart or phi.target != metric.chart:
        raise ChartError(f"pullback of {metric.chart.name} along {phi.name} at {point.chart.name}")
    g = metric.matrix(phi(point))
    jac = jacobian(phi, point)
    src, tgt = phi.source, phi.target
    zero = point.algebra.zero()
    h = [[zero for _ in range(src.dim)] for _ in range(src.dim)]
    for a in range(src.dim):
        pa = src.parity_of(a)
        for b in range(src.dim):
            pb = src.parity_of(b)
            acc = zero
            for c in range(tgt.dim):
                pc = tgt.parity_of(c)
                jac_ac = jac[a][c]
                if not jac_ac.terms:
                    continue
                for d in range(tgt.dim):
                    gcd = g[c][d]
                    if not gcd.terms or not jac[b][d].terms:
                        continue
                    pd = tgt.parity_of(d)
                    sign = (pa * pb + pa + pb + pa * pc + pa * pd + pb * pd) % 2
                    term = gcd * jac_ac * jac[b][d]
                    acc = acc - term if sign else acc + term
            h[a][b] = acc
    return h


def hermitian_pullback(phi: SuperMap, matrix_at: Callable[[SuperPoint], Sequence[Sequence[GrassmannNumber]]],
                       point: SuperPoint) -> list[list[GrassmannNumber]]:
    """Pull back a Hessian-type display matrix M_PQ = −∂_P∂_Q K along a holomorphic map.

    M̃_IJ = Σ_PQ (−1)^{|I|(|J|+|Q|)} J_J^Q J_I^P M_PQ(φ(X)); second derivatives of
    φ drop out on mixed index pairs.
    """
    m = matrix_at(phi(point))
    jac = jacobian(phi, point)
    src, tgt = phi.source, phi.target
    zero = point.algebra.zero()
    out = [[zero for _ in range(src.dim)] for _ in range(src.dim)]
    for i in range(src.dim):
        pi = src.parity_of(i)
        for j in range(src.dim):
            pj = src.parity_of(j)
            acc = zero
            for p_ in range(tgt.dim):
                if not jac[i][p_].terms:
                    continue
                for q_ in range(tgt.dim):
                    if not jac[j][q_].terms or not m[p_][q_].terms:
                        continue
                    term = jac[j][q_] * jac[i][p_] * m[p_][q_]
                    if (pi * (pj + tgt.parity_of(q_))) % 2:
                        term = -term
                    acc = acc + term
            out[i][j] = acc
    return out
