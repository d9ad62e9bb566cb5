"""Exact arithmetic in a finitely generated Grassmann algebra.

Elements are stored sparsely as ``{bitmask: coefficient}``; bit ``k`` of a mask
stands for the generator ``θ_{k+1}`` and every monomial is kept in ascending
generator order. Coefficients are Python complex numbers, so one type serves
the real and the complexified algebra.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Union

import numpy as np

from supergeo.config import get_settings
from supergeo.errors import ConfigurationError, DomainError, NonInvertibleError, ParityError

logger = logging.getLogger(__name__)

Scalar = Union[int, float, complex]


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


@lru_cache(maxsize=None)
def _reorder_sign(left: int, right: int) -> int:
    """Sign of θ_left·θ_right relative to the canonical monomial θ_{left|right}."""
    swaps = 0
    rest = right
    while rest:
        low = rest & -rest
        j = low.bit_length() - 1
        swaps += bin(left >> (j + 1)).count("1")
        rest ^= low
    return -1 if swaps & 1 else 1


def _degree(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Algebra:
    """Λ_N with the first ``num_physical`` generators reserved for problem data."""

    num_generators: int = 16
    num_physical: int = 8

    def __post_init__(self):
        if not 1 <= self.num_generators <= 16:
            raise ConfigurationError(f"num_generators must be in [1, 16], got {self.num_generators}")
        if not 0 <= self.num_physical <= self.num_generators:
            raise ConfigurationError("num_physical must not exceed num_generators")

    @property
    def num_aux(self) -> int:
        return self.num_generators - self.num_physical

    def zero(self) -> "GrassmannNumber":
        return GrassmannNumber(self, {})

    def scalar(self, value: Scalar) -> "GrassmannNumber":
        return GrassmannNumber(self, {0: complex(value)})

    def theta(self, k: int) -> "GrassmannNumber":
        """The generator θ_k, 1-based."""
        if not 1 <= k <= self.num_generators:
            raise ConfigurationError(f"generator θ{k} outside Λ_{self.num_generators}")
        return GrassmannNumber(self, {1 << (k - 1): 1.0 + 0j})

    def monomial(self, mask: int, coeff: Scalar = 1.0) -> "GrassmannNumber":
        if mask >> self.num_generators:
            raise ConfigurationError(f"mask {mask:#x} outside Λ_{self.num_generators}")
        return GrassmannNumber(self, {mask: complex(coeff)})


@lru_cache
def default_algebra() -> Algebra:
    """Algebra sized by the configured settings."""
    settings = get_settings()
    return Algebra(settings.num_generators, settings.num_physical)


class GrassmannNumber:
    """Immutable element of a Grassmann algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: dict[int, complex]):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", {m: complex(c) for m, c in terms.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("GrassmannNumber is immutable")

    # Coercion

    def _coerce(self, other) -> "GrassmannNumber":
        if isinstance(other, GrassmannNumber):
            if other.algebra != self.algebra:
                raise ConfigurationError(
                    f"mismatched algebras: {self.algebra} vs {other.algebra}"
                )
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return self.algebra.scalar(complex(other))
        return NotImplemented

    # Arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) + c
        return GrassmannNumber(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannNumber(self.algebra, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            k = complex(other)
            return GrassmannNumber(self.algebra, {m: c * k for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            if other == 0:
                raise NonInvertibleError("division by zero scalar")
            return self * (1.0 / complex(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, invert(other))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, invert(self))

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            if exponent < 0:
                return invert(self) ** (-exponent)
            result = self.algebra.scalar(1)
            for _ in range(exponent):
                result = mul(result, self)
            return result
        return apply_analytic("power", self, exponent=exponent)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = self.algebra.scalar(other)
        if not isinstance(other, GrassmannNumber):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    __hash__ = None

    # Inspection

    @property
    def body(self) -> complex:
        return self.terms.get(0, 0j)

    @property
    def soul(self) -> "GrassmannNumber":
        return GrassmannNumber(self.algebra, {m: c for m, c in self.terms.items() if m})

    def coefficient(self, mask: int) -> complex:
        return self.terms.get(mask, 0j)

    @property
    def parity(self) -> Parity:
        return parity(self)

    def is_even(self) -> bool:
        return all(_degree(m) % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(_degree(m) % 2 == 1 for m in self.terms)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def support(self) -> int:
        """Union of generator bits appearing in any monomial."""
        out = 0
        for m in self.terms:
            out |= m
        return out

    def real(self) -> "GrassmannNumber":
        return GrassmannNumber(self.algebra, {m: c.real for m, c in self.terms.items()})

    def imag(self) -> "GrassmannNumber":
        return GrassmannNumber(self.algebra, {m: c.imag for m, c in self.terms.items()})

    def conj(self, table: "ConjugationTable | None" = None) -> "GrassmannNumber":
        return conjugate(self, table or GRADED)

    def __repr__(self):
        return f"GrassmannNumber({self})"

    def __str__(self):
        return render(self)


# Core operations


def mul(a: GrassmannNumber, b: GrassmannNumber) -> GrassmannNumber:
    """Graded product of two elements of the same algebra."""
    if a.algebra != b.algebra:
        raise ConfigurationError(f"mismatched algebras: {a.algebra} vs {b.algebra}")
    out: dict[int, complex] = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            if m1 & m2:
                continue
            m = m1 | m2
            out[m] = out.get(m, 0j) + _reorder_sign(m1, m2) * c1 * c2
    return GrassmannNumber(a.algebra, out)


def body(a: GrassmannNumber) -> complex:
    """ε₀(a): coefficient of the empty monomial."""
    return a.body


def parity(a: GrassmannNumber) -> Parity:
    if a.is_even():
        return Parity.EVEN
    if a.is_odd():
        return Parity.ODD
    return Parity.MIXED


def require_parity(a: GrassmannNumber, expected: Parity, what: str = "element") -> None:
    ok = a.is_even() if expected is Parity.EVEN else a.is_odd()
    if not ok:
        raise ParityError(f"{what} must be {expected.value}, got {parity(a).value}")


def invert(a: GrassmannNumber) -> GrassmannNumber:
    """Two-sided inverse of an even element with nonzero body."""
    require_parity(a, Parity.EVEN, "inverted element")
    b = a.body
    if b == 0:
        raise NonInvertibleError(f"zero body cannot be inverted: {a}")
    # a⁻¹ = b⁻¹ Σ (−s/b)^k; the series stops once the power vanishes
    x = a.soul * (-1.0 / b)
    term = a.algebra.scalar(1.0 / b)
    result = term
    while True:
        term = mul(term, x)
        if not term.terms:
            return result
        result = result + term


def extract_front(a: GrassmannNumber, mask: int) -> GrassmannNumber:
    """Coefficient of θ_mask moved to the front: a = θ_mask·r + (terms without mask)."""
    out: dict[int, complex] = {}
    for m, c in a.terms.items():
        if m & mask == mask:
            rest = m ^ mask
            out[rest] = out.get(rest, 0j) + _reorder_sign(mask, rest) * c
    return GrassmannNumber(a.algebra, out)


def drop_generators(a: GrassmannNumber, mask: int) -> GrassmannNumber:
    """Remove every monomial touching the generators in ``mask``."""
    return GrassmannNumber(a.algebra, {m: c for m, c in a.terms.items() if not m & mask})


def isclose(a: GrassmannNumber, b, tol: float = 1e-12) -> bool:
    return (a - b).max_abs() <= tol


def residual(a, b) -> float:
    """Largest coefficient of a − b."""
    if isinstance(a, GrassmannNumber):
        return (a - b).max_abs()
    if isinstance(b, GrassmannNumber):
        return (b - a).max_abs()
    return abs(complex(a) - complex(b))


# Conjugation


class ConjugationKind(str, Enum):
    GRADED = "graded"
    PAIRED_SWAP = "paired_swap"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class ConjugationTable:
    """Antilinear reversing anti-automorphism fixed by generator images.

    ``images[k]`` lists ``(generator_index, coefficient)`` pairs (0-based) for
    conj(θ_{k+1}); generators beyond the table map to iθ.
    """

    kind: ConjugationKind
    images: tuple[tuple[tuple[int, complex], ...], ...] = ()

    def image(self, algebra: Algebra, k: int) -> GrassmannNumber:
        if self.kind is ConjugationKind.GRADED or k >= len(self.images) or not self.images[k]:
            return GrassmannNumber(algebra, {1 << k: 1j})
        return GrassmannNumber(algebra, {1 << j: complex(c) for j, c in self.images[k]})

    def validate(self, algebra: Algebra) -> None:
        for k, pairs in enumerate(self.images):
            if any(not 0 <= j < algebra.num_generators for j, _ in pairs):
                raise ConfigurationError(f"conjugation image of θ{k + 1} is not a homogeneous odd element")

    def involution_sign(self, algebra: Algebra, k: int) -> int:
        """Declared sign s with conj(conj θ) = s·θ, verified against the table."""
        twice = conjugate(conjugate(algebra.theta(k + 1), self), self)
        for sign in (1, -1):
            if isclose(twice, algebra.theta(k + 1) * sign, 0.0):
                return sign
        raise ConfigurationError(f"conj∘conj does not map θ{k + 1} to ±itself")


def _paired_table(kind: ConjugationKind, n: int = 16) -> ConjugationTable:
    first_sign = -1.0 if kind is ConjugationKind.PAIRED_SWAP else 1.0
    images = []
    for k in range(0, n - 1, 2):
        images.append(((k + 1, first_sign),))
        images.append(((k, 1.0),))
    return ConjugationTable(kind, tuple(images))


GRADED = ConjugationTable(ConjugationKind.GRADED)
PAIRED_SWAP = _paired_table(ConjugationKind.PAIRED_SWAP)
ABSTRACT = _paired_table(ConjugationKind.ABSTRACT)


@lru_cache(maxsize=4096)
def _monomial_conjugate(table: ConjugationTable, algebra: Algebra, mask: int) -> tuple:
    result = algebra.scalar(1)
    bits = [k for k in range(algebra.num_generators) if mask >> k & 1]
    for k in reversed(bits):
        result = mul(result, table.image(algebra, k))
    return tuple(result.terms.items())


def conjugate(a: GrassmannNumber, table: ConjugationTable = GRADED) -> GrassmannNumber:
    """conj(ab) = conj(b)·conj(a), antilinear, generator images from ``table``."""
    if table.kind is ConjugationKind.GRADED:
        # even monomials are fixed, odd ones pick up a factor i
        return GrassmannNumber(
            a.algebra,
            {m: c.conjugate() * (1j if _degree(m) & 1 else 1) for m, c in a.terms.items()},
        )
    table.validate(a.algebra)
    out: dict[int, complex] = {}
    for m, c in a.terms.items():
        for mm, cc in _monomial_conjugate(table, a.algebra, m):
            out[mm] = out.get(mm, 0j) + c.conjugate() * cc
    return GrassmannNumber(a.algebra, out)


def re(a: GrassmannNumber) -> GrassmannNumber:
    """Real part of an even element: ½(a + ā)."""
    return a.real()


def im(a: GrassmannNumber) -> GrassmannNumber:
    """Imaginary part of an even element: (a − ā)/2i."""
    return a.imag()


def modulus_squared(a: GrassmannNumber, table: ConjugationTable = GRADED) -> GrassmannNumber:
    return mul(a, conjugate(a, table))


def modulus(a: GrassmannNumber, table: ConjugationTable = GRADED) -> GrassmannNumber:
    """Even modulus √(a·ā) of an even element with nonzero body."""
    return apply_analytic("sqrt", modulus_squared(a, table).real())


# Analytic functions


def _taylor(a: GrassmannNumber, coefficients: Callable[[int], complex]) -> GrassmannNumber:
    s = a.soul
    result = a.algebra.scalar(coefficients(0))
    power = a.algebra.scalar(1)
    k = 0
    while True:
        k += 1
        power = mul(power, s)
        if not power.terms:
            return result
        result = result + power * coefficients(k)


def _is_real(z: complex) -> bool:
    return z.imag == 0


def apply_analytic(fn: str, a: GrassmannNumber, exponent: Scalar | None = None) -> GrassmannNumber:
    """Apply ``fn`` to an even element by its Taylor expansion around the body.

    Supported: exp, log, sqrt, power, cosh, sinh, tanh, sech, arccosh.
    Real bodies must lie in the real domain (log/sqrt/power > 0, arccosh > 1).
    """
    require_parity(a, Parity.EVEN, f"argument of {fn}")
    b = a.body
    if fn == "exp":
        e = cmath.exp(b)
        return _taylor(a, lambda k: e / math.factorial(k))
    if fn == "log":
        if b == 0 or (_is_real(b) and b.real < 0):
            raise DomainError(f"log needs a positive body, got {b}")
        lb = cmath.log(b)
        return _taylor(a, lambda k: lb if k == 0 else (-1) ** (k + 1) / (k * b**k))
    if fn in ("sqrt", "power"):
        s = 0.5 if fn == "sqrt" else exponent
        if s is None:
            raise ConfigurationError("power needs an exponent")
        if b == 0 or (_is_real(b) and b.real < 0):
            raise DomainError(f"{fn} needs a positive body, got {b}")
        return _taylor(a, lambda k: _binomial(s, k) * b ** (s - k))
    if fn == "cosh":
        ch, sh = cmath.cosh(b), cmath.sinh(b)
        return _taylor(a, lambda k: (ch if k % 2 == 0 else sh) / math.factorial(k))
    if fn == "sinh":
        ch, sh = cmath.cosh(b), cmath.sinh(b)
        return _taylor(a, lambda k: (sh if k % 2 == 0 else ch) / math.factorial(k))
    if fn == "tanh":
        return mul(apply_analytic("sinh", a), invert(apply_analytic("cosh", a)))
    if fn == "sech":
        return invert(apply_analytic("cosh", a))
    if fn == "arccosh":
        if not _is_real(b) or b.real <= 1:
            raise DomainError(f"arccosh needs a real body > 1, got {b}")
        root = apply_analytic("sqrt", mul(a, a) - 1)
        return apply_analytic("log", a + root)
    raise ConfigurationError(f"unknown analytic function {fn!r}")


def _binomial(s: Scalar, k: int) -> complex:
    out = 1.0
    for j in range(k):
        out *= (s - j) / (j + 1)
    return out


def exp(a: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("exp", a)


def log(a: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("log", a)


def sqrt(a: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic("sqrt", a)


# Random elements and rendering


def random_element(
    algebra: Algebra,
    rng: np.random.Generator,
    kind: Parity = Parity.EVEN,
    generators: Iterable[int] | None = None,
    complex_coeffs: bool = False,
    body: Scalar | None = None,
    scale: float = 1.0,
) -> GrassmannNumber:
    """Random element supported on ``generators`` (0-based bits, default physical)."""
    gens = list(range(algebra.num_physical) if generators is None else generators)
    terms: dict[int, complex] = {}
    for subset in range(1 << len(gens)):
        mask = 0
        for i, g in enumerate(gens):
            if subset >> i & 1:
                mask |= 1 << g
        deg = _degree(mask)
        if kind is Parity.EVEN and deg % 2:
            continue
        if kind is Parity.ODD and deg % 2 == 0:
            continue
        c = rng.uniform(-scale, scale)
        if complex_coeffs:
            c = complex(c, rng.uniform(-scale, scale))
        terms[mask] = c
    if body is not None and kind is not Parity.ODD:
        terms[0] = complex(body)
    return GrassmannNumber(algebra, terms)


def render(a: GrassmannNumber) -> str:
    """Debug text "c∅ + c·θ1θ2 + …" in ascending bitmask order."""
    if not a.terms:
        return "0"
    parts = []
    for m in sorted(a.terms):
        c = a.terms[m]
        coeff = f"{c.real:.12g}" if c.imag == 0 else f"({c.real:.12g}{c.imag:+.12g}j)"
        if m == 0:
            parts.append(coeff)
        else:
            gens = "".join(f"θ{k + 1}" for k in range(m.bit_length()) if m >> k & 1)
            parts.append(f"{coeff}·{gens}")
    return " + ".join(parts)
