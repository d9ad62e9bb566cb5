"""Exception hierarchy shared by every supergeo module."""


class SuperGeoError(Exception):
    """Base class for all library errors."""


class ConfigurationError(SuperGeoError):
    """Mismatched algebras, malformed conjugation tables or settings."""


class ParityError(SuperGeoError):
    """An operation received an element of the wrong parity."""


class NonInvertibleError(SuperGeoError):
    """Element or block whose body is zero."""


class SingularMetricError(NonInvertibleError):
    """Metric whose body is degenerate at the evaluation point."""


class DomainError(SuperGeoError, ValueError):
    """Body outside the domain of a function or model."""


class CapacityError(SuperGeoError):
    """No auxiliary generators left for differentiation."""


class ChartError(SuperGeoError):
    """Chart mismatch, bad coordinate index or wrong chart shape."""


class TruncationError(SuperGeoError):
    """A series did not converge within the configured term budget."""
