import json
import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, RootModel

from supergeo.grassmann import GrassmannNumber


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    PAPER_DISCREPANCY = "paper-discrepancy"


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    max_residual: float | None  # None when the check raised
    tolerance: float
    notes: str = ""
    expected: str | None = None

    @classmethod
    def evaluate(cls, name: str, max_residual: float, tolerance: float, report_only: bool = False,
                 notes: str = "", expected: str | None = None) -> "CheckResult":
        """pass iff max_residual < tolerance; a miss on a report-only item is a discrepancy."""
        if max_residual < tolerance:
            status = CheckStatus.PASS
        else:
            status = CheckStatus.PAPER_DISCREPANCY if report_only else CheckStatus.FAIL
        return cls(name=name, status=status, max_residual=float(max_residual), tolerance=tolerance,
                   notes=notes, expected=expected)


class SuiteReport(BaseModel):
    suite: str
    seed: int
    checks: list[CheckResult]
    wall_time: float | None = None  # Only set when record_timing is on

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status is CheckStatus.FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


class CoefficientView(RootModel[dict[str, list[float]]]):
    """A Grassmann number as {mask: [re, im]}."""

    @classmethod
    def of(cls, x: GrassmannNumber) -> "CoefficientView":
        return cls({str(m): [c.real, c.imag] for m, c in sorted(x.terms.items())})


class TermView(BaseModel):
    name: str
    value: CoefficientView


class IdentityReport(BaseModel):
    kind: str
    inputs: dict[str, CoefficientView]
    lhs: CoefficientView
    rhs: CoefficientView
    residual: float
    per_term: list[TermView]


def _encode(value: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = (f"{inner}{json.dumps(k)}: {_encode(v, depth + 1)}" for k, v in sorted(value.items()))
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        return "[\n" + ",\n".join(f"{inner}{_encode(v, depth + 1)}" for v in value) + f"\n{pad}]"
    if isinstance(value, float) and math.isfinite(value):
        return f"{value:.17g}"
    return json.dumps(value)


def canonical_json(model: BaseModel) -> str:
    """Byte-stable JSON with sorted keys; floats are written as %.17g."""
    return _encode(model.model_dump(mode="json"), 0)
