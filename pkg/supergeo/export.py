"""CSV and JSON output for traces, Green grids and identity reports."""

import csv
import io
import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from pydantic import BaseModel

from supergeo.dynamics import GeodesicPath
from supergeo.errors import ConfigurationError
from supergeo.grassmann import GrassmannNumber
from supergeo.green import IdentityResult
from supergeo.schemas import CoefficientView, IdentityReport, TermView, canonical_json

logger = logging.getLogger(__name__)


class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


FORMATS = tuple(f.value for f in ExportFormat)


class TraceNode(BaseModel):
    u: float
    coords: dict[str, CoefficientView]


class TraceReport(BaseModel):
    model: str
    coordinates: list[str]
    nodes: list[TraceNode]


class GridNode(BaseModel):
    z: list[float]
    green: CoefficientView


class GreenGridReport(BaseModel):
    model: str
    theta: CoefficientView
    nodes: list[GridNode]


def _masks(values: Iterable[GrassmannNumber]) -> list[int]:
    masks = {0}
    for v in values:
        masks.update(v.terms)
    return sorted(masks)


def _flatten(prefix: str, value: GrassmannNumber, masks: Sequence[int]) -> dict[str, float]:
    row = {}
    for m in masks:
        c = value.coefficient(m)
        row[f"{prefix}.c{m}.re"] = c.real
        row[f"{prefix}.c{m}.im"] = c.imag
    return row


def trace_report(path: GeodesicPath, model: str) -> TraceReport:
    """Nodes of a sampled path, one per trace point."""
    names = list(path.trace[0].point.chart.names) if path.trace else []
    nodes = [TraceNode(u=node.u, coords={n: CoefficientView.of(x) for n, x in zip(names, node.point.coords)})
             for node in path.trace]
    return TraceReport(model=model, coordinates=names, nodes=nodes)


def trace_rows(path: GeodesicPath) -> list[dict[str, float]]:
    """``u`` then ``<coord>.c<mask>.re/.im`` for every mask seen along the trace."""
    if not path.trace:
        return []
    chart = path.trace[0].point.chart
    columns = {i: _masks(node.point.coords[i] for node in path.trace) for i in range(chart.dim)}
    rows = []
    for node in path.trace:
        row = {"u": node.u}
        for i, name in enumerate(chart.names):
            row.update(_flatten(name, node.point.coords[i], columns[i]))
        rows.append(row)
    return rows


def green_grid_report(samples: Sequence[tuple[complex, GrassmannNumber]], theta: GrassmannNumber,
                      model: str) -> GreenGridReport:
    nodes = [GridNode(z=[z.real, z.imag], green=CoefficientView.of(g)) for z, g in samples]
    return GreenGridReport(model=model, theta=CoefficientView.of(theta), nodes=nodes)


def green_grid_rows(samples: Sequence[tuple[complex, GrassmannNumber]]) -> list[dict[str, float]]:
    """``z.re, z.im`` then ``G.c<mask>.re/.im``."""
    masks = _masks(g for _, g in samples)
    return [{"z.re": z.real, "z.im": z.imag, **_flatten("G", g, masks)} for z, g in samples]


def identity_report(result: IdentityResult) -> IdentityReport:
    return IdentityReport(
        kind=result.kind.value,
        inputs={k: CoefficientView.of(v) for k, v in result.inputs.items()},
        lhs=CoefficientView.of(result.lhs),
        rhs=CoefficientView.of(result.rhs),
        residual=result.residual,
        per_term=[TermView(name=k, value=CoefficientView.of(v)) for k, v in result.per_term.items()],
    )


def render_csv(rows: Sequence[dict[str, float]]) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def write_text(text: str, out: str | Path | None) -> None:
    """Write to ``out``, or to stdout when no path is given."""
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("wrote %s", target)


def render(model: BaseModel, rows: Sequence[dict[str, float]] | None, fmt: str) -> str:
    """JSON from the report model, CSV from its flat rows."""
    if fmt == ExportFormat.JSON:
        return canonical_json(model) + "\n"
    if fmt == ExportFormat.CSV:
        if rows is None:
            raise ConfigurationError("this export has no CSV layout")
        return render_csv(rows)
    raise ConfigurationError(f"unknown format {fmt!r}")
