"""Command-line entry point: ``supergeo verify | emit | models``."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from supergeo.calculus import derivative
from supergeo.config import get_settings
from supergeo.dynamics import PARAM, PathKind, closed_geodesic, integrate_ch11, integrate_geodesic
from supergeo.errors import ConfigurationError, SuperGeoError
from supergeo.export import (
    FORMATS,
    ExportFormat,
    green_grid_report,
    green_grid_rows,
    identity_report,
    render,
    trace_report,
    trace_rows,
    write_text,
)
from supergeo.grassmann import GrassmannNumber, Parity, default_algebra, require_parity
from supergeo.green import IdentityKind, ThetaContext, manin_identity, sample_grid, sphere_green, torus_green
from supergeo.models import CATALOG_IDS, TORUS_CHART, ModelId, ModelKind, chart_for, model_metric
from supergeo.schemas import canonical_json
from supergeo.suites import ALL, SUITE_NAMES, run_suite
from supergeo.transforms import C11

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
EMITTERS = ("geodesic-trace", "green-grid", "identity-report")


# Argument parsing


def parse_tolerances(items: list[str] | None) -> dict[str, float]:
    """``check=value`` pairs."""
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ConfigurationError(f"--tol expects check=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"--tol value for {name!r} is not a number: {value!r}") from None
    return out


def parse_coeffs(items: list[str] | None) -> dict[str, GrassmannNumber]:
    """``name=mask:value,...`` into Grassmann numbers; repeated names accumulate.

    Values are Python complex literals, so ``Z=0:0.3+1j,Z=3:0.1`` is
    Z = 0.3 + i + 0.1·θ₁θ₂.
    """
    algebra = default_algebra()
    terms: dict[str, dict[int, complex]] = {}
    for group in items or []:
        for entry in filter(None, (e.strip() for e in group.split(","))):
            name, sep, rest = entry.partition("=")
            mask_text, sep2, value_text = rest.partition(":")
            if not (sep and sep2 and name):
                raise ConfigurationError(f"--coeffs expects name=mask:value, got {entry!r}")
            try:
                mask, value = int(mask_text), complex(value_text.replace(" ", ""))
            except ValueError:
                raise ConfigurationError(f"cannot read coefficient {entry!r}") from None
            if mask < 0 or mask >> algebra.num_physical:
                raise ConfigurationError(f"mask {mask} uses generators outside the first {algebra.num_physical}")
            bucket = terms.setdefault(name.strip(), {})
            bucket[mask] = bucket.get(mask, 0j) + value
    return {name: GrassmannNumber(algebra, t) for name, t in terms.items()}


def _coeff(coeffs: dict[str, GrassmannNumber], name: str, default: complex | None, parity: Parity) -> GrassmannNumber:
    algebra = default_algebra()
    if name in coeffs:
        value = coeffs[name]
    elif default is None:
        raise ConfigurationError(f"--coeffs needs a value for {name!r}")
    else:
        value = algebra.scalar(default) if parity is Parity.EVEN else algebra.zero()
    try:
        require_parity(value, parity, name)
    except SuperGeoError as exc:
        raise ConfigurationError(str(exc)) from None
    return value


def _parse_pair(text: str, what: str) -> tuple[float, float]:
    a, sep, b = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(a), float(b)
    except ValueError:
        raise ConfigurationError(f"{what} expects a:b, got {text!r}") from None


def _model(text: str, coeffs: dict[str, GrassmannNumber]) -> ModelId:
    try:
        model = ModelId.parse(text, tau=coeffs.get("tau"), delta=coeffs.get("delta"))
    except SuperGeoError as exc:
        raise ConfigurationError(str(exc)) from None
    return model


# Emitters


def emit_geodesic_trace(args, coeffs):
    """CH¹|¹ traces start from Type-II (or Type-I) data; other models take coordinates from --coeffs."""
    u_range = _parse_pair(args.u_range, "--u-range")
    model = _model(args.model or "ch11", coeffs)
    if model.kind is ModelKind.CH11:
        if "c" in coeffs:
            path = closed_geodesic(PathKind.TYPE_I, u_range, c=_coeff(coeffs, "c", None, Parity.EVEN),
                                   gamma=_coeff(coeffs, "gamma", 0, Parity.ODD),
                                   zeta=_coeff(coeffs, "zeta", 0, Parity.ODD))
        else:
            path = closed_geodesic(PathKind.TYPE_II, u_range, c1=_coeff(coeffs, "c1", 1, Parity.EVEN),
                                   c2=_coeff(coeffs, "c2", 0, Parity.EVEN),
                                   omega=_coeff(coeffs, "omega", 1, Parity.EVEN),
                                   u0=_coeff(coeffs, "u0", 0, Parity.EVEN),
                                   xi=_coeff(coeffs, "xi", 0, Parity.ODD))
        start = PARAM.point(default_algebra().scalar(u_range[0]))
        z0, th0 = path.complex_at(u_range[0])
        velocity = derivative(lambda q: path.complex_at(q.even[0]), start, 0)
        numeric = integrate_ch11(C11.point(z0, th0), list(velocity), u_range, args.step)
    else:
        chart = chart_for(model)
        point = chart.point(*(_coeff(coeffs, n, None, Parity.EVEN if chart.parity_of(i) == 0 else Parity.ODD)
                              for i, n in enumerate(chart.names)))
        velocity = [_coeff(coeffs, f"d{n}", 0, Parity.EVEN if chart.parity_of(i) == 0 else Parity.ODD)
                    for i, n in enumerate(chart.names)]
        numeric = integrate_geodesic(model_metric(model), point, velocity, u_range, args.step)
    if numeric.truncated:
        logger.warning("trace stopped at u = %.6g where it left the chart", numeric.u_range[1])
    return trace_report(numeric, model.slug), trace_rows(numeric)


def _grid(text: str, n: int) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigurationError(f"--grid expects x0:x1:y0:y1, got {text!r}")
    x0, x1, y0, y1 = map(float, parts)
    xs, ys = np.linspace(x0, x1, n), np.linspace(y0, y1, n)
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def emit_green_grid(args, coeffs):
    model = _model(args.model or "sphere11", coeffs)
    theta = _coeff(coeffs, "Th", 0, Parity.ODD)
    if model.kind is ModelKind.SPHERE11:
        values = [z for z in _grid(args.grid or "-2:2:-2:2", args.points) if abs(z) > 1e-12]
        samples = sample_grid(values, theta, sphere_green)
    elif model.kind is ModelKind.TORUS:
        ctx = ThetaContext.create(model.tau, model.delta)
        t = ctx.tau.body.imag
        values = _grid(args.grid or f"0.05:0.95:{0.05 * t}:{0.95 * t}", args.points)
        values = [z for z in values if abs(z - round(z.real)) > 1e-9]
        samples = sample_grid(values, theta, lambda pt: torus_green(pt, ctx), chart=TORUS_CHART)
    else:
        raise ConfigurationError(f"no Green function for model {model.slug}")
    return green_grid_report(samples, theta, model.slug), green_grid_rows(samples)


def emit_identity_report(args, coeffs):
    kind = IdentityKind(args.identity)
    z = _coeff(coeffs, "Z", 0.3 + 0.2j, Parity.EVEN)
    theta = _coeff(coeffs, "Th", 0, Parity.ODD)
    ctx = None
    if kind is IdentityKind.TORUS:
        ctx = ThetaContext.create(_coeff(coeffs, "tau", 1j, Parity.EVEN), _coeff(coeffs, "delta", 0, Parity.ODD))
    result = manin_identity(kind, z, theta, ctx, args.variant)
    return identity_report(result), None


EMIT = {"geodesic-trace": emit_geodesic_trace, "green-grid": emit_green_grid,
        "identity-report": emit_identity_report}


# Commands


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, parse_tolerances(args.tol))
    text = canonical_json(report) + "\n"
    if args.out:
        write_text(text, Path(args.out) / f"{args.suite}.json")
    else:
        write_text(text, None)
    for c in report.checks:
        logger.info("%-40s %-17s residual=%s tol=%.1e", c.name, c.status.value, c.max_residual, c.tolerance)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_emit(args) -> int:
    coeffs = parse_coeffs(args.coeffs)
    model, rows = EMIT[args.what](args, coeffs)
    fmt = args.format or (ExportFormat.CSV.value if rows is not None else ExportFormat.JSON.value)
    write_text(render(model, rows, fmt), args.out)
    return EXIT_OK


def cmd_models(args) -> int:
    for model in CATALOG_IDS:
        print(model)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supergeo", description="Supergeometry verification harness")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True, choices=(*SUITE_NAMES, ALL))
    verify.add_argument("--seed", type=int, default=None, help="defaults to SUPERGEO_SEED")
    verify.add_argument("--tol", action="append", metavar="CHECK=VALUE", help="override a check tolerance")
    verify.add_argument("--out", help="directory for <suite>.json (stdout otherwise)")
    verify.set_defaults(handler=cmd_verify)

    emit = sub.add_parser("emit", help="write traces, Green grids or identity reports")
    emit.add_argument("what", choices=EMITTERS)
    emit.add_argument("--model", help="catalog id, see `supergeo models`")
    emit.add_argument("--coeffs", action="append", metavar="NAME=MASK:VALUE,...")
    emit.add_argument("--format", choices=FORMATS)
    emit.add_argument("--out", help="output file (stdout otherwise)")
    emit.add_argument("--u-range", default="0:1", help="parameter interval a:b for traces")
    emit.add_argument("--step", type=float, default=None, help="RK4 step")
    emit.add_argument("--grid", help="x0:x1:y0:y1 for Green grids")
    emit.add_argument("--points", type=int, default=9, help="grid nodes per axis")
    emit.add_argument("--identity", default=IdentityKind.TORUS.value, choices=[k.value for k in IdentityKind])
    emit.add_argument("--variant", default="bosonic", choices=("bosonic", "shifted"))
    emit.set_defaults(handler=cmd_emit)

    models = sub.add_parser("models", help="list catalog ids")
    models.set_defaults(handler=cmd_models)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        print(f"supergeo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL
