"""
Command-line entry point.

    python -m limitroots enum     --spec g533 --max-depth 10 --out roots.csv
    python -m limitroots limits   --spec g533 --mode e2circ --max-depth 8
    python -m limitroots classify --spec g237
    python -m limitroots audit    --spec dihedral_affine --max-depth 12
    python -m limitroots render   --spec g533 --max-depth 12 --out g533.svg
"""
import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, TextIO, Tuple

from pydantic import ValidationError

from .config import settings
from .models.reports import AuditReport, ClassifyReport, ComponentReport, SuiteResult
from .models.system import CoxeterSpec
from .services import SystemService, export_service
from .services.coxeter import audit
from .services.coxeter.bilinear_core import FormType, GeometricModule, components, form_type, radical_cone_trivial, signature
from .services.coxeter.errors import AllOrthogonal, LimitRootsError, UnknownSystem
from .services.coxeter.limit_roots import e2_circ_points, e2_points, f0_sample
from .services.coxeter.projective_normalization import TransverseHyperplane
from .services.coxeter.render import RenderOptions, build_scene, render_svg
from .services.coxeter.root_enumeration import RootTable, audit_depth_norm, kappa_lambda, level_counts
from .services.coxeter.subsystems import exact_limit_set, parabolic_restriction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2
EXIT_AUDIT = 3

# Pair depth used for the E2 points exercised by `audit`
AUDIT_PAIR_DEPTH = 4


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# ─── Helpers ──────────────────────────────────────────────────────────────────

@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        yield f


def _index_pair(text: str) -> Tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected I,J, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two root indices, got {text!r}") from None


def _report_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _load(args: argparse.Namespace):
    service = SystemService.from_settings()
    try:
        spec = service.load(args.spec)
    except (ValidationError, LimitRootsError):
        raise
    except ValueError as e:
        raise UsageError(f"cannot read spec {args.spec!r}: {e}") from e
    m = service.build(spec)
    try:
        h = service.hyperplane(m, args.hyperplane)
    except LimitRootsError:
        raise
    except ValueError as e:
        raise UsageError(str(e)) from e
    return service, spec, m, h


# ─── Commands ─────────────────────────────────────────────────────────────────

def cmd_enum(args: argparse.Namespace) -> int:
    service, spec, m, h = _load(args)
    table = service.roots(spec, m, args.max_depth)
    with _output(args.out) as stream:
        if args.normalized:
            count = export_service.write_normalized_csv(m, h, table, stream)
        else:
            count = export_service.write_roots_csv(m, table, stream)
    logger.info("Wrote %d roots (levels %s)", count, level_counts(table))
    return EXIT_OK


def _limit_points(args, m: GeometricModule, h: TransverseHyperplane, table: RootTable):
    if args.mode == "e2":
        return e2_points(m, h, table, args.max_depth), False
    if args.mode == "e2circ":
        return e2_circ_points(m, h, table, args.max_depth), False
    sample = f0_sample(m, h, args.orbit_length, seed=args.seed)
    return list(sample.points), sample.experimental


def cmd_limits(args: argparse.Namespace) -> int:
    service, spec, m, h = _load(args)
    table = service.roots(spec, m, args.max_depth) if args.mode != "f0" else None
    points, experimental = _limit_points(args, m, h, table)
    export = export_service.limit_export(
        m, h, points, args.mode, args.max_depth, system=spec.name, experimental=experimental,
    )
    as_csv = args.format == "csv" or (args.format is None and str(args.out).endswith(".csv"))
    with _output(args.out) as stream:
        if as_csv:
            export_service.write_points_csv(export, stream)
        else:
            stream.write(export.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def classify(spec: CoxeterSpec, m: GeometricModule, table: Optional[RootTable] = None) -> ClassifyReport:
    """Signature, components and radical data of a system."""
    sig = signature(m)
    kind = form_type(m)
    comps = []
    for comp in components(m):
        sub = parabolic_restriction(m, comp).module
        comps.append(ComponentReport(generators=list(comp), form_type=form_type(sub).value))

    radical_point = None
    if sig.n_zero == 1:
        v = m.to_delta(sig.radical_basis[0])
        if abs(v.sum()) > settings.CLASS_TOL:
            radical_point = [float(c) for c in v / v.sum()]

    report = ClassifyReport(
        system=spec.name,
        rank=m.rank,
        signature=list(sig.as_tuple()),
        eigenvalues=[float(e) for e in sig.eigenvalues],
        form_type=kind.value,
        hyperbolic=kind is FormType.HYPERBOLIC,
        components=comps,
        radical_cone_trivial=radical_cone_trivial(m),
        radical_point=radical_point,
    )
    if table is not None:
        report.max_depth = table.max_depth
        report.level_counts = level_counts(table)
        try:
            kappa = kappa_lambda(m, table)
            report.kappa, report.lam = kappa.kappa, kappa.lam
        except AllOrthogonal:
            pass
    return report


def cmd_classify(args: argparse.Namespace) -> int:
    service, spec, m, _ = _load(args)
    table = service.roots(spec, m, args.max_depth) if args.enumerate else None
    report = classify(spec, m, table)
    with _output(args.out) as stream:
        stream.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def run_audit(
    spec: CoxeterSpec,
    m: GeometricModule,
    h: TransverseHyperplane,
    table: RootTable,
    trials: int = 200,
    seed: int = 0,
) -> AuditReport:
    """Residual identity, depth-norm bound, limit point containment and action suites."""
    suites: List[SuiteResult] = []

    residual = audit.residual_identity(m, table)
    suites.append(SuiteResult(
        name="residual_identity", checked=residual.checked, violations=len(residual.violations),
        details={"max_residual": residual.max_residual},
    ))

    try:
        kappa = kappa_lambda(m, table)
        violations = audit_depth_norm(m, table, kappa)
        suites.append(SuiteResult(
            name="depth_norm", checked=len(table), violations=len(violations),
            details={"kappa": kappa.kappa, "lambda": kappa.lam},
        ))
    except AllOrthogonal:
        suites.append(SuiteResult(name="depth_norm", checked=0, violations=0,
                                  details={"skipped": "all pairings vanish"}))

    points = e2_points(m, h, table, min(AUDIT_PAIR_DEPTH, table.max_depth))
    containment = audit.simplex_containment(m, h, points)
    suites.append(SuiteResult(
        name="simplex_containment", checked=containment.checked, violations=containment.violations,
    ))

    action = audit.action_invariants(m, h, table, points, trials=trials, seed=seed)
    suites.append(SuiteResult(
        name="action_invariants", checked=action.trials - action.skipped, violations=action.violations,
        details={
            "q_violations": action.q_violations,
            "line_violations": action.line_violations,
            "visibility_mismatches": action.visibility_mismatches,
            "max_abs_q": action.max_abs_q,
            "max_line_residual": action.max_line_residual,
        },
    ))

    pf = audit.perron_frobenius_check(m)
    suites.append(SuiteResult(
        name="perron_frobenius", checked=1, violations=0 if pf.holds else 1,
        details={"affine": pf.affine, "radical_cone_trivial": pf.radical_cone_trivial},
    ))

    if m.rank == 2 and abs(m.gram[0, 1]) >= 1.0 - settings.CLASS_TOL:
        ordering = audit.rank2_ordering(m, h, table.max_depth)
        suites.append(SuiteResult(
            name="rank2_ordering", checked=len(ordering.alpha_coords),
            violations=0 if ordering.holds else 1,
            details={"limit_alpha": ordering.limit_alpha},
        ))

    return AuditReport(system=spec.name, max_depth=table.max_depth, suites=suites)


def cmd_audit(args: argparse.Namespace) -> int:
    service, spec, m, h = _load(args)
    table = service.roots(spec, m, args.max_depth)
    report = run_audit(spec, m, h, table, trials=args.trials, seed=args.seed)
    with _output(args.out) as stream:
        stream.write(report.model_dump_json(indent=2) + "\n")
    sys.stderr.write(f"{report.summary()}\n")
    return EXIT_AUDIT if report.violations else EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    service, spec, m, h = _load(args)
    table = service.roots(spec, m, args.max_depth)
    layers = {}
    if args.mode in ("e2", "e2circ"):
        pair_depth = min(args.pair_depth or args.max_depth, args.max_depth)
        fn = e2_points if args.mode == "e2" else e2_circ_points
        layers[args.mode] = fn(m, h, table, pair_depth)
    elif args.mode == "f0":
        layers["f0"] = list(f0_sample(m, h, args.orbit_length, seed=args.seed).points)
    if args.exact:
        layers["exact"] = exact_limit_set(m, h)

    known = {r.index for r in table}
    for a, b in args.line:
        if a not in known or b not in known:
            raise UsageError(f"--line {a},{b}: no such root index at depth <= {table.max_depth}")

    scene = build_scene(m, h, table, layers, lines=args.line, seed=args.seed, title=spec.name or "")
    options = RenderOptions(azimuth=args.azimuth, elevation=args.elevation)
    svg = render_svg(scene, options)
    with _output(args.out) as stream:
        stream.write(svg)
    if args.data:
        with _output(args.data) as stream:
            export_service.write_scene_csv(scene, stream)
    return EXIT_OK


# ─── Parser ───────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="limitroots", description="Roots and limit roots of Coxeter groups")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--spec", required=True, help="spec JSON path or preset name")
    common.add_argument("--max-depth", type=int, default=settings.DEFAULT_DEPTH)
    common.add_argument("--hyperplane", default="default", help="default | custom:<csv>")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override the classification tolerance")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = sub.add_parser("enum", parents=[common], help="positive roots to CSV")
    p.add_argument(
        "--normalized", action="store_true",
        help="write normalized roots (barycentric coordinates, |q|) instead of coordinates over Delta",
    )
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("limits", parents=[common], help="E2 / E2-circ / F0 limit points")
    p.add_argument("--mode", choices=["e2", "e2circ", "f0"], default="e2circ")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--orbit-length", type=int, default=3)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("classify", parents=[common], help="signature and type report")
    p.add_argument("--enumerate", action="store_true", help="also enumerate roots and report kappa")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("audit", parents=[common], help="run the invariant suites")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("render", parents=[common], help="SVG picture (rank 2, 3, 4)")
    p.add_argument("--mode", choices=["none", "e2", "e2circ", "f0"], default="e2circ")
    p.add_argument("--pair-depth", type=int, default=None)
    p.add_argument("--orbit-length", type=int, default=3)
    p.add_argument("--azimuth", type=float, default=30.0)
    p.add_argument("--elevation", type=float, default=20.0)
    p.add_argument("--data", default=None, help="also write the drawn points as CSV")
    p.add_argument("--exact", action="store_true", help="overlay the exact limit set (finite, rank 2, affine)")
    p.add_argument(
        "--line", type=_index_pair, action="append", default=[], metavar="I,J",
        help="draw the line through stored roots I and J (repeatable)",
    )
    p.set_defaults(func=cmd_render)

    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.getLevelName(settings.LOG_LEVEL.upper())
    if not isinstance(level, int):
        level = logging.WARNING
    level = max(logging.DEBUG, level - 10 * verbose)
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True,
    )


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.max_depth < 1:
            raise UsageError("--max-depth must be at least 1")
        if args.tol is not None:
            if not 0.0 < args.tol < 1e-3:
                raise UsageError("--tol must lie in (0, 1e-3)")
            settings.CLASS_TOL = args.tol
    except UsageError as e:
        _report_error("UsageError", str(e))
        return EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except (UnknownSystem, ValidationError, UsageError) as e:
        _report_error(type(e).__name__, str(e))
        return EXIT_USAGE
    except (LimitRootsError, ValueError, ArithmeticError) as e:
        _report_error(type(e).__name__, str(e))
        return EXIT_COMPUTATION


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
