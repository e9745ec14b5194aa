#!/usr/bin/env python3
"""
Staggered SBP - Main Entry Point

Command-line access to the staggered summation-by-parts operators, the
cubed-sphere grid and the linearized shallow-water experiments built on them.
"""

import argparse
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from analyzers.accuracy_analyzer import verify_accuracy_orders
from analyzers.error_analyzer import checkerboard_fraction
from analyzers.spectrum_analyzer import SpectrumAnalyzer
from discretization.coriolis import CoriolisVariant
from discretization.metric import pd_criterion
from discretization.operators2d import Discrete2DOperators
from generators.initial_conditions import (
    HOUR,
    TestCase,
    case_config,
    initial_condition,
    rossby_radius,
)
from grid.cubed_sphere import PointSet, build_cubed_sphere
from model.observers import DiagnosticsRecorder, SnapshotWriter, TimeMeanAccumulator
from model.snapshot import write_snapshot
from model.swe import ShallowWaterModel
from operators.sbp1d import InterfaceMethod1D, OperatorOrder, build_operator_set
from runners.experiment_runner import REFERENCE_NC, ExperimentRunner
from utils.config_loader import RunManifest, load_config_file, parse_bool
from utils.errors import NumericalFailure, SBPError, ValidationError
from utils.logging_setup import configure_logging
from utils.output_writer import (
    write_eigenvalues_csv,
    write_grid_csv,
    write_matrix_csv,
    write_rates_csv,
)
from utils.report_generator import ReportGenerator


__version__ = "1.0.0"

logger = logging.getLogger("staggered_sbp")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports usage errors as ValidationError."""

    def error(self, message: str):
        raise ValidationError(message, module="cli", operation="parse_and_dispatch")


def _nc_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ValidationError(
            f"bad grid list '{text}'", module="cli", operation="parse_and_dispatch"
        ) from None
    if not values:
        raise ValidationError("empty grid list", module="cli", operation="parse_and_dispatch")
    return values


def _resolved(args: argparse.Namespace) -> Dict[str, Any]:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key == "handler":
            continue
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, TestCase):
            value = value.name
        elif isinstance(value, Path):
            value = str(value)
        config[key] = value
    return config


def _start_manifest(args: argparse.Namespace, directory: Path) -> RunManifest:
    manifest = RunManifest(command=args.command, config=_resolved(args), version=__version__)
    manifest.write(directory)
    return manifest


# Subcommands ---------------------------------------------------------------
def cmd_operators(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest = _start_manifest(args, out)
    ops = build_operator_set(args.order, args.n, args.length / args.n)
    outputs: List[Path] = []
    if args.dump == "csv":
        for name, matrix in ops.dense().items():
            outputs.append(write_matrix_csv(out / f"{name}.csv", matrix))
        outputs.append(write_matrix_csv(out / "extrapolation.csv", [ops.l, ops.r]))
    if args.verify:
        report = verify_accuracy_orders(ops)
        residuals = {
            "sbp_residual": ops.sbp_residual(),
            "interpolation_residual": ops.interpolation_residual(),
        }
        generator = ReportGenerator()
        lines = generator.verification_lines(report, residuals)
        print("\n".join(lines))
        path = out / "verify.txt"
        path.write_text(generator.verification_table(report) + "\n", encoding="utf-8")
        outputs.append(path)
        manifest.results.update(report.as_key_values())
        manifest.results.update(residuals)
    manifest.complete(out, outputs)
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest = _start_manifest(args, out.parent)
    ops = build_operator_set(args.order, args.n, args.length / args.n)
    analyzer = SpectrumAnalyzer()
    eigenvalues = analyzer.spectrum(ops, args.method)
    path = write_eigenvalues_csv(out, eigenvalues)
    manifest.results.update(
        {
            "near_zero": analyzer.count_near_zero(eigenvalues),
            "min": float(eigenvalues[0]),
            "spectral_radius": float(max(abs(eigenvalues[0]), abs(eigenvalues[-1]))),
        }
    )
    logger.info(f"Wrote {len(eigenvalues)} eigenvalues to {path}")
    manifest.complete(out.parent, [path])
    return EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest = _start_manifest(args, out.parent)
    grid = build_cubed_sphere(args.nc)
    path = write_grid_csv(out, grid, args.dump)
    if args.criterion:
        ops = Discrete2DOperators(grid, args.order)
        value = pd_criterion(ops, seed=args.seed)
        manifest.results["pd_criterion"] = value
        manifest.results["sphere_area"] = ops.sphere_area()
        logger.info(f"Definiteness criterion {value:.6f} for order {args.order.value}")
    manifest.complete(out.parent, [path])
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest = _start_manifest(args, out)
    case = args.case
    config = case_config(case, args.nc, args.order, args.variant, args.dt)
    if args.debug:
        config = config.with_overrides(debug=True)
    model = ShallowWaterModel(config)
    duration = case.default_duration if args.days is None else args.days * 86400.0

    diagnostics = DiagnosticsRecorder(model.steps_for(args.diag_hours * HOUR), out / "diagnostics.csv")
    observers = [diagnostics]
    snapshots = None
    if args.snapshot_hours > 0:
        snapshots = SnapshotWriter(out / "snapshots", model.steps_for(args.snapshot_hours * HOUR))
        observers.append(snapshots)
    time_mean = None
    if args.time_mean:
        time_mean = TimeMeanAccumulator(1)
        observers.append(time_mean)

    state = initial_condition(case, model.grid, config)
    result = model.integrate(state, duration, observers, progress=not args.no_progress)

    outputs: List[Path] = [out / "diagnostics.csv"]
    if snapshots is not None:
        outputs.extend(snapshots.written)
    if time_mean is not None:
        outputs.append(write_snapshot(out / "h_time_mean.sbpf", time_mean.mean, args.nc, PointSet.H))
        manifest.results["checkerboard_fraction"] = checkerboard_fraction(time_mean.mean, model.ops)
    manifest.results.update(
        {
            "steps": result.steps,
            "energy_drift": diagnostics.relative_drift("energy"),
            "mass_drift": diagnostics.relative_drift("mass"),
            "max_relative_tangential_jump": diagnostics.max_relative_jump(),
            "rossby_radius_m": rossby_radius(model.config),
        }
    )
    logger.info(
        f"Relative drift: energy {manifest.results['energy_drift']:.3e}, "
        f"mass {manifest.results['mass_drift']:.3e}"
    )
    manifest.complete(out, outputs)
    return EXIT_OK


def cmd_converge(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest = _start_manifest(args, out)
    runner = ExperimentRunner(args.order, args.variant, progress=not args.no_progress)
    duration = None if args.days is None else args.days * 86400.0
    result = runner.convergence_study(args.case, args.nc_list, args.ref_nc, duration)

    generator = ReportGenerator()
    outputs = [write_rates_csv(out / "rates.csv", result)]
    for name, text in (
        ("report.txt", generator.generate(result)),
        ("report.json", generator.generate_json(result)),
        ("report.html", generator.generate_html(result)),
    ):
        path = out / name
        path.write_text(text, encoding="utf-8")
        outputs.append(path)
    manifest.results.update({"fitted_l2": result.fitted_l2, "fitted_linf": result.fitted_linf})
    logger.info(f"Fitted rates: l2 {result.fitted_l2}, linf {result.fitted_linf}")
    manifest.complete(out, outputs)
    return EXIT_OK


# Parser --------------------------------------------------------------------
def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="key = value defaults file")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--seed", type=int, default=0, help="Seed of every random start vector")
    parser.add_argument("--no-progress", action="store_true", help="Hide progress bars")


def _order(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--order",
        type=OperatorOrder.from_tag,
        required=required,
        default=None if required else OperatorOrder.ORDER63_WAVE,
        help="Operator family: 21, 42, 63-poly or 63-wave",
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="staggered_sbp",
        description="Staggered SBP operators and shallow-water experiments on the cubed sphere",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    commands.required = True

    sub = commands.add_parser("operators", help="Build, dump and verify 1D operators")
    _common(sub)
    _order(sub)
    sub.add_argument("--n", type=int, default=24, help="Number of cells")
    sub.add_argument("--length", type=float, default=1.0, help="Domain length")
    sub.add_argument("--dump", choices=["csv"], default=None, help="Dump matrices as CSV")
    sub.add_argument("--verify", action="store_true", help="Print the verification report")
    sub.add_argument("--out", type=str, default="operators_out", help="Output directory")
    sub.set_defaults(handler=cmd_operators)

    sub = commands.add_parser("spectrum", help="Eigenvalues of the closed-domain Laplacian")
    _common(sub)
    _order(sub)
    sub.add_argument("--n", type=int, default=24, help="Number of cells")
    sub.add_argument("--length", type=float, default=1.0, help="Domain length")
    sub.add_argument("--method", type=InterfaceMethod1D.from_tag, default=InterfaceMethod1D.SAT)
    sub.add_argument("--out", type=str, required=True, help="Eigenvalue CSV file")
    sub.set_defaults(handler=cmd_spectrum)

    sub = commands.add_parser("grid", help="Dump cubed-sphere points or metric")
    _common(sub)
    _order(sub, required=False)
    sub.add_argument("--nc", type=int, required=True, help="Cells per panel edge")
    sub.add_argument("--dump", choices=["points", "metric"], default="points")
    sub.add_argument("--criterion", action="store_true", help="Evaluate the definiteness criterion")
    sub.add_argument("--out", type=str, required=True, help="Grid CSV file")
    sub.set_defaults(handler=cmd_grid)

    sub = commands.add_parser("run", help="Integrate one test case")
    _common(sub)
    _order(sub, required=False)
    sub.add_argument("--case", type=TestCase.from_tag, required=True, help="gauss1|gauss2|gauss3|solid|poor:NU")
    sub.add_argument("--variant", type=CoriolisVariant.from_tag, default=CoriolisVariant.MAIN)
    sub.add_argument("--nc", type=int, default=48, help="Cells per panel edge")
    sub.add_argument("--days", type=float, default=None, help="Simulated days")
    sub.add_argument("--dt", type=float, default=None, help="Time step in seconds")
    sub.add_argument("--snapshot-hours", type=float, default=0.0, help="Snapshot interval, 0 for none")
    sub.add_argument("--diag-hours", type=float, default=6.0, help="Diagnostics interval")
    sub.add_argument("--time-mean", action="store_true", help="Write the time mean of h")
    sub.add_argument("--debug", action="store_true", help="Check h continuity every step")
    sub.add_argument("--out", type=str, default="run_out", help="Output directory")
    sub.set_defaults(handler=cmd_run)

    sub = commands.add_parser("converge", help="Grid-convergence study")
    _common(sub)
    _order(sub, required=False)
    sub.add_argument("--case", type=TestCase.from_tag, required=True, help="gauss1|gauss2|gauss3|solid|poor:NU")
    sub.add_argument("--variant", type=CoriolisVariant.from_tag, default=CoriolisVariant.MAIN)
    sub.add_argument("--nc-list", type=_nc_list, default=[24, 48, 96], help="Comma-separated grids")
    sub.add_argument("--ref-nc", type=int, default=REFERENCE_NC, help="Reference grid")
    sub.add_argument("--days", type=float, default=None, help="Simulated days")
    sub.add_argument("--out", type=str, default="converge_out", help="Output directory")
    sub.set_defaults(handler=cmd_converge)
    return parser


def _subparsers(parser: argparse.ArgumentParser) -> Dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return dict(action.choices)
    return {}


def apply_config_defaults(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    """Install values of a ``--config`` file as subcommand defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(list(argv))
    if not known.config:
        return
    values = load_config_file(known.config)
    subparsers = _subparsers(parser)
    command = next((arg for arg in argv if arg in subparsers), None)
    if command is None:
        return
    sub = subparsers[command]
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(values) - set(actions))
    if unknown:
        raise ValidationError(
            f"unknown config keys for '{command}': {', '.join(unknown)}",
            module="cli",
            operation="load_config",
        )
    defaults = {}
    for key, value in values.items():
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = parse_bool(value)
        else:
            defaults[key] = value
        action.required = False
    sub.set_defaults(**defaults)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and dispatch to a subcommand.

    Returns:
        0 on success, 1 on validation errors, 2 on numerical failures.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    configure_logging("--verbose" in argv)
    try:
        parser = build_parser()
        apply_config_defaults(parser, argv)
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        return args.handler(args)
    except NumericalFailure as exc:
        logger.error(str(exc))
        return EXIT_NUMERICAL
    except ValidationError as exc:
        logger.error(str(exc))
        return EXIT_VALIDATION
    except SBPError as exc:
        logger.error(str(exc))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
