"""
hlsim: EP atlas mapping, protocol evolution, sweeps and self-validation.

Examples:
  # Atlas samples plus the numeric scan for every order
  hlsim ep-map --out results/atlas.csv

  # Hopping protocol at the default parameters, with the trace history
  hlsim evolve --kind hopping --q0 1 --history results/hopping_history.csv

  # F(q0) and P(q0) of all three families
  hlsim sweep --kind all --q0-grid 0:1:21 --out results/sweep.csv

  # Invariant suite; exit code 3 on any failed check
  hlsim validate
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError

from src.atlas.analytic import atlas_frame, sample_branches
from src.atlas.scanner import match_to_branches, scan_numeric
from src.checks.suite import run_validation_suite
from src.config.models import EpMapConfig, GridAxis, RunConfig
from src.config.settings import settings
from src.constants import (
    BRANCH_MATCH_RADIUS,
    EVOLVE_COLUMNS,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    PACKAGE_VERSION,
)
from src.core.exceptions import (
    IntegrationFault,
    ParameterRangeError,
    SweepPointError,
    UndefinedFidelityError,
)
from src.core.states import ReferenceStates
from src.evolution.integrator import integrate
from src.evolution.metrics import eigenvalue_gaps, state_fidelity
from src.evolution.sweep import sweep_parameter, sweep_q0
from src.evolution.trajectories import build_trajectory
from src.storage.writer import ResultWriter
from src.utils.logger import get_logger, setup_logger

logger = get_logger("hlsim")

PROTOCOL_KINDS = ["tilted", "flat", "hopping"]
INITIAL_STATES = ["mixed", "plus", "minus", "up", "down"]
NUMERICAL_FAULTS = (
    IntegrationFault,
    UndefinedFidelityError,
    SweepPointError,
    np.linalg.LinAlgError,
    ArithmeticError,
)

# flag destination -> protocol parameter name
PROTOCOL_FLAGS = {
    "q0": "q0",
    "chi": "chi",
    "T": "T",
    "T1": "T1",
    "T2": "T2",
    "alpha_i": "alpha_i",
    "alpha_ii": "alpha_ii",
    "omega": "omega",
}


class UsageError(Exception):
    """Bad command line; exits with code 1 instead of argparse's 2."""


class CliArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _chi(text: str) -> int:
    try:
        value = float(text)
    except ValueError:
        value = None
    if value not in (1.0, -1.0):
        raise argparse.ArgumentTypeError(f"chi={text} outside valid range {{+1, -1}}")
    return int(value)


def _grid(text: str) -> Dict[str, Any]:
    try:
        return GridAxis.parse(text).model_dump()
    except (ValueError, ValidationError) as e:
        raise argparse.ArgumentTypeError(f"invalid grid '{text}': {e}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Run config YAML; flags override its values")
    parser.add_argument("--out", help="Result file (default: <OUTPUT_DATA_PATH>/<command>.<fmt>)")
    parser.add_argument("--format", choices=["csv", "json", "parquet"], help="Output format")
    parser.add_argument("--steps-per-unit-time", type=int, help="RK4 step density (>= 100)")
    parser.add_argument("--tol", type=float, help="Relative rank tolerance of the classifier")
    parser.add_argument("--seed", type=int, help="Seed of the random invariant samples")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR (default: LOG_LEVEL)")


def _add_protocol_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q0", type=float, help="Postselection parameter in [0, 1]")
    parser.add_argument("--chi", type=_chi, help="Winding direction +1 or -1")
    parser.add_argument("--T", type=float, help="Total evolution time")
    parser.add_argument("--T1", type=float, help="Hopping sweep duration")
    parser.add_argument("--T2", type=float, help="Hopping dwell duration")
    parser.add_argument("--alpha-i", type=float, help="Weak dissipation of the hopping sweeps")
    parser.add_argument("--alpha-ii", type=float, help="Strong dissipation of the hopping dwell")
    parser.add_argument("--omega", type=float, help="Field strength")
    parser.add_argument("--initial", choices=INITIAL_STATES, help="Initial state")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="hlsim",
        description="Hybrid-Liouvillian qubit simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n", 2)[2],
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, parser_class=CliArgumentParser
    )

    ep_map = subparsers.add_parser("ep-map", help="Export the EP atlas and the numeric scan")
    _add_common_flags(ep_map)
    ep_map.add_argument("--target", type=int, nargs="+", choices=[2, 3, 4],
                        help="Degeneracy orders to scan for")
    ep_map.add_argument("--samples", type=int, help="Analytic samples per branch family")
    ep_map.add_argument("--workers", type=int, help="Processes for the scan")
    ep_map.add_argument("--alpha-grid", type=_grid, help="Seed grid start:stop:count for alpha")
    ep_map.add_argument("--theta-grid", type=_grid, help="Seed grid start:stop:count for theta")
    ep_map.add_argument("--q-grid", type=_grid, help="Seed grid start:stop:count for q")

    evolve = subparsers.add_parser("evolve", help="Integrate one protocol run")
    _add_common_flags(evolve)
    evolve.add_argument("--kind", choices=PROTOCOL_KINDS, help="Protocol family")
    _add_protocol_flags(evolve)
    evolve.add_argument("--history", help="Write the trace history to this file")
    evolve.add_argument("--gaps", help="Write the eigenvalue gaps along the path to this file")

    sweep = subparsers.add_parser("sweep", help="F and P over a parameter grid")
    _add_common_flags(sweep)
    sweep.add_argument("--kind", choices=PROTOCOL_KINDS + ["all"], help="Protocol family")
    _add_protocol_flags(sweep)
    sweep.add_argument("--q0-grid", type=_grid, help="q0 grid start:stop:count")
    sweep.add_argument("--param", help="Protocol parameter to sweep instead of q0")
    sweep.add_argument("--grid", type=_grid, help="Grid start:stop:count for --param")
    sweep.add_argument("--workers", type=int, help="Processes for the sweep")

    validate = subparsers.add_parser("validate", help="Run the invariant suites")
    _add_common_flags(validate)
    validate.add_argument("--suite", nargs="+",
                          choices=["liouvillian", "spectral", "atlas", "evolution"],
                          help="Suites to run (default: all)")
    validate.add_argument("--samples", type=int, help="Random samples per suite")
    validate.add_argument("--atlas-samples", type=int, help="Analytic samples per branch")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested RunConfig fragment holding only the flags that were given."""
    overrides: Dict[str, Any] = {"command": args.command}
    for flag, key in (("out", "output"), ("format", "format"),
                      ("steps_per_unit_time", "steps_per_unit_time"), ("seed", "seed")):
        if getattr(args, flag) is not None:
            overrides[key] = getattr(args, flag)
    if args.tol is not None:
        overrides["tolerances"] = {"rank_tol": args.tol}

    if args.command == "ep-map":
        section = {}
        if args.target:
            section["targets"] = sorted(set(args.target))
        if args.samples is not None:
            section["samples"] = args.samples
        if args.workers is not None:
            section["workers"] = args.workers
        axes = {"alpha": args.alpha_grid, "theta": args.theta_grid, "q": args.q_grid}
        if any(axes.values()):
            defaults = EpMapConfig()
            section["grids"] = {
                target: {**defaults.grid_for(target).model_dump(),
                         **{name: axis for name, axis in axes.items() if axis}}
                for target in (2, 3, 4)
            }
        overrides["ep_map"] = section

    elif args.command in ("evolve", "sweep"):
        parameters = {
            name: getattr(args, flag)
            for flag, name in PROTOCOL_FLAGS.items()
            if getattr(args, flag) is not None
        }
        section: Dict[str, Any] = {}
        if parameters:
            section["parameters"] = parameters
        if args.initial:
            section["initial"] = args.initial
        if args.command == "evolve":
            if args.kind:
                section["kind"] = args.kind
            if args.history:
                section["history_path"] = args.history
            if args.gaps:
                section["gaps_path"] = args.gaps
        else:
            if args.kind:
                section["kinds"] = PROTOCOL_KINDS if args.kind == "all" else [args.kind]
            if args.workers is not None:
                section["workers"] = args.workers
            if args.param and args.q0_grid:
                raise UsageError("hlsim sweep: --q0-grid and --param are mutually exclusive")
            if args.param:
                if not args.grid:
                    raise UsageError("hlsim sweep: --param needs --grid start:stop:count")
                section["parameter"] = args.param
                section["grid"] = args.grid
            elif args.q0_grid or args.q0 is not None:
                section["parameter"] = "q0"
                section["grid"] = args.q0_grid or {"start": args.q0, "stop": args.q0, "count": 1}
                parameters.pop("q0", None)
        overrides[args.command] = section

    elif args.command == "validate":
        section = {}
        if args.suite:
            section["suites"] = args.suite
        if args.samples is not None:
            section["random_samples"] = args.samples
        if args.atlas_samples is not None:
            section["atlas_samples"] = args.atlas_samples
        overrides["validate"] = section
    return overrides


def format_validation_error(error: ValidationError) -> str:
    """One ``field: message (got value)`` line per failed constraint."""
    lines = []
    for item in error.errors():
        field = ".".join(str(part) for part in item["loc"]) or "config"
        lines.append(f"{field}: {item['msg']} (got {item.get('input')!r})")
    return "\n".join(lines)


def _output_path(config: RunConfig) -> Path:
    if config.output:
        return Path(config.output)
    return settings.get_output_path(f"{config.command}.{config.format}")


def _write(config: RunConfig, frame: pd.DataFrame, summary: Dict[str, Any]) -> Path:
    writer = ResultWriter(version=PACKAGE_VERSION)
    path = writer.write_table(frame, _output_path(config), config.format)
    writer.write_metadata(path, config.model_dump(mode="json", by_alias=True), summary)
    return path


def _log_summary(title: str, summary: Dict[str, Any]) -> None:
    logger.info("=" * 60)
    logger.info(title)
    logger.info("=" * 60)
    for key, value in summary.items():
        logger.info(f"{key}: {value}")


def cmd_ep_map(config: RunConfig) -> int:
    """Analytic branch samples plus deduplicated numeric scan records."""
    section = config.ep_map
    points = sample_branches(section.samples, line_endpoints=True) if section.samples else []

    workers = settings.config.scan_workers
    if "workers" in section.model_fields_set:
        workers = section.workers
    records, warnings, scans = [], 0, {}
    for target in section.targets:
        result = scan_numeric(section.grid_for(target), target, config.tolerances, workers=workers)
        records.extend(result.records)
        warnings += result.skipped + result.rejected
        scans[f"order_{target}"] = result.summary

    deviations = [distance for _, distance in match_to_branches(records)]
    far = sum(distance > BRANCH_MATCH_RADIUS for distance in deviations)
    if far:
        logger.warning(f"{far} numeric solutions lie farther than {BRANCH_MATCH_RADIUS:g} "
                       f"from every analytic branch")
    warnings += far

    frame = atlas_frame(points, records)
    counts = frame["branch"].value_counts()
    summary = {
        "rows": len(frame),
        "counts": {branch: int(counts[branch]) for branch in sorted(counts.index)},
        "fourth_order_records": sum(r.order == 4 for r in records),
        "max_deviation": max(deviations, default=0.0),
        "warnings": warnings,
        "scans": scans,
    }
    path = _write(config, frame, summary)
    summary["output"] = str(path)
    _log_summary("EP-MAP SUMMARY", summary)
    return EXIT_OK


def cmd_evolve(config: RunConfig) -> int:
    """One protocol run: F (both variants), P and the final state entries."""
    section = config.evolve
    trajectory = build_trajectory(section.kind, **section.parameters)
    result = integrate(
        trajectory,
        ReferenceStates.initial_state(section.initial),
        steps_per_unit_time=config.steps_per_unit_time,
        fault_tol=config.tolerances.fault_tol,
    )
    rho = result.final_state.matrix
    row = {
        "kind": trajectory.kind,
        "q0": trajectory.q0,
        "chi": trajectory.chi,
        "T": trajectory.T,
        "F_normalized": state_fidelity(result.final_state, trajectory.chi),
        "F_raw": state_fidelity(result.final_state, trajectory.chi, normalized=False),
        "P": result.probability,
        "rho_uu": rho[0, 0].real,
        "re_rho_ud": rho[0, 1].real,
        "im_rho_ud": rho[0, 1].imag,
        "rho_dd": rho[1, 1].real,
        "steps": result.diagnostics.steps,
        "max_local_error": result.diagnostics.max_local_error,
    }
    writer = ResultWriter(version=PACKAGE_VERSION)
    if section.history_path:
        writer.write_table(result.history_frame(), section.history_path, config.format)
    if section.gaps_path:
        writer.write_table(eigenvalue_gaps(trajectory), section.gaps_path, config.format)

    summary = {key: row[key] for key in ("kind", "q0", "chi", "T", "F_normalized", "P")}
    summary["trajectory"] = result.metadata
    path = _write(config, pd.DataFrame([row], columns=EVOLVE_COLUMNS), summary)
    summary["output"] = str(path)
    _log_summary("EVOLVE SUMMARY", summary)
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    """F and P of each requested family over the configured grid."""
    section = config.sweep
    parameters = dict(section.parameters)
    chi = int(parameters.pop("chi", 1))
    values = section.grid.values()
    options = {
        "initial": section.initial,
        "steps_per_unit_time": config.steps_per_unit_time,
        "workers": section.workers,
        "record_errors": True,
    }

    frames: List[pd.DataFrame] = []
    for kind in section.kinds:
        if section.parameter == "q0":
            parameters.pop("q0", None)
            frames.append(sweep_q0(kind, values, chi, parameters, **options))
        else:
            frames.append(sweep_parameter(kind, section.parameter, values, chi, parameters,
                                          **options))
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()

    errors = int(frame["error"].notna().sum()) if "error" in frame else 0
    summary = {
        "kinds": list(section.kinds),
        "parameter": section.parameter,
        "points": len(frame),
        "errors": errors,
    }
    if errors:
        logger.warning(f"{errors} sweep points failed; see the error column")
    path = _write(config, frame, summary)
    summary["output"] = str(path)
    _log_summary("SWEEP SUMMARY", summary)
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    """Invariant suites; exit code 3 when any check fails."""
    report = run_validation_suite(
        config.validate_,
        seed=config.seed,
        steps_per_unit_time=config.steps_per_unit_time,
        tolerances=config.tolerances,
    )
    summary = {
        "checks": len(report.results),
        "failed": [f"{r.suite}/{r.name}" for r in report.failures],
        "passed": report.passed,
    }
    path = _write(config, report.frame(), summary)
    summary["output"] = str(path)
    _log_summary("VALIDATION SUMMARY", summary)
    return EXIT_OK if report.passed else EXIT_VALIDATION


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "ep-map": cmd_ep_map,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = settings.load_run_config(args.config, _overrides(args))
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except UsageError as e:
        return _usage_error(str(e))
    except ValidationError as e:
        return _usage_error(format_validation_error(e))
    except (OSError, yaml.YAMLError) as e:
        return _usage_error(f"cannot read config: {e}")

    try:
        setup_logger("hlsim", log_level=args.log_level or settings.config.log_level,
                     log_file=settings.config.log_file)
    except ValueError as e:
        return _usage_error(str(e))
    logger.info("=" * 60)
    logger.info(f"hlsim {config.command} (version {PACKAGE_VERSION})")
    logger.info("=" * 60)

    try:
        return COMMANDS[config.command](config)
    except ParameterRangeError as e:
        logger.error(f"Invalid parameter: {e}")
        return _usage_error(str(e))
    except ValidationError as e:
        logger.error("Invalid parameters")
        return _usage_error(format_validation_error(e))
    except NUMERICAL_FAULTS as e:
        details = getattr(e, "diagnostics", None)
        logger.error(f"Numerical fault: {e}" + (f" {details}" if details else ""), exc_info=True)
        print(f"numerical fault: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
