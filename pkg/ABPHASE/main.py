#!/usr/bin/env python3
"""
ABPHASE - Command-line entry point

Verbs:
  validate  check a scenario and list violations
  run       evaluate the AB phase with one or more methods
  sweep     repeat ``run`` over a list of parameter values
  export    write a built-in scenario as a TOML scenario file
"""

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import config
from .core.errors import (
    ConfigError,
    ConvergenceError,
    EVUnmodeledError,
    LegIntervalError,
    PotentialPathError,
    ScenarioError,
    ScenarioFileError,
    StrategyError,
)
from .core.logger import get_logger, set_level
from .core.profiles import ProfileRegistry, QuadratureProfile
from .phase.potential import closed_form_phase, finite_cage_deviation, phase_eq3
from .phase.surface import PhaseResult, phase_eq1
from .physics.scenario import (
    CANONICAL_KINDS,
    GeometryParams,
    Scenario,
    build_canonical_scenario,
    validate,
    with_fluxes,
)
from .scenario_file import dump_scenario, load_scenario

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

METHODS = {
    "eq1:left": "left_of_solenoid",
    "eq1:right": "right_of_solenoid",
    "eq1:straight": "straight",
    "eq1:through_wire": "through_wire",
    "eq3": None,
    "closed_form": None,
}
DEFAULT_METHODS = "eq1:left,eq1:right,eq3,closed_form"

COLUMNS = (
    "scenario_kind",
    "method",
    "phi_i",
    "phi_f",
    "n_turns",
    "magnetic_term",
    "electric_term",
    "total",
    "closed_form",
    "abs_err",
    "quad_err",
)
SWEEP_PARAMS = ("flux_initial", "flux_final", "N", "cage_radius", "n_time")

# SKIPPED reason codes
NO_WIRE = "NO_WIRE"
EV_UNMODELED = "EV_UNMODELED"
POTENTIAL_PATH_UNDEFINED = "POTENTIAL_PATH_UNDEFINED"
NOT_APPLICABLE = "NOT_APPLICABLE"

KIND_HELP = """built-in scenario kinds:
  fig1   solenoid inside the interferometer, no wire
  fig2a  fig1 plus a wire looping over the solenoid from cage a to cage b
  fig2c  fig1 plus a wire looping under the solenoid
  fig3   solenoid outside the interferometer, wire spiralling --turns times around it
"""

_ANGLE_RE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$")


@dataclass
class RunConfig:
    """Everything ``run`` and ``sweep`` need to evaluate a scenario."""

    scenario: str
    phi_i: float | None = None
    phi_f: float | None = None
    turns: int = 1
    methods: tuple[str, ...] = tuple(DEFAULT_METHODS.split(","))
    profile: QuadratureProfile = field(default_factory=lambda: config.QUADRATURE)
    tolerance: float | None = None
    cage_radius: float | None = None
    output_format: str = "human_table"
    out: Path | None = None
    jobs: int = 1

    @property
    def is_builtin(self) -> bool:
        return self.scenario in CANONICAL_KINDS


@dataclass
class ResultRow:
    scenario_kind: str
    method: str
    phi_i: float
    phi_f: float
    n_turns: float
    magnetic_term: float | None = None
    electric_term: float | None = None
    total: float | None = None
    closed_form: float | None = None
    abs_err: float | None = None
    quad_err: float | None = None
    status: str = "OK"
    breakdown: dict[str, float] | None = None
    sweep_param: str | None = None
    sweep_value: float | None = None
    deviation: float | None = None


def parse_angle(text: str) -> float:
    """Parse a number that may be written as a multiple of pi: ``2pi``, ``-pi/2``, ``3.5``."""
    match = _ANGLE_RE.match(text)
    if not match or not (match.group(2) or match.group(3)):
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}")
    sign, number, pi, divisor = match.groups()
    value = float(number) if number else 1.0
    if pi:
        value *= math.pi
    if divisor:
        value /= float(divisor)
    return -value if sign == "-" else value


def load_config_scenario(cfg: RunConfig) -> Scenario:
    """Build or load the scenario a RunConfig names.

    Raises:
        ScenarioError: If a built-in scenario fails validation
        ScenarioFileError: If the scenario file cannot be parsed
    """
    if cfg.is_builtin:
        return build_canonical_scenario(
            cfg.scenario,
            flux_initial=0.0 if cfg.phi_i is None else cfg.phi_i,
            flux_final=1.0 if cfg.phi_f is None else cfg.phi_f,
            turns=cfg.turns,
            geometry=GeometryParams(cage_radius=cfg.cage_radius),
        )
    scenario = load_scenario(cfg.scenario)
    if cfg.phi_i is not None or cfg.phi_f is not None:
        s = scenario.solenoid
        scenario = with_fluxes(
            scenario,
            s.flux_initial if cfg.phi_i is None else cfg.phi_i,
            s.flux_final if cfg.phi_f is None else cfg.phi_f,
        )
    violations = validate(scenario)
    if violations:
        raise ScenarioError(f"{cfg.scenario} is invalid", violations)
    return scenario


def scenario_turns(scenario: Scenario, cfg: RunConfig) -> float:
    if scenario.kind_hint == "fig3" and cfg.is_builtin:
        return float(cfg.turns)
    return 0.0 if scenario.wire is None else scenario.wire.turns


def _closed_form(scenario: Scenario, cfg: RunConfig) -> float | None:
    if scenario.kind_hint not in CANONICAL_KINDS:
        return None
    s = scenario.solenoid
    return closed_form_phase(
        scenario.kind_hint, s.flux_initial, s.flux_final, int(scenario_turns(scenario, cfg)), scenario.constants
    )


def evaluate_method(scenario: Scenario, method: str, cfg: RunConfig) -> ResultRow:
    """One result row; inapplicable methods become SKIPPED rows.

    Raises:
        ConvergenceError: If a tolerance was requested and cannot be met
    """
    s = scenario.solenoid
    row = ResultRow(
        scenario_kind=scenario.kind_hint,
        method=method,
        phi_i=s.flux_initial,
        phi_f=s.flux_final,
        n_turns=scenario_turns(scenario, cfg),
    )
    row.closed_form = _closed_form(scenario, cfg)

    result: PhaseResult | None = None
    try:
        if method == "closed_form":
            if row.closed_form is None:
                row.status = f"SKIPPED:{NOT_APPLICABLE}"
                return row
            row.total = row.closed_form
        elif method == "eq3":
            result = phase_eq3(scenario)
            row.breakdown = result.breakdown.stage_differences
        else:
            if METHODS[method] == "through_wire" and scenario.wire is None:
                row.status = f"SKIPPED:{NO_WIRE}"
                return row
            result = phase_eq1(scenario, METHODS[method], cfg.profile, cfg.tolerance)
    except EVUnmodeledError as e:
        logger.warning(f"{method} skipped: {e}")
        row.status = f"SKIPPED:{EV_UNMODELED}"
        return row
    except PotentialPathError as e:
        logger.warning(f"{method} skipped: {e}")
        row.status = f"SKIPPED:{POTENTIAL_PATH_UNDEFINED}"
        return row
    except (StrategyError, LegIntervalError) as e:
        logger.warning(f"{method} skipped: {e}")
        row.status = f"SKIPPED:{NOT_APPLICABLE}"
        return row

    if result is not None:
        row.magnetic_term = float(result.magnetic_term)
        row.electric_term = float(result.electric_term)
        row.total = float(result.total)
        if result.quadrature is not None:
            row.quad_err = float(result.quadrature.error_estimate)
    if row.closed_form is not None and row.total is not None:
        row.abs_err = float(abs(row.total - row.closed_form))
    return row


def cmd_validate(cfg: RunConfig) -> int:
    """Print one violation per line; exit 0 only when there are none."""
    if cfg.is_builtin:
        try:
            load_config_scenario(cfg)
        except ScenarioError as e:
            if not e.violations:
                raise
            violations = e.violations
        else:
            violations = []
    else:
        violations = validate(load_scenario(cfg.scenario))
    for violation in violations:
        print(violation)
    return EXIT_INVALID if violations else EXIT_OK


def cmd_run(cfg: RunConfig) -> list[ResultRow]:
    """Evaluate every selected method on the configured scenario."""
    scenario = load_config_scenario(cfg)
    return [evaluate_method(scenario, method, cfg) for method in cfg.methods]


def _sweep_point(cfg: RunConfig, param: str, value: float) -> list[ResultRow]:
    point = replace(cfg)
    if param == "flux_initial":
        point.phi_i = value
    elif param == "flux_final":
        point.phi_f = value
    elif param == "N":
        point.turns = int(value)
    elif param == "cage_radius":
        point.cage_radius = value
    elif param == "n_time":
        point.profile = ProfileRegistry.with_resolution(cfg.profile, n_time=int(value))

    scenario = load_config_scenario(point)
    rows = [evaluate_method(scenario, method, point) for method in point.methods]

    deviation = None
    if param == "cage_radius":
        deviation = finite_cage_deviation(scenario, resolution=point.profile).deviation
    for row in rows:
        row.sweep_param = param
        row.sweep_value = value
        row.deviation = deviation
    return rows


def cmd_sweep(cfg: RunConfig, param: str, values: list[float]) -> list[ResultRow]:
    """Run every sweep point; rows come back in the order of ``values``.

    Raises:
        ConfigError: If the parameter does not apply to the scenario
    """
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter '{param}' (known: {', '.join(SWEEP_PARAMS)})")
    if param == "N" and cfg.scenario != "fig3":
        raise ConfigError("N sweeps need the built-in fig3 scenario")
    if param == "cage_radius" and cfg.scenario not in ("fig1",):
        raise ConfigError("cage_radius sweeps need the built-in fig1 scenario")
    if param in ("N", "n_time") and any(v != int(v) for v in values):
        raise ConfigError(f"{param} values must be integers")
    if param == "n_time" and any(v < ProfileRegistry.MIN_RESOLUTION for v in values):
        raise ConfigError(f"n_time values must be >= {ProfileRegistry.MIN_RESOLUTION}")

    with ThreadPoolExecutor(max_workers=max(1, cfg.jobs)) as pool:
        batches = list(pool.map(lambda v: _sweep_point(cfg, param, v), values))
    return [row for batch in batches for row in batch]


def _cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def format_csv(rows: list[ResultRow], sweep: bool) -> str:
    columns = (("sweep_param", "sweep_value") if sweep else ()) + COLUMNS + (("deviation",) if sweep else ()) + ("status",)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = asdict(row)
        writer.writerow([_cell(values[c]) for c in columns])
    return buffer.getvalue()


def _json_value(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return value


def format_json(rows: list[ResultRow], sweep: bool) -> str:
    records = []
    for row in rows:
        record = {k: _json_value(v) for k, v in asdict(row).items()}
        if not sweep:
            for key in ("sweep_param", "sweep_value", "deviation"):
                record.pop(key)
        records.append(record)
    return json.dumps(records, indent=2) + "\n"


def format_table(rows: list[ResultRow], sweep: bool) -> str:
    header = (["param", "value"] if sweep else []) + ["kind", "method", "magnetic", "electric", "total", "closed_form", "abs_err", "status"]

    def num(value: float | None) -> str:
        return "-" if value is None else f"{value:.10f}"

    lines = []
    ledgers = []
    for row in rows:
        cells = [row.scenario_kind, row.method, num(row.magnetic_term), num(row.electric_term), num(row.total), num(row.closed_form)]
        cells.append("-" if row.abs_err is None else f"{row.abs_err:.2e}")
        cells.append(row.status)
        if sweep:
            cells = [row.sweep_param or "", f"{row.sweep_value:g}"] + cells
        lines.append(cells)
        if row.breakdown:
            detail = "  ".join(f"{k}={v:.10f}" for k, v in row.breakdown.items())
            prefix = f"{row.sweep_param}={row.sweep_value:g} " if sweep else ""
            ledgers.append(f"{prefix}{row.method} ledger: {detail}")

    widths = [max(len(str(c)) for c in column) for column in zip(header, *lines)]
    out = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    out.extend("  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip() for cells in lines)
    if ledgers:
        out.append("")
        out.extend(ledgers)
    return "\n".join(out) + "\n"


FORMATTERS = {"human_table": format_table, "csv": format_csv, "json": format_json}


def emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abphase",
        description="Aharonov-Bohm phase of a ramped-solenoid interferometer, by surface and potential integrals.",
        epilog=KIND_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Override ABPHASE_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help=f"Built-in kind ({', '.join(CANONICAL_KINDS)}) or path to a TOML scenario file")
        p.add_argument("--phi-i", type=parse_angle, help="Initial flux (e.g. 0, 2pi, -pi/2)")
        p.add_argument("--phi-f", type=parse_angle, help="Final flux")
        p.add_argument("--turns", type=int, default=1, help="Wire turns for fig3 (negative = clockwise)")

    def eval_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--methods", default=DEFAULT_METHODS, help=f"Comma-separated subset of {', '.join(METHODS)}")
        p.add_argument("--profile", default=config.PROFILE_NAME, help="Quadrature profile (draft, reference, fine)")
        p.add_argument("--n-time", type=int, help="Time slices (overrides the profile)")
        p.add_argument("--n-curve", type=int, help="Samples per connecting curve (overrides the profile)")
        p.add_argument(
            "--tolerance",
            type=float,
            nargs="?",
            const=config.TOLERANCE,
            help=f"Refine resolution until the error estimate is below this (bare flag: {config.TOLERANCE:g})",
        )
        p.add_argument("--format", dest="output_format", choices=list(FORMATTERS), default="human_table")
        p.add_argument("--out", type=Path, help="Write results here instead of stdout")

    validate_parser = sub.add_parser("validate", help="Check a scenario and list violations")
    scenario_args(validate_parser)

    run_parser = sub.add_parser("run", help="Evaluate the phase with the selected methods")
    scenario_args(run_parser)
    eval_args(run_parser)

    sweep_parser = sub.add_parser("sweep", help="Run over a list of parameter values")
    scenario_args(sweep_parser)
    eval_args(sweep_parser)
    sweep_parser.add_argument("--param", required=True, choices=SWEEP_PARAMS, help="Parameter to sweep")
    group = sweep_parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", nargs="+", type=parse_angle, help="Explicit values")
    group.add_argument("--range", nargs=3, type=float, metavar=("START", "STOP", "STEP"), help="As numpy.arange(start, stop, step)")
    sweep_parser.add_argument("--jobs", type=int, default=config.JOBS, help="Worker threads")

    export_parser = sub.add_parser("export", help="Write a built-in scenario as TOML")
    scenario_args(export_parser)
    export_parser.add_argument("--out", type=Path, help="Write here instead of stdout")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Turn parsed arguments into a RunConfig.

    Raises:
        ConfigError: On unknown methods or resolutions below the minimum
    """
    cfg = RunConfig(scenario=args.scenario, phi_i=args.phi_i, phi_f=args.phi_f, turns=args.turns)
    if hasattr(args, "methods"):
        methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        unknown = [m for m in methods if m not in METHODS]
        if not methods or unknown:
            raise ConfigError(f"unknown or empty method list: {args.methods!r}")
        cfg.methods = methods
        try:
            base = ProfileRegistry.lookup(args.profile)
            cfg.profile = ProfileRegistry.with_resolution(base, n_time=args.n_time, n_curve=args.n_curve)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        cfg.tolerance = args.tolerance
        cfg.output_format = args.output_format
        cfg.out = args.out
    cfg.jobs = getattr(args, "jobs", 1)
    return cfg


def main(argv: list[str] | None = None) -> int:
    """Command-line entry point.

    Returns:
        Exit code: 0 success, 1 invalid scenario, 2 configuration or parse error,
        3 numerical failure
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        set_level(args.log_level)

    try:
        cfg = run_config_from_args(args)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "export":
            if not cfg.is_builtin:
                raise ConfigError("export needs a built-in scenario kind")
            emit(dump_scenario(load_config_scenario(cfg)), args.out)
            return EXIT_OK

        if args.command == "run":
            rows, sweep = cmd_run(cfg), False
        else:
            values = args.values if args.values is not None else [float(v) for v in np.arange(*args.range)]
            rows, sweep = cmd_sweep(cfg, args.param, values), True
        emit(FORMATTERS[cfg.output_format](rows, sweep), cfg.out)
        return EXIT_OK

    except ScenarioError as e:
        logger.error(str(e))
        for violation in e.violations:
            print(violation)
        if not e.violations:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        return EXIT_INVALID
    except (ScenarioFileError, ConfigError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
