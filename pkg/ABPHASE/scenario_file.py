"""TOML scenario files.

A file holds one scenario. Sections mirror the Scenario types field for field;
see docs/scenario_format.md for the grammar. Loading does not validate: call
``validate`` on the result to check the physics invariants.
"""

import math
import re
import tomllib
from pathlib import Path
from typing import Any

from .core.errors import ScenarioFileError
from .core.logger import get_logger
from .physics.fields import PhysicalConstantsConfig, SolenoidModel
from .physics.scenario import CANONICAL_KINDS, FaradayCage, Scenario, WirePath, Worldline

logger = get_logger(__name__)

CAGE_KEYS = ("a", "b")
PATH_KEYS = ("path_a", "path_b")
RAMP_SHAPES = ("linear", "smoothstep")

_LINE_RE = re.compile(r"at line (\d+)")


class _Reader:
    """Typed field access that reports section, field and line on failure."""

    def __init__(self, text: str, source: str) -> None:
        self.lines = text.splitlines()
        self.source = source

    def line_of(self, section: str, key: str | None = None) -> int | None:
        header = re.compile(r"^\s*\[\s*" + re.escape(section) + r"\s*\]\s*(#.*)?$")
        inside = False
        for number, line in enumerate(self.lines, start=1):
            stripped = line.strip()
            if stripped.startswith("["):
                if inside and key is not None:
                    return None
                inside = bool(header.match(line))
                if inside and key is None:
                    return number
                continue
            if inside and key is not None and re.match(re.escape(key) + r"\s*=", stripped):
                return number
        return None

    def fail(self, message: str, section: str, key: str | None = None) -> ScenarioFileError:
        field = f"{section}.{key}" if key else f"[{section}]"
        line = self.line_of(section, key)
        location = f"{self.source}:{line} {field}" if line else f"{self.source} {field}"
        return ScenarioFileError(message, location)

    def table(self, data: dict[str, Any], section: str, required: bool = True) -> dict[str, Any] | None:
        node: Any = data
        for part in section.split("."):
            node = node.get(part) if isinstance(node, dict) else None
        if node is None:
            if required:
                raise ScenarioFileError("missing section", f"{self.source} [{section}]")
            return None
        if not isinstance(node, dict):
            raise self.fail("expected a table", section)
        return node

    def number(self, table: dict[str, Any], section: str, key: str, default: float | None = None) -> float:
        if key not in table:
            if default is not None:
                return default
            raise self.fail("missing field", section, key)
        value = table[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(f"expected a number, got {value!r}", section, key)
        if not math.isfinite(value):
            raise self.fail(f"expected a finite number, got {value!r}", section, key)
        return float(value)

    def point(self, value: Any, section: str, key: str) -> tuple[float, float]:
        if (
            not isinstance(value, list)
            or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
        ):
            raise self.fail(f"expected an [x, y] pair, got {value!r}", section, key)
        return float(value[0]), float(value[1])

    def points(self, table: dict[str, Any], section: str, key: str) -> tuple[tuple[float, float], ...]:
        if key not in table:
            raise self.fail("missing field", section, key)
        value = table[key]
        if not isinstance(value, list):
            raise self.fail("expected a list of [x, y] pairs", section, key)
        return tuple(self.point(p, section, key) for p in value)

    def numbers(self, table: dict[str, Any], section: str, key: str) -> tuple[float, ...]:
        if key not in table:
            raise self.fail("missing field", section, key)
        value = table[key]
        if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
            raise self.fail("expected a list of numbers", section, key)
        return tuple(float(v) for v in value)

    def choice(self, table: dict[str, Any], section: str, key: str, options: tuple[str, ...], default: str) -> str:
        value = table.get(key, default)
        if value not in options:
            raise self.fail(f"expected one of {', '.join(options)}, got {value!r}", section, key)
        return value


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario TOML text.

    Raises:
        ScenarioFileError: On syntax errors, missing sections or mistyped fields
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _LINE_RE.search(str(e))
        location = f"{source}:{match.group(1)}" if match else source
        raise ScenarioFileError(f"invalid TOML: {e}", location) from e

    reader = _Reader(text, source)
    kind = data.get("kind", "custom")
    if kind not in (*CANONICAL_KINDS, "custom"):
        raise ScenarioFileError(f"unknown kind {kind!r}", f"{source} kind")

    sol = reader.table(data, "solenoid")
    solenoid = SolenoidModel(
        axis_xy=reader.point(sol.get("axis_xy", [0.0, 0.0]), "solenoid", "axis_xy"),
        radius=reader.number(sol, "solenoid", "radius"),
        flux_initial=reader.number(sol, "solenoid", "flux_initial"),
        flux_final=reader.number(sol, "solenoid", "flux_final"),
        ramp_start=reader.number(sol, "solenoid", "ramp_start"),
        ramp_end=reader.number(sol, "solenoid", "ramp_end"),
        ramp_shape=reader.choice(sol, "solenoid", "ramp_shape", RAMP_SHAPES, "linear"),
    )

    cages = []
    for key in CAGE_KEYS:
        section = f"cages.{key}"
        cage = reader.table(data, section)
        if "center" not in cage:
            raise reader.fail("missing field", section, "center")
        cages.append(
            FaradayCage(
                center=reader.point(cage["center"], section, "center"),
                radius=reader.number(cage, section, "radius"),
            )
        )

    worldlines = []
    for label in PATH_KEYS:
        section = f"worldlines.{label}"
        path = reader.table(data, section)
        worldlines.append(
            Worldline(
                label=label,
                times=reader.numbers(path, section, "times"),
                positions=reader.points(path, section, "positions"),
            )
        )

    wire = None
    wire_table = reader.table(data, "wire", required=False)
    if wire_table is not None:
        wire = WirePath(
            polyline=reader.points(wire_table, "wire", "polyline"),
            turns=reader.number(wire_table, "wire", "turns"),
        )

    constants = PhysicalConstantsConfig()
    const_table = reader.table(data, "constants", required=False)
    if const_table is not None:
        constants = PhysicalConstantsConfig(
            charge=reader.number(const_table, "constants", "charge", default=1.0),
            hbar=reader.number(const_table, "constants", "hbar", default=1.0),
        )

    scenario = Scenario(
        solenoid=solenoid,
        cages=tuple(cages),
        worldlines=tuple(worldlines),
        wire=wire,
        constants=constants,
        kind_hint=kind,
    )
    logger.info(f"Loaded {kind} scenario from {source}")
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    """Read and parse a scenario file.

    Raises:
        ScenarioFileError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioFileError(f"cannot read file: {e}", str(path)) from e
    return parse_scenario(text, str(path))


def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_points(points: tuple[tuple[float, float], ...]) -> str:
    return "[" + ", ".join(f"[{_fmt(x)}, {_fmt(y)}]" for x, y in points) + "]"


def dump_scenario(scenario: Scenario) -> str:
    """Render a scenario as TOML that parse_scenario reads back unchanged."""
    s = scenario.solenoid
    lines = [
        f'kind = "{scenario.kind_hint}"',
        "",
        "[solenoid]",
        f"axis_xy = [{_fmt(s.axis_xy[0])}, {_fmt(s.axis_xy[1])}]",
        f"radius = {_fmt(s.radius)}",
        f"flux_initial = {_fmt(s.flux_initial)}",
        f"flux_final = {_fmt(s.flux_final)}",
        f"ramp_start = {_fmt(s.ramp_start)}",
        f"ramp_end = {_fmt(s.ramp_end)}",
        f'ramp_shape = "{s.ramp_shape}"',
    ]
    for key, cage in zip(CAGE_KEYS, scenario.cages):
        lines += [
            "",
            f"[cages.{key}]",
            f"center = [{_fmt(cage.center[0])}, {_fmt(cage.center[1])}]",
            f"radius = {_fmt(cage.radius)}",
        ]
    for w in scenario.worldlines:
        lines += [
            "",
            f"[worldlines.{w.label}]",
            "times = [" + ", ".join(_fmt(t) for t in w.times) + "]",
            f"positions = {_fmt_points(w.positions)}",
        ]
    if scenario.wire is not None:
        lines += ["", "[wire]", f"turns = {_fmt(scenario.wire.turns)}", f"polyline = {_fmt_points(scenario.wire.polyline)}"]
    lines += [
        "",
        "[constants]",
        f"charge = {_fmt(scenario.constants.charge)}",
        f"hbar = {_fmt(scenario.constants.hbar)}",
        "",
    ]
    return "\n".join(lines)
