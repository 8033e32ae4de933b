"""Interferometer scenarios: worldlines, Faraday cages, wires and timing."""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Literal

import numpy as np

from ..core.config import WIRE_TOLERANCE
from ..core.errors import ScenarioError, WorldlineRangeError
from ..core.geometry import (
    FloatArray,
    accumulated_angle,
    as_points,
    polyline_meets_disk,
    rotate_points,
)
from ..core.logger import get_logger
from .fields import (
    FREE_SPACE,
    INSIDE_SOLENOID,
    PhysicalConstantsConfig,
    RampShape,
    SolenoidModel,
    classify_points,
    conductor_layout_symmetric,
    flux_at,
    flux_rate,
)

logger = get_logger(__name__)

CanonicalKind = Literal["fig1", "fig2a", "fig2c", "fig3"]
ScenarioKind = Literal["fig1", "fig2a", "fig2c", "fig3", "custom"]
PathLabel = Literal["path_a", "path_b"]

CANONICAL_KINDS: tuple[CanonicalKind, ...] = ("fig1", "fig2a", "fig2c", "fig3")
FIELD_SAMPLES = 1024
POSITION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Worldline:
    """Piecewise-linear path of one interferometer arm through spacetime."""

    label: PathLabel
    times: tuple[float, ...]
    positions: tuple[tuple[float, float], ...]

    @property
    def points(self) -> FloatArray:
        return as_points(self.positions)

    @property
    def span(self) -> tuple[float, float]:
        return self.times[0], self.times[-1]

    def position(self, t: float) -> FloatArray:
        return worldline_position(self, t)


@dataclass(frozen=True)
class FaradayCage:
    """Ideal conducting disk; the total electric field vanishes inside."""

    center: tuple[float, float]
    radius: float

    def angular_extent(self, axis: tuple[float, float] | FloatArray) -> float:
        """Angle between the tangent lines drawn from ``axis`` to the cage rim."""
        distance = math.hypot(self.center[0] - axis[0], self.center[1] - axis[1])
        if distance <= self.radius:
            return 2.0 * math.pi
        return 2.0 * math.asin(self.radius / distance)


@dataclass(frozen=True)
class WirePath:
    """Thin conducting wire from cage a to cage b.

    ``turns`` is the declared winding around the solenoid axis: the winding of
    the wire closed by the straight return from R_b to R_a when that chord
    avoids the solenoid, otherwise the open-curve winding (half turns allowed).
    """

    polyline: tuple[tuple[float, float], ...]
    turns: float

    @property
    def points(self) -> FloatArray:
        return as_points(self.polyline)


@dataclass(frozen=True)
class Violation:
    """One failed scenario invariant."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class Scenario:
    """Complete description of one electrodynamic interferometer experiment."""

    solenoid: SolenoidModel
    cages: tuple[FaradayCage, ...]
    worldlines: tuple[Worldline, ...]
    wire: WirePath | None = None
    constants: PhysicalConstantsConfig = field(default_factory=PhysicalConstantsConfig)
    kind_hint: ScenarioKind = "custom"

    @property
    def cage_a(self) -> FaradayCage:
        return self.cages[0]

    @property
    def cage_b(self) -> FaradayCage:
        return self.cages[1]

    @property
    def worldline_a(self) -> Worldline:
        return self.worldlines[0]

    @property
    def worldline_b(self) -> Worldline:
        return self.worldlines[1]

    @property
    def time_span(self) -> tuple[float, float]:
        start = max(w.times[0] for w in self.worldlines)
        end = min(w.times[-1] for w in self.worldlines)
        return start, end

    @cached_property
    def dwell_window(self) -> tuple[float, float] | None:
        """Interval during which both arms sit at their cage centers, if any."""
        windows = [
            _stationary_window(w, cage.center) for w, cage in zip(self.worldlines, self.cages)
        ]
        if any(window is None for window in windows):
            return None
        start = max(window[0] for window in windows)
        end = min(window[1] for window in windows)
        return (start, end) if start < end else None

    @cached_property
    def cage_angular_extents(self) -> tuple[float, ...]:
        return tuple(cage.angular_extent(self.solenoid.axis_xy) for cage in self.cages)

    def breakpoints(self) -> list[float]:
        """Waypoint times and ramp ends inside the shared time span, sorted."""
        start, end = self.time_span
        times = {start, end, self.solenoid.ramp_start, self.solenoid.ramp_end}
        for w in self.worldlines:
            times.update(w.times)
        return sorted(t for t in times if start <= t <= end)


def _stationary_window(w: Worldline, center: tuple[float, float]) -> tuple[float, float] | None:
    """Longest run of consecutive waypoints sitting at ``center``."""
    at_center = [
        math.hypot(p[0] - center[0], p[1] - center[1]) <= POSITION_TOLERANCE for p in w.positions
    ]
    best: tuple[float, float] | None = None
    run_start: int | None = None
    for i, flag in enumerate(at_center + [False]):
        if flag and run_start is None:
            run_start = i
        elif not flag and run_start is not None:
            if i - 1 > run_start:
                window = (w.times[run_start], w.times[i - 1])
                if best is None or window[1] - window[0] > best[1] - best[0]:
                    best = window
            run_start = None
    return best


def worldline_position(w: Worldline, t: float) -> FloatArray:
    """Position on a worldline by linear interpolation between waypoints.

    Raises:
        WorldlineRangeError: If ``t`` lies outside the worldline's time span
    """
    start, end = w.span
    if not (start <= t <= end):
        raise WorldlineRangeError(f"t={t} outside {w.label} span [{start}, {end}]")
    return worldline_positions(w, np.array([t]))[0]


def worldline_positions(w: Worldline, times: FloatArray) -> FloatArray:
    """Vectorized worldline_position without range checks."""
    pts = w.points
    return np.column_stack(
        [np.interp(times, w.times, pts[:, 0]), np.interp(times, w.times, pts[:, 1])]
    )


def open_wire_winding(wire: WirePath, axis: tuple[float, float] | FloatArray) -> float:
    """Accumulated angle of the wire around the axis over 2π."""
    return accumulated_angle(wire.points, axis) / (2.0 * math.pi)


def computed_wire_turns(wire: WirePath, solenoid: SolenoidModel) -> float:
    """Winding used to check the declared ``WirePath.turns``.

    Closes the wire with the straight segment R_b → R_a when that segment
    misses the solenoid and returns the (integer) closed winding; otherwise
    returns the open-curve winding.
    """
    pts = wire.points
    chord = np.vstack([pts[-1], pts[0]])
    if polyline_meets_disk(chord, solenoid.axis, solenoid.radius):
        return open_wire_winding(wire, solenoid.axis)
    closed = np.vstack([pts, pts[:1]])
    return float(round(accumulated_angle(closed, solenoid.axis) / (2.0 * math.pi)))


def validate(scenario: Scenario) -> list[Violation]:
    """Check every scenario invariant; an empty list means the scenario is usable.

    Besides the structural checks, both worldlines are sampled densely and
    must never meet a nonzero field under the model's region classification.
    """
    violations: list[Violation] = []
    solenoid = scenario.solenoid

    if not solenoid.radius > 0:
        violations.append(Violation("SOLENOID_RADIUS", f"solenoid radius must be positive, got {solenoid.radius}"))
    if not solenoid.ramp_start < solenoid.ramp_end:
        violations.append(
            Violation("RAMP_ORDER", f"ramp_start {solenoid.ramp_start} must precede ramp_end {solenoid.ramp_end}")
        )
    if scenario.constants.hbar == 0:
        violations.append(Violation("HBAR_ZERO", "hbar must be nonzero"))

    if len(scenario.cages) != 2:
        violations.append(Violation("CAGE_COUNT", f"exactly two cages required, got {len(scenario.cages)}"))
        return violations
    if tuple(w.label for w in scenario.worldlines) != ("path_a", "path_b"):
        violations.append(Violation("WORLDLINE_LABELS", "worldlines must be (path_a, path_b) in that order"))
        return violations

    violations.extend(_check_cages(scenario))
    structural = _check_worldlines(scenario)
    violations.extend(structural)

    if not structural and solenoid.ramp_start < solenoid.ramp_end:
        dwell = scenario.dwell_window
        if dwell is None or not (dwell[0] < solenoid.ramp_start and solenoid.ramp_end < dwell[1]):
            violations.append(
                Violation("RAMP_OUTSIDE_DWELL", f"ramp outside cage dwell (dwell={dwell})")
            )

    if scenario.wire is None:
        if not any(v.code in ("CAGE_RADIUS", "CAGE_OVERLAP") for v in violations) and not conductor_layout_symmetric(scenario):
            violations.append(
                Violation(
                    "EV_MODEL_INAPPLICABLE",
                    "E_V model inapplicable: cages without a wire must be symmetric under a half turn about the axis",
                )
            )
    elif solenoid.radius > 0:
        violations.extend(_check_wire(scenario))

    if not violations:
        violations.extend(_check_fields_on_worldlines(scenario))

    for violation in violations:
        logger.debug(f"Validation: {violation}")
    return violations


def _check_cages(scenario: Scenario) -> list[Violation]:
    found: list[Violation] = []
    solenoid = scenario.solenoid
    for name, cage in zip(("a", "b"), scenario.cages):
        if not cage.radius > 0:
            found.append(Violation("CAGE_RADIUS", f"cage {name} radius must be positive, got {cage.radius}"))
            continue
        gap = math.hypot(cage.center[0] - solenoid.axis_xy[0], cage.center[1] - solenoid.axis_xy[1])
        if gap <= cage.radius + max(solenoid.radius, 0.0):
            found.append(Violation("CAGE_OVERLAP", f"cage {name} overlaps the solenoid"))
    a, b = scenario.cages
    if math.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]) <= a.radius + b.radius:
        found.append(Violation("CAGE_OVERLAP", "cages overlap each other"))
    return found


def _check_worldlines(scenario: Scenario) -> list[Violation]:
    found: list[Violation] = []
    for w in scenario.worldlines:
        if len(w.times) < 2 or len(w.times) != len(w.positions):
            found.append(Violation("WORLDLINE_TIME_ORDER", f"{w.label} needs matching times and positions (>= 2)"))
        elif any(t1 <= t0 for t0, t1 in zip(w.times, w.times[1:])):
            found.append(Violation("WORLDLINE_TIME_ORDER", f"{w.label} waypoint times must strictly increase"))
    if found:
        return found

    a, b = scenario.worldlines
    for index, place in ((0, "first"), (-1, "last")):
        same_time = a.times[index] == b.times[index]
        same_point = math.hypot(
            a.positions[index][0] - b.positions[index][0], a.positions[index][1] - b.positions[index][1]
        ) <= POSITION_TOLERANCE
        if not (same_time and same_point):
            found.append(Violation("WORLDLINE_ENDPOINTS", f"worldlines must share their {place} waypoint"))
    return found


def _check_wire(scenario: Scenario) -> list[Violation]:
    found: list[Violation] = []
    wire = scenario.wire
    assert wire is not None
    pts = wire.points
    tol = WIRE_TOLERANCE * scenario.solenoid.radius
    if len(pts) < 2 or np.hypot(*(pts[0] - np.asarray(scenario.cage_a.center))) > tol or np.hypot(
        *(pts[-1] - np.asarray(scenario.cage_b.center))
    ) > tol:
        found.append(Violation("WIRE_ENDPOINTS", "wire must run from cage a center to cage b center"))
        return found
    if polyline_meets_disk(pts, scenario.solenoid.axis, scenario.solenoid.radius):
        found.append(Violation("WIRE_PIERCES_SOLENOID", "wire intersects the solenoid"))
        return found
    computed = computed_wire_turns(wire, scenario.solenoid)
    if abs(computed - wire.turns) > 1e-6:
        found.append(
            Violation("WIRE_WINDING_MISMATCH", f"declared turns {wire.turns} but wire winds {computed:.6g}")
        )
    return found


def _check_fields_on_worldlines(scenario: Scenario) -> list[Violation]:
    start, end = scenario.time_span
    times = np.union1d(np.linspace(start, end, FIELD_SAMPLES), scenario.breakpoints())
    solenoid = scenario.solenoid
    found: list[Violation] = []
    for w in scenario.worldlines:
        positions = worldline_positions(w, times)
        codes = classify_points(scenario, positions)
        rates = np.array([flux_rate(solenoid, t) for t in times])
        fluxes = np.array([flux_at(solenoid, t) for t in times])
        e_hit = ((codes == FREE_SPACE) | (codes == INSIDE_SOLENOID)) & (rates != 0.0)
        b_hit = (codes == INSIDE_SOLENOID) & (fluxes != 0.0)
        hits = np.flatnonzero(e_hit | b_hit)
        if hits.size:
            t_hit = float(times[hits[0]])
            found.append(
                Violation("FIELD_ON_WORLDLINE", f"{w.label} meets a nonzero field at t={t_hit:.6g}")
            )
    logger.debug(f"Sampled fields at {len(times)} times along both worldlines")
    return found


@dataclass(frozen=True)
class GeometryParams:
    """Overrides for the canonical scenario geometry.

    Lengths default to multiples of the solenoid radius: cage distance 10,
    cage radius 1/20 of that, rhombus half-heights 3/4 of the cage distance.
    ``rotation`` turns the whole layout about the solenoid axis. Times mark
    the split at BS1, arrival in the cages, the ramp, departure and
    recombination at BS2.
    """

    solenoid_radius: float = 1.0
    cage_distance: float | None = None
    cage_radius: float | None = None
    inbound_height: float | None = None
    outbound_height: float | None = None
    rotation: float = 0.0
    wire_radius: float | None = None
    t_split: float = 0.0
    t_arrive: float = 1.0
    ramp_start: float = 1.5
    ramp_end: float = 2.5
    t_leave: float = 3.0
    t_recombine: float = 4.0
    ramp_shape: RampShape = "linear"


def build_canonical_scenario(
    kind: CanonicalKind,
    flux_initial: float,
    flux_final: float,
    turns: int = 1,
    geometry: GeometryParams | None = None,
    constants: PhysicalConstantsConfig | None = None,
) -> Scenario:
    """Build one of the four canonical experiments.

    fig1: no wire, solenoid enclosed by the interferometer. fig2a/fig2c: as
    fig1 plus a wire looping half a turn over (fig2a, counterclockwise from
    R_a to R_b) or under (fig2c) the solenoid. fig3: solenoid outside the
    interferometer and a wire spiralling ``turns`` times around it
    (negative turns spiral clockwise).

    Raises:
        ScenarioError: If the requested geometry fails validation
    """
    if kind not in CANONICAL_KINDS:
        raise ScenarioError(f"Unknown scenario kind '{kind}'")
    if kind == "fig3" and turns == 0:
        raise ScenarioError("fig3 needs a nonzero number of wire turns")

    g = geometry or GeometryParams()
    r_s = g.solenoid_radius
    d = g.cage_distance if g.cage_distance is not None else 10.0 * r_s
    r_c = g.cage_radius if g.cage_radius is not None else d / 20.0
    h_in = g.inbound_height if g.inbound_height is not None else 0.75 * d
    h_out = g.outbound_height if g.outbound_height is not None else 0.75 * d

    axis = np.array([2.0 * d, 0.0]) if kind == "fig3" else np.zeros(2)

    r_a, r_b = np.array([d, 0.0]), np.array([-d, 0.0])
    bs1, bs2 = np.array([0.0, -h_in]), np.array([0.0, h_out])

    wire_points: FloatArray | None = None
    declared_turns = 0.0
    if kind in ("fig2a", "fig2c"):
        wire_radius = g.wire_radius if g.wire_radius is not None else 1.4 * d
        wire_points = _half_turn_wire(r_a, r_b, wire_radius, counterclockwise=(kind == "fig2a"))
        declared_turns = 0.5 if kind == "fig2a" else -0.5
    elif kind == "fig3":
        wire_points = _spiral_wire(r_a, r_b, axis, d, max(h_in, h_out), turns)
        declared_turns = float(turns)

    layout = [r_a, r_b, bs1, bs2]
    if g.rotation:
        layout = list(rotate_points(np.vstack(layout), axis, g.rotation))
        if wire_points is not None:
            wire_points = rotate_points(wire_points, axis, g.rotation)
    r_a, r_b, bs1, bs2 = layout

    def waypoints(cage: FloatArray) -> tuple[tuple[float, float], ...]:
        return tuple(_pair(p) for p in (bs1, cage, cage, bs2))

    times = (g.t_split, g.t_arrive, g.t_leave, g.t_recombine)
    scenario = Scenario(
        solenoid=SolenoidModel(
            axis_xy=_pair(axis),
            radius=r_s,
            flux_initial=flux_initial,
            flux_final=flux_final,
            ramp_start=g.ramp_start,
            ramp_end=g.ramp_end,
            ramp_shape=g.ramp_shape,
        ),
        cages=(FaradayCage(_pair(r_a), r_c), FaradayCage(_pair(r_b), r_c)),
        worldlines=(
            Worldline("path_a", times, waypoints(r_a)),
            Worldline("path_b", times, waypoints(r_b)),
        ),
        wire=None
        if wire_points is None
        else WirePath(tuple(_pair(p) for p in wire_points), declared_turns),
        constants=constants or PhysicalConstantsConfig(),
        kind_hint=kind,
    )

    violations = validate(scenario)
    if violations:
        raise ScenarioError(
            f"{kind} geometry is invalid: " + "; ".join(str(v) for v in violations), violations
        )
    logger.info(f"Built {kind} scenario (Φi={flux_initial:g}, Φf={flux_final:g}, turns={declared_turns:g})")
    return scenario


def with_fluxes(scenario: Scenario, flux_initial: float, flux_final: float) -> Scenario:
    """Copy of ``scenario`` with a different flux ramp."""
    return replace(
        scenario, solenoid=replace(scenario.solenoid, flux_initial=flux_initial, flux_final=flux_final)
    )


def _pair(p: FloatArray) -> tuple[float, float]:
    return float(p[0]), float(p[1])


def _arc(center: FloatArray, radius: float, start: float, stop: float, n: int) -> FloatArray:
    angles = np.linspace(start, stop, n)
    return np.column_stack([center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)])


def _half_turn_wire(r_a: FloatArray, r_b: FloatArray, radius: float, counterclockwise: bool) -> FloatArray:
    """Wire leaving R_a radially, arcing half a turn around the origin, entering R_b radially."""
    stop = math.pi if counterclockwise else -math.pi
    arc = _arc(np.zeros(2), radius, 0.0, stop, 129)
    return np.vstack([r_a, arc, r_b])


def _spiral_wire(
    r_a: FloatArray, r_b: FloatArray, axis: FloatArray, d: float, height: float, turns: int
) -> FloatArray:
    """Wire from R_a that spirals ``turns`` times around an outside solenoid, then returns over the top to R_b.

    Every non-spiral leg keeps a constant or monotone bearing from the axis,
    so the closed winding equals ``turns``.
    """
    inner = 0.3 * d
    pitch = min(0.1 * d, 0.6 * d / abs(turns))
    outer = inner + pitch * abs(turns)
    n = 64 * abs(turns) + 1
    sweep = np.linspace(0.0, 2.0 * math.pi * turns, n)
    radii = np.linspace(inner, outer, n)
    spiral = np.column_stack([axis[0] - radii * np.cos(sweep), axis[1] - radii * np.sin(sweep)])
    x_out = axis[0] - outer
    top = height + 0.5 * d
    return np.vstack(
        [
            r_a,
            spiral,
            [x_out, top],
            [r_b[0] - 0.5 * d, top],
            [r_b[0] - 0.5 * d, 0.0],
            r_b,
        ]
    )
