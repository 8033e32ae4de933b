"""Winding numbers and surface-versus-field overlap analysis.

A surface that avoids every nonzero field would make the phase vanish; when
no deformation strategy manages that, the field-free region of spacetime is
not simply connected and the phase can be nonzero.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import StrategyError, TopologyError
from ..core.geometry import accumulated_angle, as_points, trapezoid_weights
from ..core.logger import get_logger
from ..physics.fields import FREE_SPACE, INSIDE_SOLENOID, classify_points, flux_at, flux_rate
from ..physics.scenario import Scenario, computed_wire_turns
from .surface import STRATEGIES, Resolution, SpacetimeSurface, build_surface, patch_disk_crossings

logger = get_logger(__name__)

# Patch crossings smaller than this fraction of the disk count as zero.
CROSSING_TOLERANCE = 1e-9


def winding_number(curve: ArrayLike, center: ArrayLike, closed: bool = False) -> float:
    """Accumulated angle of a polyline around ``center`` divided by 2π.

    Counterclockwise is positive. A closed curve (first point repeated at the
    end if necessary) gives an integer; an open one may give any real value.

    Raises:
        TopologyError: If a vertex coincides with the center
    """
    pts = as_points(curve)
    c = np.asarray(center, dtype=float)
    if np.any(np.all(pts == c, axis=1)):
        raise TopologyError(f"Curve passes through the center {tuple(c)}")
    if closed and not np.array_equal(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[:1]])
    turns = accumulated_angle(pts, c) / (2.0 * math.pi)
    return float(round(turns)) if closed else turns


@dataclass(frozen=True)
class SurfaceOverlap:
    """Where a surface meets the fields.

    Attributes:
        strategy: Deformation strategy that produced the surface
        b_crossings: ``(patch mid-time, signed fraction of the solenoid disk)``
            for every patch crossing the solenoid while it carries flux
        e_overlap_measure: Time-integrated length of connecting curve lying
            where E is nonzero
    """

    strategy: str
    b_crossings: tuple[tuple[float, float], ...]
    e_overlap_measure: float

    @property
    def meets_b(self) -> bool:
        return bool(self.b_crossings)

    @property
    def meets_e(self) -> bool:
        return bool(self.e_overlap_measure > 0.0)

    @property
    def field_free(self) -> bool:
        return not (self.meets_b or self.meets_e)


@dataclass(frozen=True)
class TopologyReport:
    """Topological summary of a scenario."""

    wire_winding: float | None
    overlaps: dict[str, SurfaceOverlap] = field(default_factory=dict)
    simply_connected_complement: bool = True
    strategies_checked: tuple[str, ...] = ()


def surface_field_overlap(surface: SpacetimeSurface, scenario: Scenario) -> SurfaceOverlap:
    """Measure how a surface meets the magnetic flux and the electric field."""
    solenoid = scenario.solenoid
    crossings = patch_disk_crossings(surface, scenario)
    b_crossings = tuple(
        (float(t), float(c))
        for t, c in zip(surface.patch_midtimes, crossings)
        if abs(c) > CROSSING_TOLERANCE and flux_at(solenoid, t) != 0.0
    )

    times = surface.time_samples
    measure = 0.0
    previous: tuple[np.ndarray, float] | None = None

    def exposed_length(k: int) -> float:
        nonlocal previous
        curve = surface.curves[k]
        if previous is not None and np.array_equal(previous[0], curve):
            return previous[1]
        codes = classify_points(scenario, curve)
        live = (codes == FREE_SPACE) | (codes == INSIDE_SOLENOID)
        length = float(np.sum(trapezoid_weights(curve)[live]))
        previous = (curve, length)
        return length

    for k, (t, dt) in enumerate(zip(surface.patch_midtimes, np.diff(times))):
        if flux_rate(solenoid, float(t)) == 0.0:
            continue
        measure += float(dt) * 0.5 * (exposed_length(k) + exposed_length(k + 1))

    return SurfaceOverlap(strategy=surface.strategy, b_crossings=b_crossings, e_overlap_measure=measure)


def _overlaps(scenario: Scenario, resolution: Resolution) -> dict[str, SurfaceOverlap]:
    found: dict[str, SurfaceOverlap] = {}
    for strategy in STRATEGIES:
        try:
            surface = build_surface(scenario, strategy, resolution)
        except StrategyError as e:
            logger.debug(f"Skipping {strategy}: {e}")
            continue
        found[strategy] = surface_field_overlap(surface, scenario)
    return found


def deformation_obstruction(scenario: Scenario, resolution: Resolution = None) -> bool:
    """True when every buildable surface meets B or E somewhere."""
    overlaps = _overlaps(scenario, resolution)
    return bool(overlaps) and not any(o.field_free for o in overlaps.values())


def analyze_topology(scenario: Scenario, resolution: Resolution = None) -> TopologyReport:
    """Wire winding plus per-strategy overlaps and the obstruction verdict."""
    overlaps = _overlaps(scenario, resolution)
    obstructed = bool(overlaps) and not any(o.field_free for o in overlaps.values())
    winding = None if scenario.wire is None else computed_wire_turns(scenario.wire, scenario.solenoid)
    report = TopologyReport(
        wire_winding=winding,
        overlaps=overlaps,
        simply_connected_complement=not obstructed,
        strategies_checked=tuple(overlaps),
    )
    logger.info(
        f"Topology: winding={winding}, obstruction={obstructed}, "
        f"field-free strategies={[s for s, o in overlaps.items() if o.field_free]}"
    )
    return report
