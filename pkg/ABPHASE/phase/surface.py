"""Spacetime surfaces between the two worldlines and the surface form of the AB phase.

The phase is q/ħ times (flux of B through the surface) minus (time integral
of ∫E·dr along each connecting curve). A surface is a stack of connecting
curves, one per time sample, each running from x_a(t) to x_b(t); consecutive
curves bound a ruled quadrilateral patch.
"""

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

import numpy as np

from ..core import config
from ..core.errors import ConvergenceError, EVUnmodeledError, StrategyError
from ..core.geometry import (
    FloatArray,
    angle_between,
    disk_quadrature,
    polyline_meets_disk,
    resample_polyline,
    trim_inside_circles,
    unit_potential_integral,
)
from ..core.logger import get_logger
from ..core.profiles import ProfileRegistry, QuadratureProfile
from ..physics.fields import INSIDE_CONDUCTOR, classify_points, ev_line_integral_vanishes, flux_at
from ..physics.scenario import Scenario, worldline_positions

if TYPE_CHECKING:
    from .potential import PathPhaseBreakdown

logger = get_logger(__name__)

Strategy = Literal["left_of_solenoid", "right_of_solenoid", "through_wire", "straight"]
Method = Literal["surface_eq1", "potential_eq3", "closed_form"]
Resolution = QuadratureProfile | tuple[int, int] | None

STRATEGIES: tuple[Strategy, ...] = ("left_of_solenoid", "right_of_solenoid", "straight", "through_wire")


def resolve_profile(resolution: Resolution) -> QuadratureProfile:
    """Turn a profile, an ``(n_time, n_curve)`` pair or None into a QuadratureProfile."""
    if resolution is None:
        return config.QUADRATURE
    if isinstance(resolution, QuadratureProfile):
        return resolution
    n_time, n_curve = resolution
    return ProfileRegistry.with_resolution(config.QUADRATURE, n_time=n_time, n_curve=n_curve)


@dataclass(frozen=True)
class QuadratureInfo:
    n_time: int
    n_curve: int
    error_estimate: float


@dataclass(frozen=True)
class PhaseResult:
    """AB phase difference (path a minus path b) in radians.

    For ``surface_eq1`` the terms are the flux term and the electric term, with
    total = magnetic_term - electric_term. For ``potential_eq3`` the magnetic
    slot holds the vector-potential legs and the electric slot the negated
    scalar-potential dwell term, so the same identity holds; the stage-by-stage
    ledger is in ``breakdown``.
    """

    magnetic_term: float
    electric_term: float
    total: float
    method: Method
    quadrature: QuadratureInfo | None = None
    strategy: str | None = None
    breakdown: "PathPhaseBreakdown | None" = None


@dataclass
class ConnectingCurveFamily:
    """Connecting curves x_a(t) → x_b(t) derived from one dwell-time curve.

    Outside the dwell the curve is the chord between the current endpoints
    plus a fraction λ(t) of the dwell curve's displacement from its own chord;
    λ grows from 0 at the split to 1 when the dwell starts and shrinks back to
    0 at recombination, so the family starts and ends as a single point.
    """

    strategy: Strategy
    dwell_curve: FloatArray
    samples_per_curve: int
    scenario: Scenario = field(repr=False)

    def __post_init__(self) -> None:
        self._s = np.linspace(0.0, 1.0, self.samples_per_curve)[:, None]
        r_a, r_b = self.dwell_curve[0], self.dwell_curve[-1]
        chord = (1.0 - self._s) * r_a + self._s * r_b
        self._displacement = self.dwell_curve - chord
        self._displacement[0] = 0.0
        self._displacement[-1] = 0.0

    def curves(self, times: FloatArray) -> FloatArray:
        """Connecting curves at every time, shape ``(len(times), samples_per_curve, 2)``."""
        scenario = self.scenario
        t_start, t_end = scenario.time_span
        dwell_start, dwell_end = scenario.dwell_window
        x_a = worldline_positions(scenario.worldline_a, times)
        x_b = worldline_positions(scenario.worldline_b, times)

        lam = np.ones(len(times))
        before = times < dwell_start
        after = times > dwell_end
        lam[before] = (times[before] - t_start) / (dwell_start - t_start)
        lam[after] = (t_end - times[after]) / (t_end - dwell_end)

        s = self._s[None, :, :]
        stack = (1.0 - s) * x_a[:, None, :] + s * x_b[:, None, :] + lam[:, None, None] * self._displacement[None]
        during = ~(before | after)
        stack[during] = self.dwell_curve
        return stack


@dataclass
class SpacetimeSurface:
    """Discretized surface: connecting curves stacked at ``time_samples``."""

    family: ConnectingCurveFamily
    time_samples: FloatArray
    curves: FloatArray
    profile: QuadratureProfile
    pierces_solenoid: bool = False

    @property
    def strategy(self) -> Strategy:
        return self.family.strategy

    @property
    def patch_midtimes(self) -> FloatArray:
        return 0.5 * (self.time_samples[:-1] + self.time_samples[1:])


def dwell_curve(scenario: Scenario, strategy: Strategy, n_curve: int) -> FloatArray:
    """Cage-to-cage curve a strategy uses while both arms sit in their cages.

    Raises:
        StrategyError: If the strategy needs a wire the scenario lacks
    """
    r_a = np.asarray(scenario.cage_a.center, dtype=float)
    r_b = np.asarray(scenario.cage_b.center, dtype=float)
    s = np.linspace(0.0, 1.0, n_curve)[:, None]

    if strategy == "straight":
        curve = (1.0 - s) * r_a + s * r_b
    elif strategy == "through_wire":
        if scenario.wire is None:
            raise StrategyError("through_wire strategy needs a wire")
        curve = resample_polyline(scenario.wire.points, n_curve, keep_vertices=True)
    elif strategy in ("left_of_solenoid", "right_of_solenoid"):
        axis = scenario.solenoid.axis
        rel_a, rel_b = r_a - axis, r_b - axis
        bearing_a = math.atan2(rel_a[1], rel_a[0])
        sweep = float(angle_between(rel_a, rel_b)) % (2.0 * math.pi)
        if strategy == "left_of_solenoid":
            sweep = sweep or 2.0 * math.pi
        else:
            sweep -= 2.0 * math.pi
        radius = (1.0 - s[:, 0]) * math.hypot(*rel_a) + s[:, 0] * math.hypot(*rel_b)
        bearing = bearing_a + sweep * s[:, 0]
        curve = np.column_stack([axis[0] + radius * np.cos(bearing), axis[1] + radius * np.sin(bearing)])
    else:
        raise StrategyError(f"Unknown strategy '{strategy}'")

    curve[0] = r_a
    curve[-1] = r_b
    return curve


def build_surface(scenario: Scenario, strategy: Strategy, resolution: Resolution = None) -> SpacetimeSurface:
    """Build the spacetime surface for one deformation strategy.

    left_of_solenoid routes the dwell curve counterclockwise around the axis
    (the solenoid on the left of the direction of travel), right_of_solenoid
    clockwise, straight uses the segment R_a → R_b and through_wire follows
    the wire. The time grid merges a uniform grid with every waypoint time and
    the ramp ends, so no patch straddles an arrival, departure or ramp edge.

    Raises:
        StrategyError: If the scenario has no dwell window or the strategy does not fit
    """
    if scenario.dwell_window is None:
        raise StrategyError("Scenario has no window where both arms sit in their cages")
    profile = resolve_profile(resolution)

    t_start, t_end = scenario.time_span
    times = np.union1d(np.linspace(t_start, t_end, profile.n_time + 1), scenario.breakpoints())

    curve = dwell_curve(scenario, strategy, profile.n_curve)
    family = ConnectingCurveFamily(strategy, curve, len(curve), scenario)
    surface = SpacetimeSurface(
        family=family,
        time_samples=times,
        curves=family.curves(times),
        profile=profile,
        pierces_solenoid=polyline_meets_disk(curve, scenario.solenoid.axis, scenario.solenoid.radius),
    )
    if surface.pierces_solenoid:
        logger.warning(f"{strategy} dwell curve passes through the solenoid; flux is split across slices")
    logger.info(f"Built {strategy} surface ({len(times)} slices x {len(curve)} samples)")
    return surface


def patch_disk_crossings(surface: SpacetimeSurface, scenario: Scenario) -> FloatArray:
    """Signed fraction of the solenoid cross-section each patch sweeps.

    Each patch is closed into a loop (a-step, next curve, b-step back,
    previous curve reversed); its winding number around every node of a disk
    quadrature is averaged with the node weights.
    """
    solenoid = scenario.solenoid
    nodes, weights = disk_quadrature(
        solenoid.axis, solenoid.radius, surface.profile.disk_rings, surface.profile.disk_sectors
    )
    curves = surface.curves
    ends_a, ends_b = curves[:, 0, :], curves[:, -1, :]

    crossings = np.zeros(len(curves) - 1)
    for node, weight in zip(nodes, weights):
        rel = curves - node
        slice_angle = np.sum(angle_between(rel[:, :-1], rel[:, 1:]), axis=1)
        step_a = angle_between(ends_a[:-1] - node, ends_a[1:] - node)
        step_b = angle_between(ends_b[:-1] - node, ends_b[1:] - node)
        loop = step_a + slice_angle[1:] - step_b - slice_angle[:-1]
        crossings += weight * np.rint(loop / (2.0 * math.pi))
    return crossings / solenoid.area


def magnetic_flux_term(surface: SpacetimeSurface, scenario: Scenario) -> float:
    """q/ħ × flux of B through the surface, each patch weighted by Φ at its mid-time."""
    crossings = patch_disk_crossings(surface, scenario)
    fluxes = np.array([flux_at(scenario.solenoid, t) for t in surface.patch_midtimes])
    return scenario.constants.coupling * float(np.sum(crossings * fluxes))


def _slice_line_integral(
    scenario: Scenario, curve: FloatArray, t: float, exterior_only: bool
) -> float:
    """∫ dr · A per unit flux along a connecting curve where E may be replaced by E_A.

    Raises:
        EVUnmodeledError: If neither conductor shielding nor symmetry removes E_V
    """
    solenoid = scenario.solenoid
    if np.all(classify_points(scenario, curve) == INSIDE_CONDUCTOR):
        return 0.0
    if not ev_line_integral_vanishes(scenario, curve, t):
        raise EVUnmodeledError(f"E_V unmodeled on this curve (t={t:.6g})")
    if exterior_only:
        curve = trim_inside_circles(
            curve,
            (scenario.cage_a.center, scenario.cage_a.radius),
            (scenario.cage_b.center, scenario.cage_b.radius),
        )
    return unit_potential_integral(curve, solenoid.axis, solenoid.radius)


def electric_term(surface: SpacetimeSurface, scenario: Scenario, exterior_only: bool = False) -> float:
    """q/ħ × ∫dt ∫dr·E over the surface.

    Only patches during which the flux changes contribute. On each, E is
    -∂A/∂t along the curve (after the shielding/symmetry check), so the patch
    contributes -ΔΦ times the unit-flux line integral of A, averaged over its
    two bounding curves.

    Args:
        surface: Surface from build_surface
        scenario: Scenario the surface was built for
        exterior_only: Integrate only outside the cages, neglecting the
            induced-charge field there (finite-cage estimate)

    Raises:
        EVUnmodeledError: If a ramp-time curve is outside model competence
    """
    solenoid = scenario.solenoid
    times = surface.time_samples
    fluxes = np.array([flux_at(solenoid, t) for t in times])
    deltas = np.diff(fluxes)

    cache: dict[int, float] = {}
    previous: tuple[FloatArray, float] | None = None

    def line_integral(k: int) -> float:
        nonlocal previous
        if k in cache:
            return cache[k]
        curve = surface.curves[k]
        if previous is not None and np.array_equal(previous[0], curve):
            value = previous[1]
        else:
            value = _slice_line_integral(scenario, curve, float(times[k]), exterior_only)
            previous = (curve, value)
        cache[k] = value
        return value

    total = 0.0
    for k in np.flatnonzero(deltas):
        mean_integral = 0.5 * (line_integral(int(k)) + line_integral(int(k) + 1))
        total -= deltas[k] * mean_integral
    return scenario.constants.coupling * total


def _evaluate(
    scenario: Scenario, strategy: Strategy, profile: QuadratureProfile, exterior_only: bool
) -> tuple[float, float]:
    surface = build_surface(scenario, strategy, profile)
    return magnetic_flux_term(surface, scenario), electric_term(surface, scenario, exterior_only)


def _halved(profile: QuadratureProfile) -> QuadratureProfile:
    return ProfileRegistry.with_resolution(
        profile,
        n_time=max(ProfileRegistry.MIN_RESOLUTION, profile.n_time // 2),
        n_curve=max(ProfileRegistry.MIN_RESOLUTION, profile.n_curve // 2),
    )


def _doubled(profile: QuadratureProfile) -> QuadratureProfile:
    return ProfileRegistry.with_resolution(profile, n_time=profile.n_time * 2, n_curve=profile.n_curve * 2)


def phase_eq1(
    scenario: Scenario,
    strategy: Strategy,
    resolution: Resolution = None,
    tolerance: float | None = None,
    exterior_only: bool = False,
) -> PhaseResult:
    """AB phase from the surface formula for one strategy.

    The error estimate compares the result with one at half the resolution.
    With a tolerance, resolution doubles until the estimate falls below it.

    Raises:
        EVUnmodeledError: Propagated from electric_term
        ConvergenceError: If the tolerance is not met at config.MAX_RESOLUTION
    """
    profile = resolve_profile(resolution)
    while True:
        magnetic, electric = _evaluate(scenario, strategy, profile, exterior_only)
        coarse_magnetic, coarse_electric = _evaluate(scenario, strategy, _halved(profile), exterior_only)
        error = abs((magnetic - electric) - (coarse_magnetic - coarse_electric))
        if tolerance is None or error <= tolerance:
            break
        if profile.n_time * 2 > config.MAX_RESOLUTION:
            raise ConvergenceError(
                f"{strategy}: error estimate {error:.3g} above {tolerance:.3g} at n_time={profile.n_time}"
            )
        logger.info(f"{strategy}: error {error:.3g} > {tolerance:.3g}, doubling resolution")
        profile = _doubled(profile)

    result = PhaseResult(
        magnetic_term=magnetic,
        electric_term=electric,
        total=magnetic - electric,
        method="surface_eq1",
        quadrature=QuadratureInfo(profile.n_time, profile.n_curve, error),
        strategy=strategy,
    )
    logger.info(
        f"eq1[{strategy}] magnetic={magnetic:.12g} electric={electric:.12g} total={result.total:.12g}"
    )
    return result
