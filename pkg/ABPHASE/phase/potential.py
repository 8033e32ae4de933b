"""Potential form of the AB phase: vector-potential legs plus a scalar-potential dwell.

Outside the ramp each arm accumulates q/ħ ∫A·dx while moving. During the ramp
both arms sit still inside their cages and accumulate -q/ħ ∫V dt; only the
potential difference between the cages is fixed, by a wire joining them or by
the symmetry of the conductor layout. Cage b is taken as the potential
reference, so its scalar term is always zero.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..core.errors import LegIntervalError, PotentialPathError, ScenarioError, StrategyError
from ..core.geometry import unit_potential_integral
from ..core.logger import get_logger
from ..physics.fields import PhysicalConstantsConfig, conductor_layout_symmetric, flux_at
from ..physics.scenario import CANONICAL_KINDS, CanonicalKind, PathLabel, Scenario, worldline_positions
from .surface import PhaseResult, Resolution, Strategy, phase_eq1

logger = get_logger(__name__)


@dataclass(frozen=True)
class PathPhaseBreakdown:
    """Stage-by-stage phase of each arm, as ``(path_a, path_b)`` pairs in radians."""

    vector_leg_in: tuple[float, float]
    scalar_dwell: tuple[float, float]
    vector_leg_out: tuple[float, float]

    @property
    def total_per_path(self) -> tuple[float, float]:
        return (
            self.vector_leg_in[0] + self.scalar_dwell[0] + self.vector_leg_out[0],
            self.vector_leg_in[1] + self.scalar_dwell[1] + self.vector_leg_out[1],
        )

    @property
    def difference(self) -> float:
        total_a, total_b = self.total_per_path
        return total_a - total_b

    @property
    def stage_differences(self) -> dict[str, float]:
        return {
            "inbound": self.vector_leg_in[0] - self.vector_leg_in[1],
            "dwell": self.scalar_dwell[0] - self.scalar_dwell[1],
            "outbound": self.vector_leg_out[0] - self.vector_leg_out[1],
        }


@dataclass(frozen=True)
class CageDeviation:
    """Effect of finite cage size on the electric term.

    Attributes:
        deviation: Phase with the field integrated only outside the cages,
            minus the point-cage phase
        scale: |q(Φf - Φi)/(2ħ)|, the size of the full electric term
        ratio: |deviation| / scale (NaN when the flux does not change)
        angular_extent: Angle cage a subtends at the axis
        estimate: angular_extent / π, the small-cage estimate of ``ratio``
    """

    deviation: float
    scale: float
    ratio: float
    angular_extent: float
    estimate: float


def _worldline(scenario: Scenario, path: PathLabel):
    for w in scenario.worldlines:
        if w.label == path:
            return w
    raise ValueError(f"Scenario has no worldline '{path}'")


def vector_potential_leg(scenario: Scenario, path: PathLabel, t_interval: tuple[float, float]) -> float:
    """q/ħ ∫A·dx along one arm over a time interval with constant flux.

    Raises:
        LegIntervalError: If the interval overlaps the open ramp window
    """
    lo, hi = t_interval
    solenoid = scenario.solenoid
    if lo > hi:
        raise LegIntervalError(f"Leg interval [{lo}, {hi}] is reversed")
    if not solenoid.is_static and lo < solenoid.ramp_end and hi > solenoid.ramp_start:
        raise LegIntervalError(
            f"Leg [{lo}, {hi}] overlaps the ramp ({solenoid.ramp_start}, {solenoid.ramp_end})"
        )

    w = _worldline(scenario, path)
    inner = [t for t in w.times if lo < t < hi]
    points = worldline_positions(w, np.array([lo, *inner, hi]))
    flux = flux_at(solenoid, 0.5 * (lo + hi))
    return scenario.constants.coupling * flux * unit_potential_integral(points, solenoid.axis, solenoid.radius)


def dwell_scalar_phase(scenario: Scenario) -> float:
    """Scalar-potential phase difference -q/ħ ∫(V_a - V_b) dt over the dwell.

    With a wire the potential drop is the line integral of -∂A/∂t along it
    (the total field vanishes inside the wire). Without a wire but with a
    half-turn-symmetric layout the cages sit at equal potential.

    Raises:
        PotentialPathError: If neither a wire nor symmetry fixes V_a - V_b
    """
    solenoid = scenario.solenoid
    if scenario.wire is not None:
        wire_back = scenario.wire.points[::-1]
        potential_drop = -(solenoid.flux_final - solenoid.flux_initial) * unit_potential_integral(
            wire_back, solenoid.axis, solenoid.radius
        )
        return -scenario.constants.coupling * potential_drop
    if conductor_layout_symmetric(scenario):
        return 0.0
    raise PotentialPathError("No wire joins the cages and the layout is not symmetric")


def phase_eq3(scenario: Scenario) -> PhaseResult:
    """AB phase from the potential form, with the per-path ledger attached.

    Raises:
        StrategyError: If the scenario has no dwell window
        LegIntervalError: If a worldline moves while the flux ramps
        PotentialPathError: Propagated from dwell_scalar_phase
    """
    if scenario.dwell_window is None:
        raise StrategyError("Scenario has no window where both arms sit in their cages")
    t_start, t_end = scenario.time_span
    dwell_start, dwell_end = scenario.dwell_window

    labels = (scenario.worldline_a.label, scenario.worldline_b.label)
    legs_in = tuple(vector_potential_leg(scenario, p, (t_start, dwell_start)) for p in labels)
    legs_out = tuple(vector_potential_leg(scenario, p, (dwell_end, t_end)) for p in labels)
    breakdown = PathPhaseBreakdown(
        vector_leg_in=legs_in,
        scalar_dwell=(dwell_scalar_phase(scenario), 0.0),
        vector_leg_out=legs_out,
    )

    stages = breakdown.stage_differences
    vector_part = stages["inbound"] + stages["outbound"]
    result = PhaseResult(
        magnetic_term=vector_part,
        electric_term=0.0 - stages["dwell"],
        total=breakdown.difference,
        method="potential_eq3",
        breakdown=breakdown,
    )
    logger.info(
        f"eq3 inbound={stages['inbound']:.12g} dwell={stages['dwell']:.12g} "
        f"outbound={stages['outbound']:.12g} total={result.total:.12g}"
    )
    return result


def closed_form_phase(
    kind: CanonicalKind,
    flux_initial: float,
    flux_final: float,
    turns: int = 1,
    constants: PhysicalConstantsConfig | None = None,
) -> float:
    """Analytic AB phase for the four canonical experiments.

    Raises:
        ScenarioError: For an unknown kind
    """
    coupling = (constants or PhysicalConstantsConfig()).coupling
    if kind == "fig1":
        return coupling * 0.5 * (flux_initial + flux_final)
    if kind == "fig2a":
        return coupling * flux_initial
    if kind == "fig2c":
        return coupling * flux_final
    if kind == "fig3":
        return coupling * turns * (flux_initial - flux_final)
    raise ScenarioError(f"No closed form for scenario kind '{kind}' (known: {', '.join(CANONICAL_KINDS)})")


def finite_cage_deviation(
    scenario: Scenario, strategy: Strategy = "left_of_solenoid", resolution: Resolution = None
) -> CageDeviation:
    """Compare the point-cage phase with one that integrates E only outside the cages.

    Meaningful for wire-free symmetric layouts, where E may be replaced by E_A
    on the whole connecting curve.

    Raises:
        StrategyError: If the scenario has a wire or an asymmetric layout
    """
    if scenario.wire is not None or not conductor_layout_symmetric(scenario):
        raise StrategyError("Finite-cage deviation needs a wire-free symmetric layout")

    point_cage = phase_eq1(scenario, strategy, resolution)
    exterior = phase_eq1(scenario, strategy, resolution, exterior_only=True)
    deviation = exterior.total - point_cage.total

    solenoid = scenario.solenoid
    scale = abs(scenario.constants.coupling * (solenoid.flux_final - solenoid.flux_initial) / 2.0)
    ratio = abs(deviation) / scale if scale > 0.0 else math.nan
    extent = scenario.cage_angular_extents[0]
    logger.info(f"Finite-cage deviation {deviation:.6g} (ratio {ratio:.6g}, estimate {extent / math.pi:.6g})")
    return CageDeviation(
        deviation=deviation,
        scale=scale,
        ratio=ratio,
        angular_extent=extent,
        estimate=extent / math.pi,
    )
