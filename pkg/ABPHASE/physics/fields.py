"""Solenoid potentials, induced fields and conductor shielding rules.

Everything lives in the cross-sectional plane of an infinite solenoid
(2+1 dimensions). Fields are quasi-static: no retardation.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
from numpy.typing import ArrayLike

from ..core.config import WIRE_TOLERANCE
from ..core.errors import InteriorPointError
from ..core.geometry import FloatArray, angle_increments, as_points, distance_to_polyline, rotate_points
from ..core.logger import get_logger

if TYPE_CHECKING:
    from .scenario import Scenario

logger = get_logger(__name__)

RampShape = Literal["linear", "smoothstep"]
Region = Literal["inside_solenoid", "inside_conductor", "free_space"]

INSIDE_SOLENOID = 0
INSIDE_CONDUCTOR = 1
FREE_SPACE = 2
REGION_NAMES: tuple[Region, ...] = ("inside_solenoid", "inside_conductor", "free_space")

SYMMETRY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhysicalConstantsConfig:
    """Charge and reduced Planck constant; natural units by default."""

    charge: float = 1.0
    hbar: float = 1.0

    @property
    def coupling(self) -> float:
        """q / hbar, the prefactor that turns flux into phase."""
        return self.charge / self.hbar


@dataclass(frozen=True)
class SolenoidModel:
    """Infinite solenoid whose flux ramps from ``flux_initial`` to ``flux_final``.

    Invariants (radius > 0, ramp_start < ramp_end) are checked by scenario
    validation rather than at construction, so malformed inputs can be reported.
    """

    axis_xy: tuple[float, float]
    radius: float
    flux_initial: float
    flux_final: float
    ramp_start: float
    ramp_end: float
    ramp_shape: RampShape = "linear"

    @property
    def axis(self) -> FloatArray:
        return np.asarray(self.axis_xy, dtype=float)

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius

    @property
    def is_static(self) -> bool:
        return self.flux_initial == self.flux_final


@dataclass(frozen=True)
class FieldSample:
    """Total field at one spacetime point."""

    e_field: tuple[float, float]
    b_field: float
    region: Region


def _ramp_fraction(solenoid: SolenoidModel, t: float) -> float:
    s = (t - solenoid.ramp_start) / (solenoid.ramp_end - solenoid.ramp_start)
    if solenoid.ramp_shape == "smoothstep":
        return s * s * (3.0 - 2.0 * s)
    return s


def flux_at(solenoid: SolenoidModel, t: float) -> float:
    """Magnetic flux at time ``t``; exact end values outside the ramp window."""
    if t <= solenoid.ramp_start or solenoid.is_static:
        return solenoid.flux_initial
    if t >= solenoid.ramp_end:
        return solenoid.flux_final
    fraction = _ramp_fraction(solenoid, t)
    return solenoid.flux_initial + (solenoid.flux_final - solenoid.flux_initial) * fraction


def flux_rate(solenoid: SolenoidModel, t: float) -> float:
    """dΦ/dt; zero outside the open ramp window."""
    if solenoid.is_static or not (solenoid.ramp_start < t < solenoid.ramp_end):
        return 0.0
    duration = solenoid.ramp_end - solenoid.ramp_start
    slope = (solenoid.flux_final - solenoid.flux_initial) / duration
    if solenoid.ramp_shape == "smoothstep":
        s = (t - solenoid.ramp_start) / duration
        return slope * 6.0 * s * (1.0 - s)
    return slope


def _azimuthal_over_rho(solenoid: SolenoidModel, points: ArrayLike) -> tuple[FloatArray, FloatArray, bool]:
    """Return phi_hat/rho for each point, rho, and whether input was a single point."""
    single = np.ndim(points) == 1
    rel = as_points(points) - solenoid.axis
    rho_sq = np.sum(rel * rel, axis=1)
    if np.any(rho_sq <= solenoid.radius * solenoid.radius):
        raise InteriorPointError(
            f"Point inside the solenoid (radius {solenoid.radius}); exterior potential undefined there"
        )
    perp = np.column_stack([-rel[:, 1], rel[:, 0]]) / rho_sq[:, None]
    return perp, np.sqrt(rho_sq), single


def vector_potential(solenoid: SolenoidModel, point: ArrayLike, t: float) -> FloatArray:
    """Lorenz-gauge potential Φ(t)/(2πρ) φ̂ outside the solenoid.

    Accepts a single point ``(x, y)`` or an ``(n, 2)`` array.

    Raises:
        InteriorPointError: If any point has rho <= radius
    """
    perp, _, single = _azimuthal_over_rho(solenoid, point)
    potential = flux_at(solenoid, t) / (2.0 * math.pi) * perp
    return potential[0] if single else potential


def electric_field_EA(solenoid: SolenoidModel, point: ArrayLike, t: float) -> FloatArray:
    """Induced field E_A = -∂A/∂t outside the solenoid.

    Raises:
        InteriorPointError: If any point has rho <= radius
    """
    perp, _, single = _azimuthal_over_rho(solenoid, point)
    field = -flux_rate(solenoid, t) / (2.0 * math.pi) * perp
    return field[0] if single else field


def classify_points(scenario: "Scenario", points: ArrayLike) -> np.ndarray:
    """Region code for every point: INSIDE_SOLENOID, INSIDE_CONDUCTOR or FREE_SPACE."""
    pts = as_points(points)
    solenoid = scenario.solenoid
    codes = np.full(len(pts), FREE_SPACE, dtype=np.int8)

    conductor = np.zeros(len(pts), dtype=bool)
    for cage in scenario.cages:
        conductor |= np.hypot(*(pts - np.asarray(cage.center)).T) <= cage.radius
    if scenario.wire is not None:
        tube = WIRE_TOLERANCE * solenoid.radius
        conductor |= distance_to_polyline(pts, scenario.wire.points) <= tube

    codes[conductor] = INSIDE_CONDUCTOR
    codes[np.hypot(*(pts - solenoid.axis).T) < solenoid.radius] = INSIDE_SOLENOID
    return codes


def sample_fields(
    scenario: "Scenario", points: ArrayLike, t: float, codes: np.ndarray | None = None
) -> tuple[FloatArray, FloatArray, np.ndarray]:
    """Total E and B at many points at once.

    Args:
        scenario: Experiment description
        points: ``(n, 2)`` sample positions
        t: Time
        codes: Precomputed region codes (from classify_points) to reuse

    Returns:
        (e_field (n, 2), b_field (n,), region codes (n,))
    """
    pts = as_points(points)
    solenoid = scenario.solenoid
    if codes is None:
        codes = classify_points(scenario, pts)

    rel = pts - solenoid.axis
    rho_sq = np.sum(rel * rel, axis=1)
    perp = np.column_stack([-rel[:, 1], rel[:, 0]])
    rate = flux_rate(solenoid, t)

    e_field = np.zeros_like(pts)
    b_field = np.zeros(len(pts))

    free = codes == FREE_SPACE
    if rate != 0.0 and free.any():
        e_field[free] = -rate / (2.0 * math.pi) * perp[free] / rho_sq[free, None]

    inside = codes == INSIDE_SOLENOID
    if inside.any():
        b_field[inside] = flux_at(solenoid, t) / solenoid.area
        if rate != 0.0:
            e_field[inside] = -rate / (2.0 * math.pi * solenoid.radius**2) * perp[inside]

    return e_field, b_field, codes


def total_field_at(scenario: "Scenario", point: ArrayLike, t: float) -> FieldSample:
    """Classify a point and return the total electromagnetic field there.

    Inside conductors E vanishes; in free space E = E_A. The induced-charge
    field away from conductors is never synthesized pointwise (see
    ev_line_integral_vanishes).
    """
    e_field, b_field, codes = sample_fields(scenario, np.asarray(point, dtype=float).reshape(1, 2), t)
    return FieldSample(
        e_field=(float(e_field[0, 0]), float(e_field[0, 1])),
        b_field=float(b_field[0]),
        region=REGION_NAMES[int(codes[0])],
    )


def conductor_layout_symmetric(scenario: "Scenario") -> bool:
    """True when cages (and wire, if any) map onto themselves under a 180° turn about the axis."""
    axis = scenario.solenoid.axis
    scale = max(1.0, max(float(np.hypot(*(np.asarray(c.center) - axis))) for c in scenario.cages))
    tol = SYMMETRY_TOLERANCE * scale

    cage_a, cage_b = scenario.cages
    turned = rotate_points(np.asarray(cage_a.center), axis, math.pi)[0]
    if np.hypot(*(turned - np.asarray(cage_b.center))) > tol:
        return False
    if abs(cage_a.radius - cage_b.radius) > tol:
        return False

    if scenario.wire is not None:
        wire = scenario.wire.points
        turned_wire = rotate_points(wire, axis, math.pi)[::-1]
        if turned_wire.shape != wire.shape or np.max(np.hypot(*(turned_wire - wire).T)) > tol:
            return False
    return True


def in_symmetric_curve_family(scenario: "Scenario", curve: ArrayLike) -> bool:
    """True for the chord R_a → R_b or a half-turn arc about the axis between the cage centers."""
    pts = as_points(curve)
    axis = scenario.solenoid.axis
    r_a = np.asarray(scenario.cage_a.center, dtype=float)
    r_b = np.asarray(scenario.cage_b.center, dtype=float)
    tol = SYMMETRY_TOLERANCE * max(1.0, float(np.hypot(*(r_a - axis))))

    if np.max(distance_to_polyline(pts, np.vstack([r_a, r_b]))) <= tol:
        return True

    radii = np.hypot(*(pts - axis).T)
    if np.max(np.abs(radii - radii[0])) > tol:
        return False
    steps = angle_increments(pts, axis)
    monotone = bool(np.all(steps >= -tol)) or bool(np.all(steps <= tol))
    return monotone and abs(abs(float(np.sum(steps))) - math.pi) <= tol


def ev_line_integral_vanishes(scenario: "Scenario", curve: ArrayLike, t: float) -> bool:
    """Decide whether the induced-charge field drops out of ∫E·dr along a cage-to-cage curve.

    True when every sample of the curve lies inside a conductor (the total field
    is zero there). Otherwise the conductor layout must be symmetric under a
    half turn about the axis and the curve must be the chord between the cage
    centers or a half-turn arc about the axis. E_V is then conservative and odd
    under the half turn, its integral between the two cage centers vanishes and
    E may be replaced by E_A on the curve.
    """
    pts = as_points(curve)
    centers = [np.asarray(cage.center, dtype=float) for cage in scenario.cages]
    scale = max(1.0, scenario.solenoid.radius)
    tol = SYMMETRY_TOLERANCE * scale
    endpoints_ok = (
        np.hypot(*(pts[0] - centers[0])) <= tol and np.hypot(*(pts[-1] - centers[1])) <= tol
    )
    if not endpoints_ok:
        logger.debug(f"Curve endpoints are not the cage centers at t={t}")
        return False

    if np.all(classify_points(scenario, pts) == INSIDE_CONDUCTOR):
        return True
    if not conductor_layout_symmetric(scenario):
        return False
    if not in_symmetric_curve_family(scenario, pts):
        logger.debug(f"Curve at t={t} is neither the chord nor a half-turn arc about the axis")
        return False
    return True
