"""Phase layer for ABPHASE - surface and potential integrators plus topology checks."""

from .potential import (
    CageDeviation,
    PathPhaseBreakdown,
    closed_form_phase,
    dwell_scalar_phase,
    finite_cage_deviation,
    phase_eq3,
    vector_potential_leg,
)
from .surface import (
    STRATEGIES,
    ConnectingCurveFamily,
    PhaseResult,
    SpacetimeSurface,
    build_surface,
    electric_term,
    magnetic_flux_term,
    phase_eq1,
)
from .topology import (
    SurfaceOverlap,
    TopologyReport,
    analyze_topology,
    deformation_obstruction,
    surface_field_overlap,
    winding_number,
)

__all__ = [
    "STRATEGIES",
    "CageDeviation",
    "ConnectingCurveFamily",
    "PathPhaseBreakdown",
    "PhaseResult",
    "SpacetimeSurface",
    "SurfaceOverlap",
    "TopologyReport",
    "analyze_topology",
    "build_surface",
    "closed_form_phase",
    "deformation_obstruction",
    "dwell_scalar_phase",
    "electric_term",
    "finite_cage_deviation",
    "magnetic_flux_term",
    "phase_eq1",
    "phase_eq3",
    "surface_field_overlap",
    "vector_potential_leg",
    "winding_number",
]
