"""Physics layer for ABPHASE - solenoid fields and interferometer scenarios."""

from .fields import (
    FieldSample,
    PhysicalConstantsConfig,
    SolenoidModel,
    electric_field_EA,
    ev_line_integral_vanishes,
    flux_at,
    total_field_at,
    vector_potential,
)
from .scenario import (
    FaradayCage,
    GeometryParams,
    Scenario,
    Violation,
    WirePath,
    Worldline,
    build_canonical_scenario,
    validate,
    worldline_position,
)

__all__ = [
    "FaradayCage",
    "FieldSample",
    "GeometryParams",
    "PhysicalConstantsConfig",
    "Scenario",
    "SolenoidModel",
    "Violation",
    "WirePath",
    "Worldline",
    "build_canonical_scenario",
    "electric_field_EA",
    "ev_line_integral_vanishes",
    "flux_at",
    "total_field_at",
    "validate",
    "vector_potential",
    "worldline_position",
]
