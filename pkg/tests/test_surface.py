import math
from dataclasses import replace

import numpy as np
import pytest

from ABPHASE.core import config
from ABPHASE.core.errors import ConvergenceError, EVUnmodeledError, StrategyError
from ABPHASE.phase.potential import closed_form_phase
from ABPHASE.phase.surface import (
    build_surface,
    electric_term,
    magnetic_flux_term,
    phase_eq1,
    resolve_profile,
)
from ABPHASE.physics.fields import PhysicalConstantsConfig
from ABPHASE.physics.scenario import GeometryParams, build_canonical_scenario, worldline_positions

PI = math.pi
TOL = 1e-6
FLUXES = [0.0, PI, 2 * PI, 4 * PI]


@pytest.mark.parametrize("strategy", ["left_of_solenoid", "right_of_solenoid", "straight"])
@pytest.mark.parametrize("flux_initial", FLUXES)
@pytest.mark.parametrize("flux_final", FLUXES)
def test_fig1_total_matches_closed_form(strategy, flux_initial, flux_final, draft):
    scenario = build_canonical_scenario("fig1", flux_initial, flux_final)
    result = phase_eq1(scenario, strategy, draft)
    np.testing.assert_allclose(result.total, 0.5 * (flux_initial + flux_final), atol=TOL)
    assert result.method == "surface_eq1"
    assert math.isclose(result.total, result.magnetic_term - result.electric_term)


def test_fig1_left_decomposition(fig1, draft):
    result = phase_eq1(fig1, "left_of_solenoid", draft)
    np.testing.assert_allclose(result.magnetic_term, 2 * PI, atol=TOL)
    np.testing.assert_allclose(result.electric_term, -PI, atol=TOL)
    np.testing.assert_allclose(result.total, 3 * PI, atol=TOL)


def test_fig1_right_decomposition(fig1, draft):
    result = phase_eq1(fig1, "right_of_solenoid", draft)
    np.testing.assert_allclose(result.magnetic_term, 4 * PI, atol=TOL)
    np.testing.assert_allclose(result.electric_term, PI, atol=TOL)
    np.testing.assert_allclose(result.total, 3 * PI, atol=TOL)


def test_left_surface_collects_initial_flux_before_ramp(fig1, draft):
    surface = build_surface(fig1, "left_of_solenoid", draft)
    assert not surface.pierces_solenoid
    np.testing.assert_allclose(magnetic_flux_term(surface, fig1), 2 * PI, atol=TOL)


def test_straight_surface_is_flagged_and_splits_flux(fig1, draft):
    surface = build_surface(fig1, "straight", draft)
    assert surface.pierces_solenoid
    np.testing.assert_allclose(magnetic_flux_term(surface, fig1), 3 * PI, atol=TOL)
    assert abs(electric_term(surface, fig1)) < TOL


def test_surface_boundary_is_the_two_worldlines(fig2a, draft):
    surface = build_surface(fig2a, "through_wire", draft)
    times = surface.time_samples
    np.testing.assert_allclose(surface.curves[:, 0], worldline_positions(fig2a.worldline_a, times), atol=1e-12)
    np.testing.assert_allclose(surface.curves[:, -1], worldline_positions(fig2a.worldline_b, times), atol=1e-12)
    assert times[0] == fig2a.time_span[0] and times[-1] == fig2a.time_span[1]
    for t in fig2a.breakpoints():
        assert t in times


def test_through_wire_on_fig2a_has_no_electric_term(fig2a, draft):
    result = phase_eq1(fig2a, "through_wire", draft)
    assert result.electric_term == 0.0
    np.testing.assert_allclose(result.total, 2 * PI, atol=TOL)


def test_through_wire_on_fig2c_picks_final_flux(draft):
    scenario = build_canonical_scenario("fig2c", 2 * PI, 6 * PI)
    result = phase_eq1(scenario, "through_wire", draft)
    assert result.electric_term == 0.0
    np.testing.assert_allclose(result.magnetic_term, 6 * PI, atol=TOL)


@pytest.mark.parametrize("kind,free_flux", [("fig2a", "flux_final"), ("fig2c", "flux_initial")])
def test_fig2_total_ignores_the_other_flux(kind, free_flux, draft):
    totals = []
    for value in np.linspace(-2 * PI, 3 * PI, 6):
        fluxes = {"flux_initial": 1.3, "flux_final": 1.3, free_flux: float(value)}
        scenario = build_canonical_scenario(kind, fluxes["flux_initial"], fluxes["flux_final"])
        totals.append(phase_eq1(scenario, "through_wire", draft).total)
    assert max(totals) - min(totals) < TOL
    np.testing.assert_allclose(totals[0], 1.3, atol=TOL)


@pytest.mark.parametrize("turns", [1, 2, 3, 4, 5, -2])
def test_fig3_amplification(turns, draft):
    scenario = build_canonical_scenario("fig3", 2 * PI, 0.5, turns=turns)
    result = phase_eq1(scenario, "through_wire", draft)
    np.testing.assert_allclose(result.total, turns * (2 * PI - 0.5), atol=TOL)
    assert result.electric_term == 0.0


def test_fig3_straight_surface_misses_external_solenoid(draft):
    scenario = build_canonical_scenario("fig3", 1.0, 3.0, turns=2)
    surface = build_surface(scenario, "straight", draft)
    assert magnetic_flux_term(surface, scenario) == 0.0


def test_wire_asymmetry_blocks_free_space_curves(fig2a, draft):
    with pytest.raises(EVUnmodeledError):
        phase_eq1(fig2a, "left_of_solenoid", draft)


def test_through_wire_needs_a_wire(fig1, draft):
    with pytest.raises(StrategyError):
        build_surface(fig1, "through_wire", draft)


@pytest.mark.parametrize("strategy", ["left_of_solenoid", "straight"])
def test_static_flux_has_no_electric_term(strategy, draft):
    scenario = build_canonical_scenario("fig1", 1.5, 1.5)
    result = phase_eq1(scenario, strategy, draft)
    assert result.electric_term == 0.0
    np.testing.assert_allclose(result.total, 1.5, atol=TOL)


@pytest.mark.parametrize("kind,expected", [("fig1", 2.5), ("fig2a", 2.5), ("fig2c", 2.5), ("fig3", 0.0)])
def test_static_reduction(kind, expected, draft):
    scenario = build_canonical_scenario(kind, 2.5, 2.5, turns=3)
    strategy = "left_of_solenoid" if scenario.wire is None else "through_wire"
    np.testing.assert_allclose(phase_eq1(scenario, strategy, draft).total, expected, atol=TOL)


@pytest.mark.parametrize("kind", ["fig1", "fig2a", "fig3"])
def test_ramp_shape_does_not_change_total(kind, draft):
    strategy = "right_of_solenoid" if kind == "fig1" else "through_wire"
    linear = build_canonical_scenario(kind, -1.0, 2.0, turns=2)
    smooth = build_canonical_scenario(kind, -1.0, 2.0, turns=2, geometry=GeometryParams(ramp_shape="smoothstep"))
    np.testing.assert_allclose(
        phase_eq1(linear, strategy, draft).total, phase_eq1(smooth, strategy, draft).total, atol=TOL
    )


def test_geometry_does_not_change_total(draft):
    geometry = GeometryParams(
        solenoid_radius=0.7, cage_distance=5.0, cage_radius=0.2, inbound_height=2.0, outbound_height=6.0, rotation=2.3
    )
    scenario = build_canonical_scenario("fig1", 1.0, -3.0, geometry=geometry)
    for strategy in ("left_of_solenoid", "right_of_solenoid", "straight"):
        np.testing.assert_allclose(phase_eq1(scenario, strategy, draft).total, -1.0, atol=TOL)


def test_charge_and_hbar_scale_the_phase(draft):
    constants = PhysicalConstantsConfig(charge=2.0, hbar=0.5)
    scenario = build_canonical_scenario("fig2a", 1.0, 3.0, constants=constants)
    result = phase_eq1(scenario, "through_wire", draft)
    np.testing.assert_allclose(result.total, closed_form_phase("fig2a", 1.0, 3.0, constants=constants), atol=TOL)
    np.testing.assert_allclose(result.total, 4.0, atol=TOL)


def test_error_estimate_reported(fig1, draft):
    result = phase_eq1(fig1, "left_of_solenoid", draft)
    assert result.quadrature.n_time == draft.n_time
    assert result.quadrature.n_curve == draft.n_curve
    assert 0.0 <= result.quadrature.error_estimate < TOL


def test_tolerance_met_without_refinement(fig1, draft):
    result = phase_eq1(fig1, "right_of_solenoid", draft, tolerance=1e-8)
    assert result.quadrature.n_time == draft.n_time


def test_unreachable_tolerance_raises(fig1, monkeypatch):
    monkeypatch.setattr(config, "MAX_RESOLUTION", 64)
    with pytest.raises(ConvergenceError):
        phase_eq1(fig1, "left_of_solenoid", (32, 16), tolerance=-1.0)


def test_resolution_pair_is_accepted(fig1):
    profile = resolve_profile((40, 24))
    assert (profile.n_time, profile.n_curve) == (40, 24)
    np.testing.assert_allclose(phase_eq1(fig1, "left_of_solenoid", (40, 24)).total, 3 * PI, atol=TOL)


def test_resolution_below_minimum_is_rejected():
    with pytest.raises(ValueError):
        resolve_profile((8, 64))


def test_exterior_only_shrinks_the_electric_term(draft):
    scenario = build_canonical_scenario("fig1", 0.0, 2 * PI, geometry=GeometryParams(cage_radius=1.0))
    surface = build_surface(scenario, "left_of_solenoid", draft)
    full = electric_term(surface, scenario)
    exterior = electric_term(surface, scenario, exterior_only=True)
    assert abs(exterior) < abs(full)
    assert np.sign(exterior) == np.sign(full)


def test_unequal_cage_radii_keep_the_closed_form(draft):
    scenario = build_canonical_scenario("fig2a", 0.7, -0.2)
    bigger = replace(scenario, cages=(scenario.cage_a, replace(scenario.cage_b, radius=1.5)))
    np.testing.assert_allclose(phase_eq1(bigger, "through_wire", draft).total, 0.7, atol=TOL)
