import math
from dataclasses import replace

import numpy as np
import pytest

from ABPHASE.core.errors import LegIntervalError, PotentialPathError, ScenarioError, StrategyError
from ABPHASE.phase.potential import (
    closed_form_phase,
    dwell_scalar_phase,
    finite_cage_deviation,
    phase_eq3,
    vector_potential_leg,
)
from ABPHASE.physics.scenario import GeometryParams, Worldline, build_canonical_scenario

PI = math.pi
TOL = 1e-6


def test_fig2a_ledger(fig2a):
    result = phase_eq3(fig2a)
    stages = result.breakdown.stage_differences
    np.testing.assert_allclose(stages["inbound"], PI, atol=TOL)
    np.testing.assert_allclose(stages["dwell"], -PI, atol=TOL)
    np.testing.assert_allclose(stages["outbound"], 2 * PI, atol=TOL)
    np.testing.assert_allclose(result.total, 2 * PI, atol=TOL)
    assert result.method == "potential_eq3"


def test_fig2c_dwell_has_opposite_sign(fig2c):
    result = phase_eq3(fig2c)
    np.testing.assert_allclose(result.breakdown.stage_differences["dwell"], PI, atol=TOL)
    np.testing.assert_allclose(result.total, 4 * PI, atol=TOL)


def test_fig1_has_no_scalar_term(fig1):
    result = phase_eq3(fig1)
    assert result.breakdown.scalar_dwell == (0.0, 0.0)
    np.testing.assert_allclose(result.total, 3 * PI, atol=TOL)


def test_reference_cage_carries_no_scalar_phase(fig2a):
    assert phase_eq3(fig2a).breakdown.scalar_dwell[1] == 0.0


def test_terms_add_up_to_total(fig2a):
    result = phase_eq3(fig2a)
    np.testing.assert_allclose(result.magnetic_term - result.electric_term, result.total, atol=1e-12)
    total_a, total_b = result.breakdown.total_per_path
    np.testing.assert_allclose(total_a - total_b, result.total, atol=1e-12)


@pytest.mark.parametrize("kind", ["fig1", "fig2a", "fig2c", "fig3"])
@pytest.mark.parametrize("fluxes", [(0.0, 1.0), (2 * PI, 4 * PI), (-1.5, 0.25), (3.0, 3.0)])
def test_matches_closed_form(kind, fluxes):
    scenario = build_canonical_scenario(kind, *fluxes, turns=2)
    np.testing.assert_allclose(phase_eq3(scenario).total, closed_form_phase(kind, *fluxes, turns=2), atol=TOL)


def test_fig3_static_flux_gives_nothing():
    scenario = build_canonical_scenario("fig3", 1.7, 1.7, turns=4)
    np.testing.assert_allclose(phase_eq3(scenario).total, 0.0, atol=TOL)


@pytest.mark.parametrize("turns", [1, 2, 3, 4, 5, -1, -3])
def test_fig3_scales_with_turns(turns):
    scenario = build_canonical_scenario("fig3", 1.0, 0.0, turns=turns)
    np.testing.assert_allclose(phase_eq3(scenario).total, float(turns), atol=TOL)


def test_fig3_reversed_ramp_flips_sign():
    up = phase_eq3(build_canonical_scenario("fig3", 0.0, 2.0, turns=2)).total
    down = phase_eq3(build_canonical_scenario("fig3", 2.0, 0.0, turns=2)).total
    np.testing.assert_allclose(up, -down, atol=TOL)
    np.testing.assert_allclose(down, 4.0, atol=TOL)


def test_leg_overlapping_ramp_is_rejected(fig1):
    with pytest.raises(LegIntervalError):
        vector_potential_leg(fig1, "path_a", (0.0, 2.0))


def test_reversed_leg_is_rejected(fig1):
    with pytest.raises(LegIntervalError):
        vector_potential_leg(fig1, "path_a", (3.0, 1.0))


def test_leg_may_touch_ramp_edges(fig1):
    np.testing.assert_allclose(vector_potential_leg(fig1, "path_a", (0.0, 1.5)), PI / 2, atol=TOL)
    np.testing.assert_allclose(vector_potential_leg(fig1, "path_b", (2.5, 4.0)), -PI, atol=TOL)


def test_stationary_leg_gives_nothing(fig1):
    assert abs(vector_potential_leg(fig1, "path_a", (1.0, 1.5))) < 1e-15


def test_static_flux_allows_any_leg():
    scenario = build_canonical_scenario("fig1", 1.0, 1.0)
    # path a sweeps half a turn counterclockwise, from below the axis to above it
    np.testing.assert_allclose(vector_potential_leg(scenario, "path_a", (0.0, 4.0)), 0.5, atol=TOL)
    np.testing.assert_allclose(vector_potential_leg(scenario, "path_b", (0.0, 4.0)), -0.5, atol=TOL)


@pytest.mark.parametrize("interval", [(0.0, 1.5), (2.5, 4.0), (0.0, 1.0)])
def test_radial_leg_gives_nothing(fig1, interval):
    radial = Worldline("path_a", (0.0, 1.0, 3.0, 4.0), ((4.0, 3.0), (8.0, 6.0), (8.0, 6.0), (16.0, 12.0)))
    scenario = replace(fig1, worldlines=(radial, fig1.worldline_b))
    assert abs(vector_potential_leg(scenario, "path_a", interval)) < 1e-12


@pytest.mark.parametrize("wire_radius", [12.0, 14.0, 25.0])
def test_dwell_term_ignores_wire_shape(wire_radius):
    scenario = build_canonical_scenario("fig2a", 1.0, 3.0, geometry=GeometryParams(wire_radius=wire_radius))
    np.testing.assert_allclose(dwell_scalar_phase(scenario), -1.0, atol=TOL)


def test_asymmetric_wire_free_layout_has_no_dwell_term(fig1):
    lopsided = replace(fig1, cages=(fig1.cage_a, replace(fig1.cage_b, radius=1.0)))
    with pytest.raises(PotentialPathError):
        dwell_scalar_phase(lopsided)
    with pytest.raises(PotentialPathError):
        phase_eq3(lopsided)


@pytest.mark.parametrize(
    "kind,flux_initial,flux_final,turns,expected",
    [
        ("fig1", 2 * PI, 4 * PI, 1, 3 * PI),
        ("fig2a", 2 * PI, 4 * PI, 1, 2 * PI),
        ("fig2c", 2 * PI, 4 * PI, 1, 4 * PI),
        ("fig3", 1.0, 0.0, 3, 3.0),
        ("fig3", 0.0, 1.0, 2, -2.0),
    ],
)
def test_closed_form_values(kind, flux_initial, flux_final, turns, expected):
    assert math.isclose(closed_form_phase(kind, flux_initial, flux_final, turns), expected)


def test_closed_form_rejects_unknown_kind():
    with pytest.raises(ScenarioError):
        closed_form_phase("fig9", 1.0, 2.0)


def _cage_scenario(extent: float, flux_final: float = 2 * PI):
    cage_radius = 10.0 * math.sin(extent / 2.0)
    return build_canonical_scenario("fig1", 0.0, flux_final, geometry=GeometryParams(cage_radius=cage_radius))


def test_finite_cage_ratio_follows_angular_extent(draft):
    result = finite_cage_deviation(_cage_scenario(0.1 * PI), resolution=draft)
    np.testing.assert_allclose(result.angular_extent, 0.1 * PI, rtol=1e-9)
    np.testing.assert_allclose(result.estimate, 0.1, rtol=1e-9)
    np.testing.assert_allclose(result.scale, PI, rtol=1e-9)
    assert result.estimate / 3 < result.ratio < 3 * result.estimate


def test_finite_cage_deviation_shrinks_with_cage(draft):
    deviations = [abs(finite_cage_deviation(_cage_scenario(e), resolution=draft).deviation) for e in (0.2, 0.1, 0.05)]
    assert deviations[0] > deviations[1] > deviations[2] > 0.0


def test_halving_extent_roughly_halves_ratio(draft):
    wide = finite_cage_deviation(_cage_scenario(0.1 * PI), resolution=draft).ratio
    narrow = finite_cage_deviation(_cage_scenario(0.05 * PI), resolution=draft).ratio
    assert 1.5 < wide / narrow < 2.5


def test_finite_cage_ratio_undefined_without_ramp(draft):
    result = finite_cage_deviation(_cage_scenario(0.1 * PI, flux_final=0.0), resolution=draft)
    assert result.scale == 0.0
    assert math.isnan(result.ratio)


def test_finite_cage_needs_wire_free_layout(fig2a, draft):
    with pytest.raises(StrategyError):
        finite_cage_deviation(fig2a, resolution=draft)
