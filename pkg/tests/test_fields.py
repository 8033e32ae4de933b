import math
from dataclasses import replace

import numpy as np
import pytest

from ABPHASE.core.errors import InteriorPointError
from ABPHASE.physics.fields import (
    SolenoidModel,
    electric_field_EA,
    ev_line_integral_vanishes,
    flux_at,
    flux_rate,
    total_field_at,
    vector_potential,
)
from ABPHASE.phase.surface import dwell_curve
from ABPHASE.physics.scenario import FaradayCage, build_canonical_scenario

PI = math.pi


def ramp(flux_initial=0.0, flux_final=2 * PI, start=0.0, end=1.0, shape="linear", radius=0.5):
    return SolenoidModel((0.0, 0.0), radius, flux_initial, flux_final, start, end, shape)


def polygon(radius, n=1000, center=(0.0, 0.0)):
    angles = np.linspace(0.0, 2 * PI, n + 1)
    return np.column_stack([center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)])


def loop_integral(field, loop):
    mids = 0.5 * (loop[:-1] + loop[1:])
    return float(np.sum(np.sum(field(mids) * np.diff(loop, axis=0), axis=1)))


def test_vector_potential_magnitude_and_direction():
    solenoid = ramp(2 * PI, 2 * PI)
    np.testing.assert_allclose(vector_potential(solenoid, (1.0, 0.0), 0.0), [0.0, 1.0], atol=1e-15)


def test_vector_potential_vanishes_without_flux():
    solenoid = ramp(0.0, 0.0)
    np.testing.assert_array_equal(vector_potential(solenoid, (3.0, -2.0), 0.5), [0.0, 0.0])


@pytest.mark.parametrize("rho", [0.6, 1.0, 7.5])
def test_loop_integral_of_potential_equals_flux(rho):
    solenoid = ramp(1.7, 1.7)
    value = loop_integral(lambda p: vector_potential(solenoid, p, 0.0), polygon(rho))
    np.testing.assert_allclose(value, 1.7, rtol=1e-5)


def test_off_center_loop_not_enclosing_axis_has_zero_circulation():
    solenoid = ramp(1.7, 1.7)
    value = loop_integral(lambda p: vector_potential(solenoid, p, 0.0), polygon(1.0, center=(4.0, 1.0)))
    assert abs(value) < 1e-10


def test_faraday_consistency_of_induced_field():
    solenoid = ramp(0.0, 3.0, shape="smoothstep")
    t = 0.3
    value = loop_integral(lambda p: electric_field_EA(solenoid, p, t), polygon(2.0))
    np.testing.assert_allclose(value, -flux_rate(solenoid, t), rtol=1e-5)


def test_induced_field_during_linear_ramp():
    np.testing.assert_allclose(electric_field_EA(ramp(), (1.0, 0.0), 0.5), [0.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("t", [-1.0, 0.0, 1.0, 2.0])
def test_induced_field_vanishes_outside_ramp(t):
    np.testing.assert_array_equal(electric_field_EA(ramp(), (1.0, 0.0), t), [0.0, 0.0])


def test_induced_field_vanishes_for_static_flux():
    np.testing.assert_array_equal(electric_field_EA(ramp(PI, PI), (1.0, 0.0), 0.5), [0.0, 0.0])


def test_interior_point_raises():
    with pytest.raises(InteriorPointError):
        vector_potential(ramp(), (0.1, 0.1), 0.0)
    with pytest.raises(InteriorPointError):
        electric_field_EA(ramp(), [(3.0, 0.0), (0.5, 0.0)], 0.5)


@pytest.mark.parametrize("shape", ["linear", "smoothstep"])
def test_flux_profile_hits_end_values(shape):
    solenoid = ramp(1.0, 3.0, start=2.0, end=4.0, shape=shape)
    assert flux_at(solenoid, 1.0) == 1.0
    assert flux_at(solenoid, 2.0) == 1.0
    assert flux_at(solenoid, 4.0) == 3.0
    assert math.isclose(flux_at(solenoid, 3.0), 2.0)
    assert flux_rate(solenoid, 2.0) == 0.0


def test_cage_center_is_shielded_during_ramp(fig1):
    t = 0.5 * (fig1.solenoid.ramp_start + fig1.solenoid.ramp_end)
    sample = total_field_at(fig1, fig1.cage_a.center, t)
    assert sample.region == "inside_conductor"
    assert sample.e_field == (0.0, 0.0)


def test_free_space_outside_ramp_is_field_free(fig1):
    sample = total_field_at(fig1, (0.0, 5.0), fig1.solenoid.ramp_end + 0.1)
    assert sample.region == "free_space"
    assert sample.e_field == (0.0, 0.0)
    assert sample.b_field == 0.0


def test_free_space_during_ramp_carries_induced_field(fig1):
    t = 0.5 * (fig1.solenoid.ramp_start + fig1.solenoid.ramp_end)
    sample = total_field_at(fig1, (0.0, 5.0), t)
    np.testing.assert_allclose(sample.e_field, electric_field_EA(fig1.solenoid, (0.0, 5.0), t))


def test_solenoid_interior_field_normalisation(fig1):
    sample = total_field_at(fig1, (0.1, 0.2), fig1.solenoid.ramp_end)
    assert sample.region == "inside_solenoid"
    assert math.isclose(sample.b_field * fig1.solenoid.area, fig1.solenoid.flux_final)


def test_wire_interior_is_shielded(fig2a):
    t = 0.5 * (fig2a.solenoid.ramp_start + fig2a.solenoid.ramp_end)
    point = fig2a.wire.points[40]
    sample = total_field_at(fig2a, point, t)
    assert sample.region == "inside_conductor"
    assert sample.e_field == (0.0, 0.0)


def test_symmetric_layout_authorises_diameter_curve(fig1):
    curve = np.linspace(fig1.cage_a.center, fig1.cage_b.center, 33)
    assert ev_line_integral_vanishes(fig1, curve, 2.0)


@pytest.mark.parametrize("strategy", ["left_of_solenoid", "right_of_solenoid", "straight"])
def test_symmetric_layout_authorises_surface_curves(fig1, strategy):
    assert ev_line_integral_vanishes(fig1, dwell_curve(fig1, strategy, 65), 2.0)


def test_symmetric_layout_rejects_arbitrary_curve(fig1):
    zigzag = [fig1.cage_a.center, (5.0, 30.0), (0.0, -40.0), (-3.0, 17.0), fig1.cage_b.center]
    assert not ev_line_integral_vanishes(fig1, zigzag, 2.0)


def test_symmetric_layout_rejects_arc_off_the_axis(fig1):
    angles = np.linspace(0.0, PI, 65)
    half_ellipse = np.column_stack([10.0 * np.cos(angles), 4.0 * np.sin(angles)])
    assert not ev_line_integral_vanishes(fig1, half_ellipse, 2.0)


def test_curve_inside_wire_is_authorised(fig2a):
    assert ev_line_integral_vanishes(fig2a, fig2a.wire.points, 2.0)


def test_asymmetric_layout_is_not_authorised(fig1):
    shifted = replace(fig1, cages=(fig1.cage_a, FaradayCage((-10.0, 3.0), fig1.cage_b.radius)))
    curve = np.linspace(shifted.cage_a.center, shifted.cage_b.center, 33)
    assert not ev_line_integral_vanishes(shifted, curve, 2.0)


def test_curve_not_ending_at_cage_centers_is_not_authorised(fig1):
    curve = np.linspace((9.0, 0.0), fig1.cage_b.center, 33)
    assert not ev_line_integral_vanishes(fig1, curve, 2.0)


def test_conductor_interiors_are_field_free_at_all_times():
    scenario = build_canonical_scenario("fig2c", 1.0, -2.0)
    rng = np.random.default_rng(7)
    wire = scenario.wire.points
    for t in np.linspace(0.0, 4.0, 17):
        for cage in scenario.cages:
            offset = rng.uniform(-0.5, 0.5, 2) * cage.radius
            point = np.asarray(cage.center) + offset
            assert total_field_at(scenario, point, t).e_field == (0.0, 0.0)
        assert total_field_at(scenario, wire[rng.integers(len(wire))], t).e_field == (0.0, 0.0)
