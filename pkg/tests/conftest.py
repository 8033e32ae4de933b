"""Shared fixtures for the ABPHASE test suite."""

import math

import pytest

from ABPHASE.core.profiles import ProfileRegistry
from ABPHASE.physics.scenario import build_canonical_scenario

PI = math.pi


@pytest.fixture
def draft():
    """Coarse profile; the canonical scenarios are exact at any resolution."""
    return ProfileRegistry.lookup("draft")


@pytest.fixture
def fig1():
    return build_canonical_scenario("fig1", 2 * PI, 4 * PI)


@pytest.fixture
def fig2a():
    return build_canonical_scenario("fig2a", 2 * PI, 4 * PI)


@pytest.fixture
def fig2c():
    return build_canonical_scenario("fig2c", 2 * PI, 4 * PI)
