"""Exception types raised by ABPHASE."""

from typing import Any


class ABPhaseError(Exception):
    """Base class for every error raised by this package."""


class ScenarioError(ABPhaseError, ValueError):
    """A scenario failed validation.

    Attributes:
        violations: The validation records that caused the failure
    """

    def __init__(self, message: str, violations: list[Any] | None = None) -> None:
        super().__init__(message)
        self.violations = list(violations or [])


class InteriorPointError(ABPhaseError, ValueError):
    """A potential or E_A value was requested inside the solenoid."""


class WorldlineRangeError(ABPhaseError, ValueError):
    """A worldline was evaluated outside its time span."""


class StrategyError(ABPhaseError, ValueError):
    """A surface strategy does not fit the scenario geometry."""


class EVUnmodeledError(ABPhaseError, RuntimeError):
    """The induced-charge field is unmodeled on a connecting curve."""


class PotentialPathError(ABPhaseError, RuntimeError):
    """No wire or symmetry fixes the potential difference between the cages."""


class LegIntervalError(ABPhaseError, ValueError):
    """A vector-potential leg overlaps the ramp window."""


class TopologyError(ABPhaseError, ValueError):
    """A winding number is undefined for the given curve."""


class ConvergenceError(ABPhaseError, RuntimeError):
    """Quadrature did not reach the tolerance before the resolution cap."""


class ScenarioFileError(ABPhaseError, ValueError):
    """A scenario file could not be parsed.

    Attributes:
        location: Section/field (and line when known) where parsing failed
    """

    def __init__(self, message: str, location: str = "") -> None:
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ConfigError(ABPhaseError, ValueError):
    """Bad command-line or environment configuration."""
