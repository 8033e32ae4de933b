"""Quadrature profiles for the phase integrators."""

from dataclasses import dataclass
from typing import Literal


ProfileName = Literal["draft", "reference", "fine"]


@dataclass(frozen=True)
class QuadratureProfile:
    """Resolution used to discretize spacetime surfaces.

    Attributes:
        name: Profile label
        n_time: Uniform time slices before breakpoints are merged in
        n_curve: Samples along every connecting curve
        disk_rings: Radial rings of the solenoid-disk flux quadrature
        disk_sectors: Angular sectors of the solenoid-disk flux quadrature
    """

    name: str
    n_time: int
    n_curve: int
    disk_rings: int = 4
    disk_sectors: int = 8


class ProfileRegistry:
    """Named quadrature profiles, from quick checks to convergence studies."""

    MIN_RESOLUTION = 16

    PROFILES: dict[str, QuadratureProfile] = {
        "draft": QuadratureProfile(name="draft", n_time=256, n_curve=64),
        "reference": QuadratureProfile(name="reference", n_time=2048, n_curve=512),
        "fine": QuadratureProfile(
            name="fine", n_time=4096, n_curve=1024, disk_rings=8, disk_sectors=16
        ),
    }

    @classmethod
    def lookup(cls, name: str) -> QuadratureProfile:
        """Return the profile registered under ``name``.

        Raises:
            ValueError: If no such profile exists
        """
        try:
            return cls.PROFILES[name.lower()]
        except KeyError:
            known = ", ".join(sorted(cls.PROFILES))
            raise ValueError(f"Unknown quadrature profile '{name}' (known: {known})") from None

    @classmethod
    def with_resolution(
        cls, base: QuadratureProfile, n_time: int | None = None, n_curve: int | None = None
    ) -> QuadratureProfile:
        """Copy ``base`` with overridden resolution values.

        Raises:
            ValueError: If a value is below MIN_RESOLUTION
        """
        n_time = base.n_time if n_time is None else n_time
        n_curve = base.n_curve if n_curve is None else n_curve
        for label, value in (("n_time", n_time), ("n_curve", n_curve)):
            if value < cls.MIN_RESOLUTION:
                raise ValueError(f"{label} must be >= {cls.MIN_RESOLUTION}, got {value}")
        return QuadratureProfile(
            name=f"{base.name}*" if (n_time, n_curve) != (base.n_time, base.n_curve) else base.name,
            n_time=n_time,
            n_curve=n_curve,
            disk_rings=base.disk_rings,
            disk_sectors=base.disk_sectors,
        )


def get_profile(name: str) -> QuadratureProfile:
    """Convenience function mirroring ProfileRegistry.lookup."""
    return ProfileRegistry.lookup(name)
