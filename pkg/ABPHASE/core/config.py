"""Central configuration module for ABPHASE."""

import os
from pathlib import Path

from dotenv import load_dotenv

from .profiles import QuadratureProfile, get_profile

env_path = Path(__file__).parent.parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

LOG_LEVEL: str = os.getenv("ABPHASE_LOG_LEVEL", "WARNING")
LOG_FILE: Path | None = Path(os.environ["ABPHASE_LOG_FILE"]) if os.getenv("ABPHASE_LOG_FILE") else None

PROFILE_NAME: str = os.getenv("ABPHASE_PROFILE", "reference")
QUADRATURE: QuadratureProfile = get_profile(PROFILE_NAME)

# Largest n_time the convergence loop may reach before giving up.
MAX_RESOLUTION: int = int(os.getenv("ABPHASE_MAX_RESOLUTION", "16384"))
TOLERANCE: float = float(os.getenv("ABPHASE_TOLERANCE", "1e-6"))
JOBS: int = int(os.getenv("ABPHASE_JOBS", "1"))

# Point classification tolerance for wires, in units of the solenoid radius.
WIRE_TOLERANCE: float = 1e-3

if LOG_FILE is not None:
    LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
