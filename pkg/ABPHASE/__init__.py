"""ABPHASE - Aharonov-Bohm phase of a ramped-solenoid interferometer, computed two ways."""

__version__ = "0.1.0"
