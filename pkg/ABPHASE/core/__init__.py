"""Core layer for ABPHASE - configuration, logging, errors and planar geometry."""
