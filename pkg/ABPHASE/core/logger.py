"""Logging configuration for ABPHASE."""

import logging
import sys
from typing import Literal

from .config import LOG_FILE, LOG_LEVEL


LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def get_logger(name: str, level: str | None = None) -> logging.Logger:
    """Create and configure a logger with a console handler and an optional file handler.

    Results are printed on stdout by the CLI, so log records go to stderr.

    Args:
        name: Logger name (typically __name__)
        level: Override log level (defaults to LOG_LEVEL from config)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    effective_level = level or LOG_LEVEL
    logger.setLevel(getattr(logging, effective_level.upper()))

    if logger.handlers:
        return logger

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(console_handler)

    if LOG_FILE is not None:
        file_handler = logging.FileHandler(LOG_FILE, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


def set_level(level: LogLevel) -> None:
    """Change the level of every ABPHASE logger created so far."""
    for name, candidate in logging.Logger.manager.loggerDict.items():
        if name.startswith("ABPHASE") and isinstance(candidate, logging.Logger):
            candidate.setLevel(getattr(logging, level))
