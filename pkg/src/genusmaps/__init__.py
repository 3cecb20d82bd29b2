"""Asymptotic enumeration of rooted maps and labelled graphs on orientable
surfaces, cross-validated against exact small-map censuses."""

from genusmaps.numeric import (
    DEFAULT_PRECISION,
    BracketError,
    ConvergenceError,
    DomainError,
    GenusMapsError,
    LogMagnitude,
    PrecisionReal,
    ResourceLimitError,
    find_root,
    log_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION",
    "BracketError",
    "ConvergenceError",
    "DomainError",
    "GenusMapsError",
    "LogMagnitude",
    "PrecisionReal",
    "ResourceLimitError",
    "find_root",
    "log_gamma",
    "__version__",
]
