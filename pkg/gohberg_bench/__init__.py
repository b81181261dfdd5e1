"""Gohberg lower bounds for pseudodifferential operators on compact abelian groups."""

from .errors import (
    ConfigError,
    ConvergenceWarning,
    GohbergBenchError,
    OffGridError,
    ShapeMismatchError,
    SpecMismatchError,
    WindowEscapeError,
)
from .group import DualPoint, GroupPoint, GroupSpec, Window

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceWarning",
    "DualPoint",
    "GohbergBenchError",
    "GroupPoint",
    "GroupSpec",
    "OffGridError",
    "ShapeMismatchError",
    "SpecMismatchError",
    "Window",
    "WindowEscapeError",
]
