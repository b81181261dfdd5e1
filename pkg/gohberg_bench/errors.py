"""Exceptions raised by the Gohberg bench."""

import numpy as np


class GohbergBenchError(Exception):
    """Base class for all bench errors."""
    pass


class SpecMismatchError(GohbergBenchError):
    """Raised when points or arrays belong to a different group spec."""
    pass


class ShapeMismatchError(GohbergBenchError):
    """Raised when a sample array does not match the grid or window shape."""
    pass


class OffGridError(GohbergBenchError):
    """Raised when a group point is required to lie on the sampling grid."""
    pass


class WindowEscapeError(GohbergBenchError):
    """Raised when a crossed-product composition produces support outside the window."""

    def __init__(self, escaped: np.ndarray):
        self.escaped = np.asarray(escaped)
        points = ", ".join(str(tuple(int(c) for c in p)) for p in self.escaped[:5])
        more = "" if len(self.escaped) <= 5 else f" (+{len(self.escaped) - 5} more)"
        super().__init__(f"composition support leaves the window at {points}{more}")


class ConfigError(GohbergBenchError):
    """Raised for malformed experiment configs."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        anchor = ""
        if path is not None:
            anchor = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{anchor}{message}")


class ConvergenceWarning(UserWarning):
    """Issued when an iterative estimate stops before reaching its tolerance."""
    pass
