"""Bounded operators on the truncated Hilbert spaces L^2(x-grid) and l^2(window)."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

import numpy as np
import pandas as pd

from ..errors import ShapeMismatchError, SpecMismatchError
from ..group import GroupSpec

logger = logging.getLogger(__name__)

Side = Literal["space", "dual"]

# Vectors live on the last axis: apply maps (..., n) -> (..., n).
Apply = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class NormEstimate:
    """Operator norm estimate; ``converged`` is False when iteration stopped at the cap."""

    value: float
    converged: bool = True
    iterations: int = 0
    method: str = "svd"

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class LinOp:
    """Operator with an optional dense matrix and a matrix-free apply.

    Dual-side operators are indexed by window x window, space-side operators by
    x-grid x x-grid. ``exact_norm`` is set when the norm is known in closed form
    (multipliers and multiplication operators).
    """

    spec: GroupSpec
    side: Side
    matrix: np.ndarray | None = field(default=None, repr=False)
    apply_fn: Apply | None = field(default=None, repr=False)
    adjoint_fn: Apply | None = field(default=None, repr=False)
    exact_norm: float | None = None
    label: str = "A"

    def __post_init__(self):
        if self.matrix is None and (self.apply_fn is None or self.adjoint_fn is None):
            raise ValueError(f"{self.label}: a LinOp needs a matrix or both apply and adjoint closures")
        if self.matrix is not None and self.matrix.shape != (self.dim, self.dim):
            raise ShapeMismatchError(
                f"{self.label}: matrix of shape {self.matrix.shape} on a {self.side}-side space of dimension {self.dim}"
            )

    @classmethod
    def from_matrix(cls, spec: GroupSpec, side: Side, matrix, label: str = "A", exact_norm: float | None = None) -> "LinOp":
        matrix = np.asarray(matrix, dtype=complex)
        matrix.setflags(write=False)
        return cls(spec=spec, side=side, matrix=matrix, exact_norm=exact_norm, label=label)

    @classmethod
    def identity(cls, spec: GroupSpec, side: Side = "space") -> "LinOp":
        return cls(spec=spec, side=side, apply_fn=np.array, adjoint_fn=np.array, exact_norm=1.0, label="I")

    @property
    def dim(self) -> int:
        return self.spec.grid_size if self.side == "space" else self.spec.window_size

    @property
    def is_dense(self) -> bool:
        return self.matrix is not None

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[-1:] != (self.dim,):
            raise ShapeMismatchError(f"{self.label}: vector of shape {v.shape} on a space of dimension {self.dim}")
        return v

    def apply(self, v) -> np.ndarray:
        v = self._check(v)
        if self.apply_fn is not None:
            return self.apply_fn(v)
        return v @ self.matrix.T

    def apply_adjoint(self, v) -> np.ndarray:
        v = self._check(v)
        if self.adjoint_fn is not None:
            return self.adjoint_fn(v)
        return v @ self.matrix.conj()

    def __call__(self, v) -> np.ndarray:
        return self.apply(v)

    def dense(self) -> np.ndarray:
        """The matrix, materialised from the apply closure when needed."""
        if self.matrix is not None:
            return self.matrix
        logger.debug(f"materialising {self.label} ({self.dim} x {self.dim})")
        return self.apply(np.eye(self.dim, dtype=complex)).T

    def adjoint(self) -> "LinOp":
        matrix = None if self.matrix is None else self.matrix.conj().T
        return LinOp(
            spec=self.spec,
            side=self.side,
            matrix=matrix,
            apply_fn=self.adjoint_fn,
            adjoint_fn=self.apply_fn,
            exact_norm=self.exact_norm,
            label=f"{self.label}*",
        )

    def _same_space(self, other: "LinOp"):
        if other.spec != self.spec or other.side != self.side:
            raise SpecMismatchError(
                f"{self.label} acts on {self.side}-side {self.spec}, {other.label} on {other.side}-side {other.spec}"
            )

    def __sub__(self, other: "LinOp") -> "LinOp":
        return self._combine(other, np.subtract, "-")

    def __add__(self, other: "LinOp") -> "LinOp":
        return self._combine(other, np.add, "+")

    def _combine(self, other: "LinOp", op, symbol: str) -> "LinOp":
        self._same_space(other)
        label = f"({self.label}{symbol}{other.label})"
        if self.is_dense and other.is_dense:
            return LinOp.from_matrix(self.spec, self.side, op(self.matrix, other.matrix), label=label)
        return LinOp(
            spec=self.spec,
            side=self.side,
            apply_fn=lambda v: op(self.apply(v), other.apply(v)),
            adjoint_fn=lambda v: op(self.apply_adjoint(v), other.apply_adjoint(v)),
            label=label,
        )

    def __matmul__(self, other: "LinOp") -> "LinOp":
        self._same_space(other)
        label = f"{self.label}{other.label}"
        if self.is_dense and other.is_dense:
            return LinOp.from_matrix(self.spec, self.side, self.matrix @ other.matrix, label=label)
        return LinOp(
            spec=self.spec,
            side=self.side,
            apply_fn=lambda v: self.apply(other.apply(v)),
            adjoint_fn=lambda v: other.apply_adjoint(self.apply_adjoint(v)),
            label=label,
        )

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.dense()))

    def to_frame(self) -> pd.DataFrame:
        """Row-major table with interleaved re/im columns per matrix column."""
        matrix = self.dense()
        columns = {}
        for j in range(self.dim):
            columns[f"re{j}"] = matrix[:, j].real
            columns[f"im{j}"] = matrix[:, j].imag
        return pd.DataFrame(columns)

    def to_csv(self, path) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        logger.info(f"wrote {self.label} ({self.dim} x {self.dim}) to {path}")
        return path
