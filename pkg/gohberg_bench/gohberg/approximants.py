"""Members of the represented ideal used as competitors for Op(f)."""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from ..config import DENSE_LIMIT
from ..fourier import fourier, grid_spectrum, inv_fourier
from ..group import GroupSpec
from ..quantize import LinOp, Op_matrix, Op_operator
from ..symbols import CoronaFilter, Symbol
from .config import DEFAULT_SVD_RANKS, SVD_TIE_TOL

logger = logging.getLogger(__name__)


class TruncatedSVD:
    """Best rank-r approximations of a space-side matrix.

    Singular values tied across the cut are resolved canonically: inside the
    tied singular subspace the kept right singular directions are those of
    lowest grid frequency, so the truncation does not depend on LAPACK's
    choice of basis.
    """

    def __init__(self, matrix: np.ndarray, spec: GroupSpec, tie_tol: float = SVD_TIE_TOL):
        self.spec = spec
        self.matrix = np.asarray(matrix, dtype=complex)
        self.tie_tol = tie_tol
        _, self.singular_values, vh = scipy.linalg.svd(self.matrix)
        self._right = vh.conj().T
        frequencies = np.linalg.norm(spec.grid_frequencies().astype(float), axis=-1)
        # enumeration order breaks ties between equal |k|
        self._weights = frequencies + 1e-6 * np.arange(spec.grid_size) / spec.grid_size

    def _tied(self, r: int) -> tuple[np.ndarray, np.ndarray]:
        s = self.singular_values
        scale = self.tie_tol * max(s[0], 1.0)
        cut = s[r - 1]
        head = np.flatnonzero(s > cut + scale)
        cluster = np.flatnonzero(np.abs(s - cut) <= scale)
        return head, cluster

    def kept_directions(self, r: int) -> np.ndarray:
        """Orthonormal (grid_size, r) basis of the kept right singular subspace."""
        head, cluster = self._tied(r)
        needed = r - len(head)
        if len(cluster) == needed:
            return self._right[:, np.concatenate([head, cluster])]
        basis = self._right[:, cluster]
        spectrum = grid_spectrum(self.spec, basis.T).T * np.sqrt(self.spec.grid_size)
        weighted = spectrum.conj().T @ (self._weights[:, None] * spectrum)
        _, vectors = scipy.linalg.eigh((weighted + weighted.conj().T) / 2)
        chosen = basis @ vectors[:, :needed]
        return np.concatenate([self._right[:, head], chosen], axis=1)

    def truncation(self, r: int) -> np.ndarray:
        if r <= 0:
            return np.zeros_like(self.matrix)
        r = min(r, len(self.singular_values))
        kept = self.kept_directions(r)
        return self.matrix @ kept @ kept.conj().T

    def residual_norm(self, r: int) -> float:
        """sigma_{r+1}, the distance to rank r."""
        s = self.singular_values
        return float(s[r]) if r < len(s) else 0.0


@dataclass(frozen=True, eq=False)
class Approximant:
    """An ideal member L with the construction that produced it.

    ``remainder`` is Op(f) - L when it is available in closed form.
    ``kernel_part`` projects a grid vector onto a subspace L annihilates.
    """

    kind: str
    level: int | None
    rank: int | None
    op: LinOp
    remainder: LinOp | None = None
    kernel_part: Callable[[np.ndarray], np.ndarray] | None = None


def cutoff_symbol(f: Symbol, omega: CoronaFilter, spec: GroupSpec, level: int) -> Symbol:
    """f 1_{window minus V_k}: finite dual support, hence finite rank."""
    inside = omega.membership(spec, level)
    return f.restrict(lambda xi: ~inside(xi), name=f"{f.name}|not V{level}")


def tail_symbol(f: Symbol, omega: CoronaFilter, spec: GroupSpec, level: int) -> Symbol:
    """f 1_{V_k}, the part of f a cutoff at level k leaves behind."""
    return f.restrict(omega.membership(spec, level), name=f"{f.name}|V{level}")


def cutoff_approximant(f: Symbol, omega: CoronaFilter, spec: GroupSpec, level: int) -> Approximant:
    op = Op_operator(cutoff_symbol(f, omega, spec, level), spec)
    remainder = Op_operator(tail_symbol(f, omega, spec, level), spec)
    # L = Op(f) 1_{not V_k}(P) vanishes on frequencies in V_k
    inside = omega.level_mask(spec, level)
    return Approximant(
        kind="cutoff",
        level=level,
        rank=None,
        op=_relabel(op, f"cutoff@{level}"),
        remainder=remainder,
        kernel_part=lambda u: inv_fourier(spec, fourier(spec, u) * inside),
    )


def svd_approximants(f: Symbol, spec: GroupSpec, ranks=DEFAULT_SVD_RANKS) -> list[Approximant]:
    """Best rank-r truncations of the dense space-side matrix of Op(f)."""
    if spec.grid_size > DENSE_LIMIT:
        logger.warning(
            f"skipping SVD approximants for {f.name}: {spec.grid_size} grid points exceed GOHBERG_DENSE_LIMIT={DENSE_LIMIT}"
        )
        return []
    matrix = Op_matrix(f, spec)
    svd = TruncatedSVD(matrix, spec)
    approximants = []
    for r in ranks:
        kept = svd.kept_directions(min(r, len(svd.singular_values)))
        truncated = matrix @ kept @ kept.conj().T
        op = LinOp.from_matrix(spec, "space", truncated, label=f"svd_r{r}")
        remainder = LinOp.from_matrix(spec, "space", matrix - truncated, label=f"Op-svd_r{r}")
        approximants.append(
            Approximant(
                kind="svd",
                level=None,
                rank=r,
                op=op,
                remainder=remainder,
                kernel_part=_orthogonal_complement(kept),
            )
        )
    return approximants


def ideal_approximants(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    level: int,
    ranks=DEFAULT_SVD_RANKS,
) -> list[LinOp]:
    """The cutoff at ``level`` and, for the full corona, the rank-r SVD truncations."""
    approximants = [cutoff_approximant(f, omega, spec, level)]
    if omega.is_full:
        approximants.extend(svd_approximants(f, spec, ranks))
    return [a.op for a in approximants]


def _orthogonal_complement(kept: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    return lambda u: u - kept @ (kept.conj().T @ u)


def _relabel(op: LinOp, label: str) -> LinOp:
    return LinOp(
        spec=op.spec,
        side=op.side,
        matrix=op.matrix,
        apply_fn=op.apply_fn,
        adjoint_fn=op.adjoint_fn,
        exact_norm=op.exact_norm,
        label=label,
    )
