"""Quantizations of symbols: Op(f) on L^2(X), op(f) on l^2(window), kernels and norms.

Op(f)u(x) = sum_{xi in window} xi(x) f(x, xi) (F u)(xi), and op(f) = F Op(f) F^-1
with matrix entries op(f)[xi, eta] = mean_x conj(xi(x)) eta(x) f(x, eta).
"""

import logging
import warnings
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from ..config import DEFAULT_SEED, DENSE_LIMIT, NORM_MAX_ITER, NORM_TOL
from ..errors import ConvergenceWarning
from ..fourier import fourier, grid_spectrum, inv_fourier
from ..group import DualPoint, GroupPoint, GroupSpec
from ..symbols import DualFunction, SpaceFunction, Symbol
from .linop import LinOp, NormEstimate, Side

logger = logging.getLogger(__name__)

# grid rows per block when applying non-separable symbols
_ROW_CHUNK = 512


def _window_difference_index(spec: GroupSpec) -> np.ndarray:
    """Flat DFT index of xi - eta for every pair of window points."""
    shape = np.asarray(spec.grid_shape)
    points = spec.window_points
    diff = np.mod(points[:, None, :] - points[None, :, :], shape)
    return np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), spec.grid_shape)


# --- dual side ---


def op_quantize(f: Symbol, spec: GroupSpec, method: str = "fft") -> LinOp:
    """Dual-side matrix A[xi, eta] = mean_x conj(xi(x)) eta(x) f(x, eta).

    ``direct`` evaluates the grid integral against the character table; ``fft``
    reads the same grid integral off the x-spectrum of every column of f.
    """
    grid = f.grid(spec)
    if f.x_independent:
        matrix = np.diag(grid[0])
    elif method == "direct":
        table = spec.character_table()
        matrix = table.conj() @ (table.T * grid) / spec.grid_size
    elif method == "fft":
        # spectrum[eta, k] = mean_x conj(k(x)) f(x, eta); entry (xi, eta) sits at k = xi - eta
        spectrum = grid_spectrum(spec, grid.T)
        columns = np.arange(spec.window_size)[None, :]
        matrix = spectrum[columns, _window_difference_index(spec)]
    else:
        raise ValueError(f"unknown quantization method {method!r}")
    return LinOp.from_matrix(spec, "dual", matrix, label=f"op({f.name})")


# --- space side ---


def multiplication_operator(phi: SpaceFunction, spec: GroupSpec) -> LinOp:
    """phi(Q): pointwise multiplication on the grid."""
    values = phi.values(spec)
    return LinOp(
        spec=spec,
        side="space",
        apply_fn=lambda u: values * u,
        adjoint_fn=lambda u: np.conj(values) * u,
        exact_norm=float(np.max(np.abs(values))),
        label=f"{phi.name}(Q)",
    )


def multiplier_operator(psi: DualFunction, spec: GroupSpec, side: Side = "space") -> LinOp:
    """psi(P) = F^-1 diag(psi) F, or diag(psi) on the dual side."""
    values = psi.values(spec)
    label = f"{psi.name}(P)"
    norm = float(np.max(np.abs(values)))
    if side == "dual":
        return LinOp.from_matrix(spec, "dual", np.diag(values), label=label, exact_norm=norm)
    return LinOp(
        spec=spec,
        side="space",
        apply_fn=lambda u: inv_fourier(spec, values * fourier(spec, u)),
        adjoint_fn=lambda u: inv_fourier(spec, np.conj(values) * fourier(spec, u)),
        exact_norm=norm,
        label=label,
    )


def _general_apply(grid: np.ndarray, spec: GroupSpec) -> tuple[Callable, Callable]:
    table = spec.character_table()

    def apply(u):
        coefficients = fourier(spec, u)
        out = np.empty(coefficients.shape[:-1] + (spec.grid_size,), dtype=complex)
        for start in range(0, spec.grid_size, _ROW_CHUNK):
            rows = slice(start, start + _ROW_CHUNK)
            block = table[:, rows].T * grid[rows]
            out[..., rows] = coefficients @ block.T
        return out

    def adjoint(v):
        # (Op f)^* v = F^-1 [ xi -> sum_x conj(xi(x) f(x, xi)) v(x) ] / N, with F^-1 w = w @ table
        acc = np.zeros(np.shape(v)[:-1] + (spec.window_size,), dtype=complex)
        for start in range(0, spec.grid_size, _ROW_CHUNK):
            rows = slice(start, start + _ROW_CHUNK)
            block = np.conj(table[:, rows].T * grid[rows])
            acc += v[..., rows] @ block
        return inv_fourier(spec, acc / spec.grid_size)

    return apply, adjoint


def Op_operator(f: Symbol, spec: GroupSpec) -> LinOp:
    """Space-side Op(f) with a matrix-free apply; separable symbols use phi(Q) psi(P)."""
    if f.factors is not None:
        phi, psi = f.factors
        if phi.is_constant:
            multiplier = multiplier_operator(phi.constant_value * psi, spec)
            return LinOp(
                spec=spec,
                side="space",
                apply_fn=multiplier.apply_fn,
                adjoint_fn=multiplier.adjoint_fn,
                exact_norm=multiplier.exact_norm,
                label=f"Op({f.name})",
            )
        Q, P = multiplication_operator(phi, spec), multiplier_operator(psi, spec)
        return LinOp(
            spec=spec,
            side="space",
            apply_fn=lambda u: Q.apply(P.apply(u)),
            adjoint_fn=lambda v: P.apply_adjoint(Q.apply_adjoint(v)),
            label=f"Op({f.name})",
        )
    grid = f.dense_grid(spec)
    apply, adjoint = _general_apply(grid, spec)
    return LinOp(spec=spec, side="space", apply_fn=apply, adjoint_fn=adjoint, label=f"Op({f.name})")


def Op_apply(f: Symbol, u, spec: GroupSpec) -> np.ndarray:
    """x -> sum_xi xi(x) f(x, xi) (F u)(xi) on the grid."""
    return Op_operator(f, spec).apply(spec.check_samples(u))


def Op_matrix(f: Symbol, spec: GroupSpec) -> np.ndarray:
    """Dense space-side matrix M[x, y] = sum_xi xi(x) f(x, xi) conj(xi(y)) / N."""
    table = spec.character_table()
    grid = f.dense_grid(spec)
    matrix = np.empty((spec.grid_size, spec.grid_size), dtype=complex)
    for start in range(0, spec.grid_size, _ROW_CHUNK):
        rows = slice(start, start + _ROW_CHUNK)
        matrix[rows] = (table[:, rows].T * grid[rows]) @ table.conj()
    return matrix / spec.grid_size


def kernel_of(f: Symbol, spec: GroupSpec) -> np.ndarray:
    """kappa(x, y) = (F^-1_xi f)(x, x y^-1) on grid x grid.

    Op(f)u(x) = mean_y kappa(x, y) u(y).
    """
    grid = f.dense_grid(spec)
    # partial[x, z] = sum_xi xi(z) f(x, xi)
    partial = inv_fourier(spec, grid)
    rows = np.arange(spec.grid_size)[:, None]
    return partial[rows, spec.grid_difference_index()]


def hs_norm(A: LinOp) -> float:
    """Hilbert-Schmidt norm: Frobenius norm of the matrix in an orthonormal basis."""
    return A.frobenius_norm()


def symbol_l2_norm(f: Symbol, spec: GroupSpec) -> float:
    """||f|| in L^2(X x dual): sqrt(mean_x sum_xi |f(x, xi)|^2)."""
    grid = f.grid(spec)
    return float(np.sqrt(np.mean(np.sum(np.abs(grid) ** 2, axis=-1))))


# --- right quantization ---


def mu(xi: DualPoint, x: GroupPoint) -> tuple[GroupPoint, DualPoint]:
    """(xi, x) -> (x^-1, xi)."""
    return x.inverse(), xi


def mu_inverse(x: GroupPoint, xi: DualPoint) -> tuple[DualPoint, GroupPoint]:
    """(x, xi) -> (xi, x^-1)."""
    return xi, x.inverse()


def right_symbol(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: GroupSpec,
    name: str = "g",
    x_independent: bool = False,
) -> Symbol:
    """The pulled-back symbol g o mu^-1: (x, xi) -> g(xi, x^-1)."""
    return Symbol(
        lambda x, xi: g(np.asarray(xi), spec.negate_space(x)),
        name=f"{name}.mu^-1",
        x_independent=x_independent,
    )


def right_quantize(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: GroupSpec,
    name: str = "g",
    x_independent: bool = False,
    method: str = "fft",
) -> LinOp:
    """Right quantization on the dual group: op(g o mu^-1)."""
    return op_quantize(right_symbol(g, spec, name, x_independent), spec, method=method)


# --- norms ---


def operator_norm(
    A: LinOp,
    tol: float = NORM_TOL,
    method: str = "auto",
    max_iter: int = NORM_MAX_ITER,
    seed: int = DEFAULT_SEED,
) -> NormEstimate:
    """Largest singular value.

    ``power`` iterates on A*A from a seeded random start until the relative
    change drops below ``tol``; ``arpack`` runs restarted Lanczos on the
    matrix-free operator and falls back to power iteration when it does not
    converge; ``svd`` uses the dense matrix. ``auto`` takes a closed form when
    the operator carries one, then the dense path up to GOHBERG_DENSE_LIMIT,
    then ARPACK.
    """
    if method == "auto":
        if A.exact_norm is not None:
            return NormEstimate(A.exact_norm, method="exact")
        method = "svd" if A.dim <= DENSE_LIMIT else "arpack"
    if method == "svd" or (method == "arpack" and A.dim < 3):
        values = scipy.linalg.svdvals(A.dense())
        return NormEstimate(float(values[0]) if values.size else 0.0, method="svd")
    if method == "arpack":
        return _lanczos(A, tol, max_iter, seed)
    if method != "power":
        raise ValueError(f"unknown norm method {method!r}")
    return _power_iteration(A, tol, max_iter, seed)


def _lanczos(A: LinOp, tol: float, max_iter: int, seed: int) -> NormEstimate:
    operator = scipy.sparse.linalg.LinearOperator(
        (A.dim, A.dim),
        matvec=lambda v: A.apply(np.ravel(v)),
        rmatvec=lambda v: A.apply_adjoint(np.ravel(v)),
        dtype=complex,
    )
    rng = np.random.default_rng(seed)
    start = rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim)
    try:
        values = scipy.sparse.linalg.svds(
            operator, k=1, tol=tol, maxiter=max_iter, v0=start, solver="arpack", return_singular_vectors=False
        )
    except scipy.sparse.linalg.ArpackNoConvergence:
        logger.warning(f"ARPACK did not converge on {A.label}; falling back to power iteration")
        return _power_iteration(A, tol, max_iter, seed)
    return NormEstimate(float(np.max(values)), method="arpack")


def _power_iteration(A: LinOp, tol: float, max_iter: int, seed: int) -> NormEstimate:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for iteration in range(1, max_iter + 1):
        w = A.apply(v)
        current = float(np.linalg.norm(w))
        if current == 0.0:
            return NormEstimate(0.0, converged=True, iterations=iteration, method="power")
        z = A.apply_adjoint(w)
        norm_z = np.linalg.norm(z)
        if norm_z == 0.0:
            return NormEstimate(current, converged=True, iterations=iteration, method="power")
        v = z / norm_z
        if abs(current - estimate) <= tol * current:
            logger.debug(f"power iteration on {A.label} converged to {current} after {iteration} steps")
            return NormEstimate(current, converged=True, iterations=iteration, method="power")
        estimate = current
    message = f"power iteration on {A.label} stopped after {max_iter} steps at {estimate}"
    logger.warning(message)
    warnings.warn(message, ConvergenceWarning, stacklevel=3)
    return NormEstimate(estimate, converged=False, iterations=max_iter, method="power")
