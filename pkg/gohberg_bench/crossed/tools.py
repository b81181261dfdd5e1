"""Diamond product, involution, Schroedinger representation and the partial Fourier bridge."""

import logging
from typing import Literal

import numpy as np

from ..errors import SpecMismatchError, WindowEscapeError
from ..fourier import fourier
from ..group import GroupSpec
from ..quantize import LinOp
from ..symbols import Symbol
from .element import CrossedElement, shifted_window_index

logger = logging.getLogger(__name__)


def _gather(fiber: np.ndarray, index: np.ndarray) -> np.ndarray:
    """fiber[index] with zero where index is -1."""
    return np.where(index >= 0, fiber[np.maximum(index, 0)], 0.0)


def compose(
    phi: CrossedElement,
    psi: CrossedElement,
    on_escape: Literal["raise", "truncate"] = "raise",
) -> CrossedElement:
    """(Phi <> Psi)(xi, zeta) = sum_eta Phi(xi eta^-1, zeta eta) Psi(eta, zeta)."""
    if phi.spec != psi.spec:
        raise SpecMismatchError(f"cannot compose elements of {phi.spec} and {psi.spec}")
    spec = phi.spec
    products: dict[tuple[int, ...], np.ndarray] = {}
    for tau, psi_fiber in zip(psi.support, psi.fibers):
        # zeta -> index of zeta tau
        shifted = shifted_window_index(spec, tau)
        for sigma, phi_fiber in zip(phi.support, phi.fibers):
            key = tuple(int(c) for c in spec.add_dual(sigma, tau))
            term = _gather(phi_fiber, shifted) * psi_fiber
            products[key] = products.get(key, 0.0) + term

    if not products:
        return CrossedElement.zero(spec)
    support = np.asarray(list(products), dtype=np.int64).reshape(-1, spec.ndim)
    fibers = np.asarray(list(products.values()), dtype=complex)
    outside = spec.window_index(support) < 0
    escaped = outside & np.any(fibers != 0, axis=-1)
    if np.any(escaped):
        if on_escape == "raise":
            raise WindowEscapeError(support[escaped])
        logger.warning(f"truncating {int(escaped.sum())} support points outside the window of {spec}")
    return CrossedElement(spec, support[~outside], fibers[~outside])


def involution(psi: CrossedElement) -> CrossedElement:
    """Psi^<>(xi, zeta) = conj(Psi(xi^-1, zeta xi))."""
    spec = psi.spec
    support, fibers = [], []
    for sigma, fiber in zip(psi.support, psi.fibers):
        xi = spec.negate_dual(sigma)
        # new fiber at zeta reads Psi(sigma, zeta - sigma)
        fibers.append(np.conj(_gather(fiber, shifted_window_index(spec, xi))))
        support.append(xi)
    if not support:
        return CrossedElement.zero(spec)
    return CrossedElement(spec, np.asarray(support), np.asarray(fibers))


def sch(psi: CrossedElement) -> LinOp:
    """Dual-side matrix B[xi, eta] = Psi(xi eta^-1, eta)."""
    spec = psi.spec
    matrix = np.zeros((spec.window_size, spec.window_size), dtype=complex)
    columns = np.arange(spec.window_size)
    for sigma, fiber in zip(psi.support, psi.fibers):
        rows = shifted_window_index(spec, sigma)
        inside = rows >= 0
        matrix[rows[inside], columns[inside]] += fiber[inside]
    return LinOp.from_matrix(spec, "dual", matrix, label="sch")


def partial_fourier(psi: CrossedElement) -> Symbol:
    """(F^-1 (x) id) Psi: f(x, zeta) = sum_sigma sigma(x) Psi(sigma, zeta)."""
    spec = psi.spec
    if len(psi.support) == 0:
        return Symbol.from_grid(spec, np.zeros((1, spec.window_size)), name="0")
    characters = spec.character_table()[spec.window_index(psi.support)]
    grid = characters.T @ psi.fibers
    return Symbol.from_grid(spec, grid, name="F^-1 Psi")


def partial_fourier_inv(f: Symbol, support, spec: GroupSpec) -> tuple[CrossedElement, float]:
    """Fibers Psi(sigma, .) = mean_x conj(sigma(x)) f(x, .) on the declared support.

    Returns the element and the L^2(X x dual) norm of what the support misses.
    """
    support = spec.reduce_dual(np.asarray(support, dtype=np.int64).reshape(-1, spec.ndim))
    grid = f.dense_grid(spec)
    # coefficients[zeta, sigma'] over the window of x-frequencies
    coefficients = fourier(spec, grid.T)
    index = spec.window_index(support)
    if np.any(index < 0):
        raise WindowEscapeError(support[index < 0])
    element = CrossedElement(spec, support, coefficients[:, index].T)
    rebuilt = partial_fourier(element).dense_grid(spec)
    residual = float(np.sqrt(np.mean(np.sum(np.abs(grid - rebuilt) ** 2, axis=-1))))
    if residual > 0:
        logger.debug(f"partial Fourier inverse of {f.name} leaves residual {residual:.3e}")
    return element, residual
