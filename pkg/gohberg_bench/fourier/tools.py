"""Fourier transform between grid samples on X and window coefficients on the dual.

(F u)(xi) = mean_x conj(xi(x)) u(x) and (F^-1 w)(x) = sum_xi xi(x) w(xi). With the
normalized Haar measure on X and counting measure on the dual, F is unitary on
functions band-limited to the window. Inputs with spectrum outside the window
alias onto it; every construction in the package only uses window characters.

Two paths are provided: ``direct`` sums against the character table (the
reference) and ``fft`` uses numpy.fft on the factor-shaped grid.
"""

import functools
import logging

import numpy as np

from ..config import DIRECT_LIMIT
from ..errors import OffGridError
from ..group import GroupPoint, GroupSpec

logger = logging.getLogger(__name__)

_METHODS = ("auto", "direct", "fft")


def _resolve(spec: GroupSpec, method: str) -> str:
    if method not in _METHODS:
        raise ValueError(f"unknown Fourier method {method!r}, expected one of {_METHODS}")
    if method == "auto":
        return "direct" if spec.grid_size * spec.window_size <= DIRECT_LIMIT else "fft"
    return method


@functools.lru_cache(maxsize=16)
def _window_in_grid(spec: GroupSpec) -> np.ndarray:
    """Flat DFT index of every window character on the grid."""
    shape = np.asarray(spec.grid_shape)
    multi = np.mod(spec.window_points, shape)
    return np.ravel_multi_index(tuple(multi.T), spec.grid_shape)


def fourier(spec: GroupSpec, u, method: str = "auto") -> np.ndarray:
    """SpaceVec (..., grid_size) -> DualVec (..., window_size)."""
    u = np.asarray(spec.check_samples(u), dtype=complex)
    if _resolve(spec, method) == "direct":
        return u @ spec.character_table().conj().T / spec.grid_size
    batch = u.shape[:-1]
    shaped = u.reshape(batch + spec.grid_shape)
    axes = tuple(range(len(batch), len(batch) + spec.ndim))
    spectrum = np.fft.fftn(shaped, axes=axes).reshape(batch + (spec.grid_size,))
    return spectrum[..., _window_in_grid(spec)] / spec.grid_size


def inv_fourier(spec: GroupSpec, w, method: str = "auto") -> np.ndarray:
    """DualVec (..., window_size) -> SpaceVec (..., grid_size): x -> sum_xi xi(x) w(xi)."""
    w = np.asarray(spec.check_coefficients(w), dtype=complex)
    if _resolve(spec, method) == "direct":
        return w @ spec.character_table()
    batch = w.shape[:-1]
    spectrum = np.zeros(batch + (spec.grid_size,), dtype=complex)
    spectrum[..., _window_in_grid(spec)] = w
    shaped = spectrum.reshape(batch + spec.grid_shape)
    axes = tuple(range(len(batch), len(batch) + spec.ndim))
    values = np.fft.ifftn(shaped, axes=axes) * spec.grid_size
    return values.reshape(batch + (spec.grid_size,))


def fourier_matrix(spec: GroupSpec) -> np.ndarray:
    """Dense (window_size, grid_size) matrix of F."""
    return spec.character_table().conj() / spec.grid_size


def inv_fourier_matrix(spec: GroupSpec) -> np.ndarray:
    """Dense (grid_size, window_size) matrix of F^-1."""
    return spec.character_table().T.copy()


def grid_spectrum(spec: GroupSpec, u) -> np.ndarray:
    """Coefficients of u against every character the grid resolves, in DFT order."""
    u = np.asarray(spec.check_samples(u), dtype=complex)
    batch = u.shape[:-1]
    shaped = u.reshape(batch + spec.grid_shape)
    axes = tuple(range(len(batch), len(batch) + spec.ndim))
    return np.fft.fftn(shaped, axes=axes).reshape(batch + (spec.grid_size,)) / spec.grid_size


def translate_x(spec: GroupSpec, u, x0: GroupPoint) -> np.ndarray:
    """Grid samples of x -> u(x - x0); x0 must be a grid point."""
    index = x0.grid_index
    if index < 0:
        raise OffGridError(f"{x0.coords} is not a grid point of {spec}")
    u = np.asarray(spec.check_samples(u))
    shift = spec.layout.grid_multi[index]
    shaped = u.reshape(u.shape[:-1] + spec.grid_shape)
    axes = tuple(range(u.ndim - 1, u.ndim - 1 + spec.ndim))
    return np.roll(shaped, shift=tuple(int(s) for s in shift), axis=axes).reshape(u.shape)


def l2_norm(spec: GroupSpec, u) -> float | np.ndarray:
    """Norm in L^2(X) for the normalized Haar measure (grid mean)."""
    u = np.asarray(spec.check_samples(u))
    result = np.sqrt(np.mean(np.abs(u) ** 2, axis=-1))
    return float(result) if np.ndim(result) == 0 else result
