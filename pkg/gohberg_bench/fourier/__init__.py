from .tools import (
    fourier,
    fourier_matrix,
    grid_spectrum,
    inv_fourier,
    inv_fourier_matrix,
    l2_norm,
    translate_x,
)

__all__ = [
    "fourier",
    "fourier_matrix",
    "grid_spectrum",
    "inv_fourier",
    "inv_fourier_matrix",
    "l2_norm",
    "translate_x",
]
