from .element import CrossedElement
from .tools import compose, involution, partial_fourier, partial_fourier_inv, sch

__all__ = [
    "CrossedElement",
    "compose",
    "involution",
    "partial_fourier",
    "partial_fourier_inv",
    "sch",
]
