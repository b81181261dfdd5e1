"""Finitely supported elements Psi(xi, zeta) of the crossed product at window truncation."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatchError, WindowEscapeError
from ..group import DualPoint, GroupSpec
from ..symbols import DualFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CrossedElement:
    """Psi(sigma, zeta) for sigma in a finite support and zeta in the window.

    Fibers are stored on the window and read as zero outside it. Entries with
    sigma zeta outside the window are zeroed on construction; under this
    reduction sch is injective and the diamond product and involution are exact.
    """

    spec: GroupSpec
    support: np.ndarray = field(repr=False)
    fibers: np.ndarray = field(repr=False)

    def __post_init__(self):
        spec = self.spec
        support = spec.reduce_dual(np.asarray(self.support, dtype=np.int64).reshape(-1, spec.ndim))
        fibers = np.atleast_2d(np.asarray(self.fibers, dtype=complex))
        spec.check_coefficients(fibers)
        if fibers.shape[0] != len(support):
            raise ShapeMismatchError(f"{len(support)} support points but {fibers.shape[0]} fibers")
        outside = spec.window_index(support) < 0
        if np.any(outside):
            raise WindowEscapeError(support[outside])
        support, fibers = _merge(support, fibers)
        fibers = fibers * reduction_mask(spec, support)
        fibers.setflags(write=False)
        support.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "fibers", fibers)

    # --- construction ---

    @classmethod
    def zero(cls, spec: GroupSpec) -> "CrossedElement":
        return cls(spec, np.zeros((0, spec.ndim), dtype=np.int64), np.zeros((0, spec.window_size)))

    @classmethod
    def delta(cls, spec: GroupSpec, at, fiber=None) -> "CrossedElement":
        """delta_at (x) fiber; ``fiber`` is a DualFunction, window values, or None for 1."""
        at = at.array if isinstance(at, DualPoint) else np.asarray(at)
        if fiber is None:
            values = np.ones(spec.window_size, dtype=complex)
        elif isinstance(fiber, DualFunction):
            values = fiber.values(spec)
        else:
            values = np.asarray(fiber, dtype=complex)
        return cls(spec, at.reshape(1, -1), values.reshape(1, -1))

    @classmethod
    def random(cls, spec: GroupSpec, support, rng: np.random.Generator) -> "CrossedElement":
        support = np.asarray(support, dtype=np.int64).reshape(-1, spec.ndim)
        shape = (len(support), spec.window_size)
        return cls(spec, support, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

    # --- access ---

    def fiber(self, sigma) -> np.ndarray:
        """Window values of zeta -> Psi(sigma, zeta), zero when sigma is not in the support."""
        sigma = sigma.array if isinstance(sigma, DualPoint) else self.spec.reduce_dual(sigma)
        hits = np.flatnonzero(np.all(self.support == sigma, axis=-1))
        if hits.size == 0:
            return np.zeros(self.spec.window_size, dtype=complex)
        return self.fibers[hits[0]]

    def as_dict(self) -> dict[tuple[int, ...], np.ndarray]:
        return {tuple(int(c) for c in s): f for s, f in zip(self.support, self.fibers)}

    def hs_norm(self) -> float:
        """sqrt(sum |Psi(sigma, zeta)|^2)."""
        return float(np.linalg.norm(self.fibers))

    def allclose(self, other: "CrossedElement", atol: float = 1e-12) -> bool:
        mine, theirs = self.as_dict(), other.as_dict()
        zero = np.zeros(self.spec.window_size)
        for key in set(mine) | set(theirs):
            if not np.allclose(mine.get(key, zero), theirs.get(key, zero), rtol=0.0, atol=atol):
                return False
        return True

    # --- linear structure ---

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        return CrossedElement(
            self.spec,
            np.concatenate([self.support, other.support]),
            np.concatenate([self.fibers, other.fibers]),
        )

    def __mul__(self, scalar: complex) -> "CrossedElement":
        return CrossedElement(self.spec, self.support, scalar * self.fibers)

    __rmul__ = __mul__

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        return self + (-1.0) * other


def shifted_window_index(spec: GroupSpec, sigma: np.ndarray) -> np.ndarray:
    """Window index of zeta + sigma for every window point zeta (-1 outside)."""
    return spec.window_index(spec.add_dual(spec.window_points, sigma))


def reduction_mask(spec: GroupSpec, support: np.ndarray) -> np.ndarray:
    """(s, window) mask of entries with sigma zeta inside the window."""
    if len(support) == 0:
        return np.zeros((0, spec.window_size))
    return np.stack([shifted_window_index(spec, s) >= 0 for s in support]).astype(float)


def _merge(support: np.ndarray, fibers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum fibers of repeated support points, keeping first-seen order."""
    if len(support) == 0:
        return support.copy(), fibers.copy()
    _, first, inverse = np.unique(support, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    merged = np.zeros((len(first), fibers.shape[1]), dtype=complex)
    np.add.at(merged, rank[inverse], fibers)
    return support[np.sort(first)].copy(), merged
