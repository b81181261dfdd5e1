"""Corona filters: nested dual-point families V_1 >= V_2 >= ... standing in for Omega.

A filter only looks at the Z^N part of a dual point (its torus coordinates);
cyclic coordinates are bounded and never approach the corona.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.ndimage
from pydantic import BaseModel

from ..group import DualPoint, GroupSpec, Window

logger = logging.getLogger(__name__)

# (level k, torus coordinates (..., N)) -> boolean mask (...)
LevelPredicate = Callable[[int, np.ndarray], np.ndarray]


class InvarianceReport(BaseModel):
    """Smallest k' with V_k' + zeta contained in V_k, per generator and level (None: not found)."""

    filter: str
    generators: list[list[int]]
    levels: list[int]
    shifts: list[list[int | None]]
    verified: bool


@dataclass(frozen=True)
class CoronaFilter:
    name: str
    predicate: LevelPredicate = field(repr=False)
    generators: tuple[tuple[int, ...], ...] | None = None
    # True when the levels exhaust the corona, so the ideal is the compact operators
    is_full: bool = False

    def contains(self, spec: GroupSpec, k: int, xi) -> np.ndarray:
        xi = spec.check_dual(xi)
        return np.asarray(self.predicate(k, xi[..., list(spec.torus_axes)]), dtype=bool)

    def membership(self, spec: GroupSpec, k: int) -> Callable[[np.ndarray], np.ndarray]:
        """xi -> [xi in V_k], usable as a symbol restriction."""
        return lambda xi: self.contains(spec, k, xi)

    def level_mask(self, spec: GroupSpec, k: int) -> np.ndarray:
        return self.contains(spec, k, spec.window_points)

    def level_masks(self, spec: GroupSpec, k_max: int | None = None) -> list[np.ndarray]:
        """Masks of V_k on the window for k = 1..k_max (default: the deepest nonempty level)."""
        masks = []
        k = 1
        while k_max is None or k <= k_max:
            mask = self.level_mask(spec, k)
            if k_max is None and not mask.any():
                break
            masks.append(mask)
            k += 1
        return masks

    def inner_level_masks(self, spec: GroupSpec, margin: int, k_max: int | None = None) -> list[np.ndarray]:
        """Masks of window points xi whose box {xi + eta : |eta|_inf <= margin} lies in V_k and in the window.

        The box moves torus coordinates only. Levels match ``level_masks``.
        """
        if margin <= 0:
            return self.level_masks(spec, k_max)
        levels = k_max if k_max is not None else self.deepest_level(spec)
        torus = list(spec.torus_axes)
        ranges, box, core = [], [], []
        for axis, size in enumerate(spec.window_shape):
            if axis in torus:
                radius = size // 2 + margin
                ranges.append(np.arange(-radius, radius + 1))
                box.append(2 * margin + 1)
                core.append(slice(margin, -margin))
            else:
                ranges.append(np.arange(size))
                box.append(1)
                core.append(slice(None))
        padded = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1)[..., torus]
        structure = np.ones(box, dtype=bool)
        interior = Window(spec).interior(margin)
        masks = []
        for k in range(1, levels + 1):
            level = np.asarray(self.predicate(k, padded), dtype=bool)
            eroded = scipy.ndimage.binary_erosion(level, structure=structure)
            masks.append(eroded[tuple(core)].reshape(-1) & interior)
        return masks

    def deepest_level(self, spec: GroupSpec) -> int:
        return len(self.level_masks(spec))

    def generator_points(self, spec: GroupSpec) -> list[DualPoint]:
        if self.generators is not None:
            return [DualPoint(spec, g) for g in self.generators]
        points = []
        for axis in spec.torus_axes:
            for sign in (1, -1):
                coords = [0] * spec.ndim
                coords[axis] = sign
                points.append(DualPoint(spec, tuple(coords)))
        return points

    def check_nesting(self, spec: GroupSpec, k_max: int | None = None) -> bool:
        masks = self.level_masks(spec, k_max)
        return all(not np.any(inner & ~outer) for outer, inner in zip(masks, masks[1:]))

    def check_invariance(self, spec: GroupSpec, k_max: int | None = None) -> InvarianceReport:
        """Search, for each generator zeta and level k, the first k' >= k with xi + zeta in V_k for all xi in V_k'.

        The search runs over the window; translates are tested with the level
        predicate itself, so points leaving the window are still classified.
        """
        k_max = k_max or self.deepest_level(spec)
        masks = self.level_masks(spec, k_max)
        window = spec.window_points
        generators = self.generator_points(spec)
        shifts = []
        for zeta in generators:
            moved = window + zeta.array
            row = []
            for k in range(1, k_max + 1):
                escapes = ~self.contains(spec, k, moved)
                found = None
                for k_prime in range(k, k_max + 1):
                    if not np.any(masks[k_prime - 1] & escapes):
                        found = k_prime
                        break
                row.append(found)
            shifts.append(row)
        # the deepest levels have no room left inside the window; only the first third is required
        checked = max(1, k_max // 3)
        verified = all(all(s is not None for s in row[:checked]) for row in shifts)
        if not verified:
            logger.warning(f"invariance of filter {self.name} could not be verified on {spec}")
        return InvarianceReport(
            filter=self.name,
            generators=[list(z.coords) for z in generators],
            levels=list(range(1, k_max + 1)),
            shifts=shifts,
            verified=verified,
        )


def full_corona(generators=None) -> CoronaFilter:
    """All of the Stone-Cech corona: V_k = {|xi|_inf >= k}."""

    def predicate(k, t):
        if t.shape[-1] == 0:
            return np.zeros(t.shape[:-1], dtype=bool)
        return np.max(np.abs(t), axis=-1) >= k

    return CoronaFilter("full", predicate, _as_generators(generators), is_full=True)


def cone_corona(directions, angle: float, name: str | None = None, generators=None) -> CoronaFilter:
    """Directions at infinity inside a cone: V_k = {|xi| >= k, angle(xi, D) <= angle + 1/k}."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    directions = directions / np.linalg.norm(directions, axis=-1, keepdims=True)

    def predicate(k, t):
        t = np.asarray(t, dtype=float)
        radius = np.linalg.norm(t, axis=-1)
        unit = t / np.where(radius > 0, radius, 1.0)[..., None]
        cosines = np.clip(unit @ directions.T, -1.0, 1.0)
        distance = np.arccos(np.max(cosines, axis=-1))
        return (radius >= k) & (distance <= angle + 1.0 / k)

    label = name or f"cone{directions.round(3).tolist()}"
    return CoronaFilter(label, predicate, _as_generators(generators))


def union(*filters: CoronaFilter, name: str | None = None) -> CoronaFilter:
    def predicate(k, t):
        return np.logical_or.reduce([f.predicate(k, t) for f in filters])

    return CoronaFilter(
        name or "|".join(f.name for f in filters),
        predicate,
        _merged_generators(filters),
        is_full=any(f.is_full for f in filters),
    )


def intersection(*filters: CoronaFilter, name: str | None = None) -> CoronaFilter:
    def predicate(k, t):
        return np.logical_and.reduce([f.predicate(k, t) for f in filters])

    return CoronaFilter(name or "&".join(f.name for f in filters), predicate, _merged_generators(filters))


def custom(name: str, predicate: LevelPredicate, generators=None) -> CoronaFilter:
    return CoronaFilter(name, predicate, _as_generators(generators))


def _as_generators(generators):
    if generators is None:
        return None
    return tuple(tuple(int(c) for c in g) for g in generators)


def _merged_generators(filters):
    if all(f.generators is None for f in filters):
        return None
    merged = []
    for f in filters:
        for g in f.generators or ():
            if g not in merged:
                merged.append(g)
    return tuple(merged)
