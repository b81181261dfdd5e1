"""Compact abelian groups built from torus and finite cyclic factors.

A ``GroupSpec`` describes X = T^a x Z_m1 x ... together with its sampling grid
(uniform on every torus factor) and the finite window of the dual group used
as the truncation of Xi. Points of the grid and of the window are enumerated
lexicographically (C order over the factors); every matrix in the package is
indexed with this enumeration.
"""

import functools
import json
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import ShapeMismatchError, SpecMismatchError


class Torus(BaseModel):
    """A circle factor sampled on ``grid`` points with dual window [-window, window]."""

    model_config = ConfigDict(frozen=True)

    grid: int = Field(gt=0)
    window: int = Field(gt=0)

    @model_validator(mode="after")
    def _check_nyquist(self):
        if self.grid < 2 * self.window + 1:
            raise ValueError(
                f"torus grid {self.grid} cannot resolve window {self.window} "
                f"(need grid >= {2 * self.window + 1})"
            )
        return self


class Cyclic(BaseModel):
    """A finite cyclic factor Z_m. Its dual is Z_m, kept whole in the window."""

    model_config = ConfigDict(frozen=True)

    order: int = Field(gt=0)


Factor = Torus | Cyclic


class GroupSpec(BaseModel):
    """Product of torus and cyclic factors with grid and dual window.

    JSON form: ``{"factors": [{"torus": {"grid": 64, "window": 31}}, {"cyclic": 8}]}``.
    """

    model_config = ConfigDict(frozen=True)

    factors: tuple[Factor, ...] = Field(min_length=1)

    @field_validator("factors", mode="before")
    @classmethod
    def _parse_factors(cls, value):
        parsed = []
        for item in value:
            if isinstance(item, dict) and "torus" in item:
                parsed.append(Torus(**item["torus"]))
            elif isinstance(item, dict) and "cyclic" in item:
                order = item["cyclic"]
                parsed.append(Cyclic(order=order["order"] if isinstance(order, dict) else order))
            else:
                parsed.append(item)
        return tuple(parsed)

    # --- construction / serialisation ---

    @classmethod
    def torus(cls, window: int, dims: int = 1, grid: int | None = None) -> "GroupSpec":
        """T^dims with the smallest grid resolving the window unless ``grid`` is given."""
        grid = 2 * window + 1 if grid is None else grid
        return cls(factors=tuple(Torus(grid=grid, window=window) for _ in range(dims)))

    @classmethod
    def cyclic(cls, *orders: int) -> "GroupSpec":
        return cls(factors=tuple(Cyclic(order=m) for m in orders))

    @classmethod
    def from_json(cls, description) -> "GroupSpec":
        if isinstance(description, str):
            description = json.loads(description)
        return cls.model_validate(description)

    def to_json(self) -> dict:
        factors = []
        for factor in self.factors:
            if isinstance(factor, Torus):
                factors.append({"torus": {"grid": factor.grid, "window": factor.window}})
            else:
                factors.append({"cyclic": factor.order})
        return {"factors": factors}

    def with_window(self, window: int) -> "GroupSpec":
        """Same group with every torus window set to ``window``; grids grow if needed."""
        factors = []
        for factor in self.factors:
            if isinstance(factor, Torus):
                factors.append(Torus(grid=max(factor.grid, 2 * window + 1), window=window))
            else:
                factors.append(factor)
        return GroupSpec(factors=tuple(factors))

    def __str__(self) -> str:
        parts = []
        for factor in self.factors:
            if isinstance(factor, Torus):
                parts.append(f"T[{factor.grid}|{factor.window}]")
            else:
                parts.append(f"Z{factor.order}")
        return " x ".join(parts)

    # --- layout ---

    @property
    def layout(self) -> "Layout":
        return _layout(self)

    @property
    def ndim(self) -> int:
        return len(self.factors)

    @property
    def torus_axes(self) -> tuple[int, ...]:
        return self.layout.torus_axes

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return self.layout.grid_shape

    @property
    def window_shape(self) -> tuple[int, ...]:
        return self.layout.window_shape

    @property
    def grid_size(self) -> int:
        return int(np.prod(self.layout.grid_shape))

    @property
    def window_size(self) -> int:
        return int(np.prod(self.layout.window_shape))

    @property
    def grid_points(self) -> np.ndarray:
        """(grid_size, ndim) float coordinates: t in [0,1) on tori, residues on cyclic factors."""
        return self.layout.grid_points

    @property
    def window_points(self) -> np.ndarray:
        """(window_size, ndim) integer dual coordinates."""
        return self.layout.window_points

    @property
    def unit_index(self) -> int:
        return int(self.window_index(np.zeros(self.ndim, dtype=int)))

    # --- vectorised group law ---

    def check_dual(self, xi) -> np.ndarray:
        xi = np.asarray(xi)
        if xi.shape[-1:] != (self.ndim,):
            raise SpecMismatchError(f"dual points have {xi.shape[-1:]} coordinates, {self} needs {self.ndim}")
        return xi

    def check_space(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.ndim,):
            raise SpecMismatchError(f"group points have {x.shape[-1:]} coordinates, {self} needs {self.ndim}")
        return x

    def reduce_dual(self, xi) -> np.ndarray:
        xi = np.array(self.check_dual(xi), dtype=np.int64, copy=True)
        for axis in self.layout.cyclic_axes:
            xi[..., axis] %= int(self.layout.periods[axis])
        return xi

    def reduce_space(self, x) -> np.ndarray:
        return np.mod(self.check_space(x), self.layout.periods)

    def add_dual(self, xi, eta) -> np.ndarray:
        return self.reduce_dual(self.check_dual(xi) + self.check_dual(eta))

    def negate_dual(self, xi) -> np.ndarray:
        return self.reduce_dual(-self.check_dual(xi))

    def negate_space(self, x) -> np.ndarray:
        return self.reduce_space(-self.check_space(x))

    def phase(self, xi, x) -> np.ndarray:
        """Broadcast sum_j xi_j x_j / period_j; the character is exp(2 pi i phase)."""
        xi = self.check_dual(xi)
        x = self.check_space(x)
        return np.sum(xi * (x / self.layout.periods), axis=-1)

    def characters(self, xi, x) -> np.ndarray:
        return np.exp(2j * np.pi * self.phase(xi, x))

    def window_index(self, xi) -> np.ndarray:
        """Enumeration index of dual points in the window, -1 for points outside it."""
        xi = self.reduce_dual(xi)
        offsets = self.layout.window_offsets
        shape = np.asarray(self.layout.window_shape)
        shifted = xi + offsets
        inside = np.all((shifted >= 0) & (shifted < shape), axis=-1)
        clipped = np.clip(shifted, 0, shape - 1)
        flat = np.ravel_multi_index(tuple(np.moveaxis(clipped, -1, 0)), tuple(shape))
        return np.where(inside, flat, -1)

    def grid_index(self, x, atol: float = 1e-6) -> np.ndarray:
        """Enumeration index of grid points, -1 for points off the grid."""
        x = self.reduce_space(x)
        steps = x * self.layout.steps_per_unit
        nearest = np.rint(steps)
        on_grid = np.all(np.abs(steps - nearest) <= atol, axis=-1)
        multi = np.mod(nearest.astype(np.int64), np.asarray(self.layout.grid_shape))
        flat = np.ravel_multi_index(tuple(np.moveaxis(multi, -1, 0)), self.layout.grid_shape)
        return np.where(on_grid, flat, -1)

    def grid_difference_index(self) -> np.ndarray:
        """(grid_size, grid_size) table of the index of x_g - x_h."""
        return _grid_difference_index(self)

    def grid_frequencies(self) -> np.ndarray:
        """Centered integer frequencies of the full grid (one per grid point), DFT order."""
        return self.layout.grid_frequencies

    def character_table(self) -> np.ndarray:
        """(window_size, grid_size) table of xi(x) over window and grid, computed exactly mod 1."""
        return _character_table(self)

    def check_samples(self, samples) -> np.ndarray:
        """Flatten grid samples; accepts (grid_size,) or the factor-shaped grid."""
        samples = np.asarray(samples)
        if samples.shape == self.grid_shape:
            return samples.reshape(self.grid_size)
        if samples.shape[-1:] != (self.grid_size,):
            raise ShapeMismatchError(
                f"samples of shape {samples.shape} do not match grid {self.grid_shape} of {self}"
            )
        return samples

    def check_coefficients(self, coefficients) -> np.ndarray:
        coefficients = np.asarray(coefficients)
        if coefficients.shape[-1:] != (self.window_size,):
            raise ShapeMismatchError(
                f"coefficients of shape {coefficients.shape} do not match window size {self.window_size}"
            )
        return coefficients


@dataclass(frozen=True)
class Layout:
    """Precomputed enumeration data for a GroupSpec."""

    torus_axes: tuple[int, ...]
    cyclic_axes: tuple[int, ...]
    grid_shape: tuple[int, ...]
    window_shape: tuple[int, ...]
    periods: np.ndarray = field(repr=False)
    steps_per_unit: np.ndarray = field(repr=False)
    window_offsets: np.ndarray = field(repr=False)
    grid_multi: np.ndarray = field(repr=False)
    grid_points: np.ndarray = field(repr=False)
    window_points: np.ndarray = field(repr=False)
    grid_frequencies: np.ndarray = field(repr=False)


def _enumerate(ranges: list[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*ranges, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=-1)


@functools.lru_cache(maxsize=64)
def _layout(spec: GroupSpec) -> Layout:
    torus_axes, cyclic_axes = [], []
    grid_shape, window_shape = [], []
    periods, steps, offsets = [], [], []
    window_ranges, frequency_ranges = [], []
    for axis, factor in enumerate(spec.factors):
        if isinstance(factor, Torus):
            torus_axes.append(axis)
            grid_shape.append(factor.grid)
            window_shape.append(2 * factor.window + 1)
            periods.append(1.0)
            steps.append(float(factor.grid))
            offsets.append(factor.window)
            window_ranges.append(np.arange(-factor.window, factor.window + 1))
            frequency_ranges.append(np.fft.fftfreq(factor.grid, d=1.0 / factor.grid).astype(np.int64))
        else:
            cyclic_axes.append(axis)
            grid_shape.append(factor.order)
            window_shape.append(factor.order)
            periods.append(float(factor.order))
            steps.append(1.0)
            offsets.append(0)
            window_ranges.append(np.arange(factor.order))
            frequency_ranges.append(np.arange(factor.order))

    grid_multi = _enumerate([np.arange(n) for n in grid_shape]).astype(np.int64)
    steps = np.asarray(steps)
    # torus coordinates i/n in [0,1); cyclic coordinates are the residues themselves
    grid_points = grid_multi / steps
    return Layout(
        torus_axes=tuple(torus_axes),
        cyclic_axes=tuple(cyclic_axes),
        grid_shape=tuple(grid_shape),
        window_shape=tuple(window_shape),
        periods=np.asarray(periods),
        steps_per_unit=steps,
        window_offsets=np.asarray(offsets, dtype=np.int64),
        grid_multi=grid_multi,
        grid_points=grid_points,
        window_points=_enumerate(window_ranges).astype(np.int64),
        grid_frequencies=_enumerate(frequency_ranges).astype(np.int64),
    )


@functools.lru_cache(maxsize=8)
def _character_table(spec: GroupSpec) -> np.ndarray:
    layout = spec.layout
    shape = np.asarray(layout.grid_shape)
    # exact integer phase: k_j * i_j mod n_j (torus) and k_j * r_j mod m_j (cyclic)
    numerators = np.mod(
        layout.window_points[:, None, :] * layout.grid_multi[None, :, :], shape
    )
    phase = np.sum(numerators / shape, axis=-1)
    return np.exp(2j * np.pi * phase)


@functools.lru_cache(maxsize=8)
def _grid_difference_index(spec: GroupSpec) -> np.ndarray:
    layout = spec.layout
    shape = np.asarray(layout.grid_shape)
    diff = np.mod(layout.grid_multi[:, None, :] - layout.grid_multi[None, :, :], shape)
    return np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), layout.grid_shape)
