"""Points of X, points of its dual, and the dual window."""

from dataclasses import dataclass

import numpy as np

from .spec import GroupSpec


@dataclass(frozen=True)
class GroupPoint:
    """A point x of X; torus coordinates t stand for e^{2 pi i t}."""

    spec: GroupSpec
    coords: tuple[float, ...]

    def __post_init__(self):
        reduced = self.spec.reduce_space(np.asarray(self.coords, dtype=float))
        object.__setattr__(self, "coords", tuple(float(c) for c in reduced))

    @classmethod
    def identity(cls, spec: GroupSpec) -> "GroupPoint":
        return cls(spec, (0.0,) * spec.ndim)

    @classmethod
    def from_grid(cls, spec: GroupSpec, index: int) -> "GroupPoint":
        return cls(spec, tuple(spec.grid_points[index]))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    @property
    def grid_index(self) -> int:
        """Index in the grid enumeration, -1 when off the grid."""
        return int(self.spec.grid_index(self.array))

    def inverse(self) -> "GroupPoint":
        return GroupPoint(self.spec, tuple(self.spec.negate_space(self.array)))


@dataclass(frozen=True)
class DualPoint:
    """A character xi of X: integers on torus factors, residues mod m on cyclic ones."""

    spec: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self):
        reduced = self.spec.reduce_dual(np.asarray(self.coords, dtype=np.int64))
        object.__setattr__(self, "coords", tuple(int(c) for c in reduced))

    @classmethod
    def unit(cls, spec: GroupSpec) -> "DualPoint":
        return cls(spec, (0,) * spec.ndim)

    @classmethod
    def from_window(cls, spec: GroupSpec, index: int) -> "DualPoint":
        return cls(spec, tuple(spec.window_points[index]))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.int64)

    @property
    def window_index(self) -> int:
        """Index in the window enumeration, -1 when outside the window."""
        return int(self.spec.window_index(self.array))

    @property
    def is_unit(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "DualPoint") -> "DualPoint":
        from .tools import translate

        return translate(self, other)

    def __neg__(self) -> "DualPoint":
        from .tools import negate

        return negate(self)


@dataclass(frozen=True)
class Window:
    """The finite set of dual points with torus coordinates in [-M_j, M_j]."""

    spec: GroupSpec

    @property
    def points(self) -> np.ndarray:
        return self.spec.window_points

    @property
    def size(self) -> int:
        return self.spec.window_size

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        for index in range(self.size):
            yield DualPoint.from_window(self.spec, index)

    def __contains__(self, xi) -> bool:
        coords = xi.array if isinstance(xi, DualPoint) else np.asarray(xi)
        return bool(self.spec.window_index(coords) >= 0)

    def indicator(self, xi) -> np.ndarray:
        """1.0 for window points, 0.0 outside (broadcast over leading axes)."""
        return (self.spec.window_index(xi) >= 0).astype(float)

    def interior(self, margin: int) -> np.ndarray:
        """Boolean mask of window points whose torus coordinates stay ``margin`` away from the edge."""
        mask = np.ones(self.size, dtype=bool)
        for axis in self.spec.torus_axes:
            radius = self.spec.factors[axis].window
            mask &= np.abs(self.points[:, axis]) <= radius - margin
        return mask
