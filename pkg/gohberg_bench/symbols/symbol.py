"""Functions on X, on the dual, and on phase space X x dual.

Rules are vectorised: a dual rule maps an integer array (..., ndim) to complex
values (...), a space rule maps float coordinates (..., ndim) to (...), and a
symbol rule maps broadcastable pairs (x, xi) to their common batch shape.
Grids are cached per GroupSpec the first time they are requested.
"""

import logging
import threading
from typing import Callable

import numpy as np

from ..errors import OffGridError
from ..group import DualPoint, GroupPoint, GroupSpec

logger = logging.getLogger(__name__)

DualRule = Callable[[np.ndarray], np.ndarray]
SpaceRule = Callable[[np.ndarray], np.ndarray]
SymbolRule = Callable[[np.ndarray, np.ndarray], np.ndarray]


class _GridCache:
    """Per-spec memo of sampled values, safe to share between worker threads."""

    def __init__(self):
        self._values: dict[GroupSpec, np.ndarray] = {}
        self._lock = threading.Lock()

    def get(self, spec: GroupSpec, compute: Callable[[], np.ndarray]) -> np.ndarray:
        with self._lock:
            cached = self._values.get(spec)
        if cached is None:
            cached = compute()
            cached.setflags(write=False)
            with self._lock:
                self._values.setdefault(spec, cached)
        return cached

    def has(self, spec: GroupSpec) -> bool:
        with self._lock:
            return spec in self._values

    def seed(self, spec: GroupSpec, values: np.ndarray):
        values = np.array(values, dtype=complex)
        values.setflags(write=False)
        with self._lock:
            self._values[spec] = values


class DualFunction:
    """A bounded function psi on the dual group."""

    def __init__(self, rule: DualRule, name: str = "psi"):
        self.rule = rule
        self.name = name
        self._cache = _GridCache()

    def __repr__(self) -> str:
        return f"DualFunction({self.name})"

    def __call__(self, xi) -> np.ndarray | complex:
        if isinstance(xi, DualPoint):
            return complex(self.rule(xi.array))
        return np.asarray(self.rule(np.asarray(xi)), dtype=complex)

    def values(self, spec: GroupSpec) -> np.ndarray:
        """Values on the window enumeration."""
        return self._cache.get(
            spec, lambda: np.asarray(self.rule(spec.window_points), dtype=complex).reshape(spec.window_size)
        )

    def sup_norm(self, spec: GroupSpec) -> float:
        return float(np.max(np.abs(self.values(spec))))

    @classmethod
    def constant(cls, value: complex = 1.0) -> "DualFunction":
        return cls(lambda xi: np.full(np.shape(xi)[:-1], value, dtype=complex), name=f"const({value})")

    @classmethod
    def from_values(cls, spec: GroupSpec, values, name: str = "sampled") -> "DualFunction":
        """Window samples extended by zero outside the window."""
        values = np.asarray(spec.check_coefficients(values), dtype=complex)

        def rule(xi):
            index = spec.window_index(xi)
            return np.where(index >= 0, values[np.maximum(index, 0)], 0.0)

        function = cls(rule, name=name)
        function._cache.seed(spec, values)
        return function

    def translate(self, eta: DualPoint) -> "DualFunction":
        """theta_eta psi: xi -> psi(xi eta)."""
        spec, shift = eta.spec, eta.array
        return DualFunction(lambda xi: self.rule(spec.add_dual(xi, shift)), name=f"{self.name}(.+{eta.coords})")

    def restrict(self, keep: Callable[[np.ndarray], np.ndarray], name: str | None = None) -> "DualFunction":
        """psi * 1_S for the dual set S described by ``keep``."""
        return DualFunction(lambda xi: np.where(keep(xi), self.rule(xi), 0.0), name=name or f"{self.name}|S")

    def conj(self) -> "DualFunction":
        return DualFunction(lambda xi: np.conj(self.rule(xi)), name=f"conj({self.name})")

    def __mul__(self, other) -> "DualFunction":
        if isinstance(other, DualFunction):
            return DualFunction(lambda xi: self.rule(xi) * other.rule(xi), name=f"{self.name}*{other.name}")
        return DualFunction(lambda xi: other * self.rule(xi), name=f"{other}*{self.name}")

    __rmul__ = __mul__

    def __add__(self, other: "DualFunction") -> "DualFunction":
        return DualFunction(lambda xi: self.rule(xi) + other.rule(xi), name=f"{self.name}+{other.name}")

    def __sub__(self, other: "DualFunction") -> "DualFunction":
        return DualFunction(lambda xi: self.rule(xi) - other.rule(xi), name=f"{self.name}-{other.name}")


class SpaceFunction:
    """A continuous function phi on X, sampled on the grid."""

    def __init__(self, rule: SpaceRule, name: str = "phi", constant: complex | None = None):
        self.rule = rule
        self.name = name
        self.constant_value = constant
        self._cache = _GridCache()

    def __repr__(self) -> str:
        return f"SpaceFunction({self.name})"

    def __call__(self, x) -> np.ndarray | complex:
        if isinstance(x, GroupPoint):
            return complex(self.rule(x.array))
        return np.asarray(self.rule(np.asarray(x, dtype=float)), dtype=complex)

    def values(self, spec: GroupSpec) -> np.ndarray:
        return self._cache.get(
            spec, lambda: np.broadcast_to(
                np.asarray(self.rule(spec.grid_points), dtype=complex), (spec.grid_size,)
            ).copy()
        )

    def sup_norm(self, spec: GroupSpec) -> float:
        return float(np.max(np.abs(self.values(spec))))

    @property
    def is_constant(self) -> bool:
        return self.constant_value is not None

    @classmethod
    def constant(cls, value: complex = 1.0) -> "SpaceFunction":
        return cls(lambda x: np.full(np.shape(x)[:-1], value, dtype=complex), name=f"const({value})", constant=value)

    @classmethod
    def character(cls, xi: DualPoint) -> "SpaceFunction":
        """x -> xi(x)."""
        spec, coords = xi.spec, xi.array
        return cls(lambda x: spec.characters(coords, x), name=f"chi{xi.coords}")

    @classmethod
    def from_values(cls, spec: GroupSpec, values, name: str = "sampled") -> "SpaceFunction":
        values = np.asarray(spec.check_samples(values), dtype=complex)

        def rule(x):
            index = spec.grid_index(x)
            if np.any(index < 0):
                raise OffGridError(f"{name} is only known on the grid of {spec}")
            return values[index]

        function = cls(rule, name=name)
        function._cache.seed(spec, values)
        return function

    def __mul__(self, other) -> "SpaceFunction":
        if isinstance(other, SpaceFunction):
            constant = None
            if self.is_constant and other.is_constant:
                constant = self.constant_value * other.constant_value
            return SpaceFunction(lambda x: self.rule(x) * other.rule(x), name=f"{self.name}*{other.name}", constant=constant)
        constant = None if not self.is_constant else other * self.constant_value
        return SpaceFunction(lambda x: other * self.rule(x), name=f"{other}*{self.name}", constant=constant)

    __rmul__ = __mul__


class Symbol:
    """A bounded function f(x, xi) on phase space X x dual.

    ``x_independent`` symbols are sampled as a single row and broadcast over
    the grid. Separable symbols phi (x) psi keep their factors so quantization
    can use multiplication and Fourier multipliers directly.
    """

    def __init__(
        self,
        rule: SymbolRule,
        name: str = "f",
        x_independent: bool = False,
        factors: tuple[SpaceFunction, DualFunction] | None = None,
    ):
        self.rule = rule
        self.name = name
        self.x_independent = x_independent
        self.factors = factors
        self._cache = _GridCache()

    def __repr__(self) -> str:
        return f"Symbol({self.name})"

    # --- construction ---

    @classmethod
    def separable(cls, phi: SpaceFunction, psi: DualFunction, name: str | None = None) -> "Symbol":
        """phi (x) psi: (x, xi) -> phi(x) psi(xi)."""
        if phi.is_constant:
            value = phi.constant_value
            rule = lambda x, xi: value * np.asarray(psi.rule(xi), dtype=complex)  # noqa: E731
        else:
            rule = lambda x, xi: np.asarray(phi.rule(x), dtype=complex) * psi.rule(xi)  # noqa: E731
        return cls(rule, name=name or f"{phi.name}(x){psi.name}", x_independent=phi.is_constant, factors=(phi, psi))

    @classmethod
    def multiplier(cls, psi: DualFunction, name: str | None = None) -> "Symbol":
        """1 (x) psi, quantized to the Fourier multiplier psi(P)."""
        return cls.separable(SpaceFunction.constant(1.0), psi, name=name or psi.name)

    @classmethod
    def multiplication(cls, phi: SpaceFunction, name: str | None = None) -> "Symbol":
        """phi (x) 1, quantized to the multiplication operator phi(Q)."""
        return cls.separable(phi, DualFunction.constant(1.0), name=name or phi.name)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "Symbol":
        return cls.multiplier(DualFunction.constant(value), name=f"const({value})")

    @classmethod
    def from_grid(cls, spec: GroupSpec, values, name: str = "sampled") -> "Symbol":
        """Symbol known only on grid x window, extended by zero outside the window."""
        values = np.asarray(values, dtype=complex)
        if values.ndim != 2 or values.shape[1] != spec.window_size or values.shape[0] not in (1, spec.grid_size):
            raise ValueError(f"symbol grid of shape {values.shape} does not fit {spec}")
        x_independent = values.shape[0] == 1

        def rule(x, xi):
            windex = spec.window_index(xi)
            if x_independent:
                gindex = np.zeros(np.shape(x)[:-1], dtype=np.int64)
            else:
                gindex = spec.grid_index(x)
                if np.any(gindex < 0):
                    raise OffGridError(f"{name} is only known on the grid of {spec}")
            return np.where(windex >= 0, values[gindex, np.maximum(windex, 0)], 0.0)

        symbol = cls(rule, name=name, x_independent=x_independent)
        symbol._cache.seed(spec, values)
        return symbol

    # --- evaluation ---

    def __call__(self, x: GroupPoint, xi: DualPoint) -> complex:
        return complex(self.rule(x.array, xi.array))

    def evaluate(self, x, xi) -> np.ndarray:
        """Broadcast evaluation on raw coordinate arrays."""
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi)
        shape = np.broadcast_shapes(x.shape[:-1], xi.shape[:-1])
        return np.broadcast_to(np.asarray(self.rule(x, xi), dtype=complex), shape)

    def grid(self, spec: GroupSpec) -> np.ndarray:
        """Samples over grid x window, shape (grid_size, window_size) or (1, window_size)."""
        return self._cache.get(spec, lambda: self._sample(spec))

    def _sample(self, spec: GroupSpec) -> np.ndarray:
        rows = 1 if self.x_independent else spec.grid_size
        x = spec.grid_points[:rows, None, :]
        xi = spec.window_points[None, :, :]
        logger.debug(f"sampling {self.name} on {rows} x {spec.window_size} points of {spec}")
        return np.array(self.evaluate(x, xi), dtype=complex)

    def is_sampled(self, spec: GroupSpec) -> bool:
        return self._cache.has(spec)

    def dense_grid(self, spec: GroupSpec) -> np.ndarray:
        """Samples broadcast to the full (grid_size, window_size) shape."""
        return np.broadcast_to(self.grid(spec), (spec.grid_size, spec.window_size))

    def sup_norm(self, spec: GroupSpec) -> float:
        return float(np.max(np.abs(self.grid(spec))))

    # --- derived symbols ---

    def translate_dual(self, eta: DualPoint) -> "Symbol":
        """(x, xi) -> f(x, xi eta)."""
        spec, shift = eta.spec, eta.array
        factors = None
        if self.factors is not None:
            factors = (self.factors[0], self.factors[1].translate(eta))
        return Symbol(
            lambda x, xi: self.rule(x, spec.add_dual(xi, shift)),
            name=f"{self.name}(.+{eta.coords})",
            x_independent=self.x_independent,
            factors=factors,
        )

    def restrict(self, keep: Callable[[np.ndarray], np.ndarray], name: str | None = None) -> "Symbol":
        """f * 1_S(xi) for the dual set S described by ``keep``."""
        factors = None
        if self.factors is not None:
            factors = (self.factors[0], self.factors[1].restrict(keep))
        return Symbol(
            lambda x, xi: np.where(keep(xi), self.rule(x, xi), 0.0),
            name=name or f"{self.name}|S",
            x_independent=self.x_independent,
            factors=factors,
        )

    def conj(self) -> "Symbol":
        factors = None
        if self.factors is not None:
            phi, psi = self.factors
            phi = SpaceFunction(
                lambda x: np.conj(phi.rule(x)),
                name=f"conj({phi.name})",
                constant=None if not phi.is_constant else np.conj(phi.constant_value),
            )
            factors = (phi, psi.conj())
        return Symbol(
            lambda x, xi: np.conj(self.rule(x, xi)),
            name=f"conj({self.name})",
            x_independent=self.x_independent,
            factors=factors,
        )

    def modulus(self) -> "Symbol":
        return Symbol(
            lambda x, xi: np.abs(self.rule(x, xi)).astype(complex),
            name=f"|{self.name}|",
            x_independent=self.x_independent,
        )

    def __mul__(self, other) -> "Symbol":
        if isinstance(other, Symbol):
            factors = None
            if self.factors is not None and other.factors is not None:
                factors = (self.factors[0] * other.factors[0], self.factors[1] * other.factors[1])
            return Symbol(
                lambda x, xi: self.rule(x, xi) * other.rule(x, xi),
                name=f"{self.name}*{other.name}",
                x_independent=self.x_independent and other.x_independent,
                factors=factors,
            )
        factors = None if self.factors is None else (self.factors[0], other * self.factors[1])
        return Symbol(
            lambda x, xi: other * self.rule(x, xi),
            name=f"{other}*{self.name}",
            x_independent=self.x_independent,
            factors=factors,
        )

    __rmul__ = __mul__

    def __add__(self, other: "Symbol") -> "Symbol":
        return Symbol(
            lambda x, xi: self.rule(x, xi) + other.rule(x, xi),
            name=f"{self.name}+{other.name}",
            x_independent=self.x_independent and other.x_independent,
        )

    def __sub__(self, other: "Symbol") -> "Symbol":
        return Symbol(
            lambda x, xi: self.rule(x, xi) - other.rule(x, xi),
            name=f"{self.name}-{other.name}",
            x_independent=self.x_independent and other.x_independent,
        )
