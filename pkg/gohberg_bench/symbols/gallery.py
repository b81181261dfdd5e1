"""Named symbols used by the experiments and the tests.

Dual rules read the leading coordinates of xi as a point of Z^N, so the
gallery targets torus groups (cyclic factors, if present, are ignored by the
radial profiles but enter ``alternating``).
"""

import logging
from typing import Callable

import numpy as np

from .symbol import DualFunction, SpaceFunction, Symbol

logger = logging.getLogger(__name__)


def _radius(xi) -> np.ndarray:
    return np.linalg.norm(np.asarray(xi, dtype=float), axis=-1)


def _direction(direction, ndim: int) -> np.ndarray:
    d = np.zeros(ndim)
    given = np.asarray(direction, dtype=float)[:ndim]
    d[: given.size] = given
    return d / np.linalg.norm(d)


def _angle_to(xi, direction) -> tuple[np.ndarray, np.ndarray]:
    """Angle between xi and a direction, with the mask of xi != 0."""
    xi = np.asarray(xi, dtype=float)
    d = _direction(direction, xi.shape[-1])
    radius = _radius(xi)
    nonzero = radius > 0
    cosine = (xi @ d) / np.where(nonzero, radius, 1.0)
    return np.arccos(np.clip(cosine, -1.0, 1.0)), nonzero


# --- dual functions ---


def sign_function(axis: int = 0) -> DualFunction:
    """xi/|xi| along one axis (0 at the unit)."""
    return DualFunction(lambda xi: np.sign(np.asarray(xi)[..., axis]).astype(complex), name="sign")


def homogeneous0(direction=(1.0,)) -> DualFunction:
    """<xi/|xi|, d>: homogeneous of degree 0, restricted to the lattice."""

    def rule(xi):
        xi = np.asarray(xi, dtype=float)
        d = _direction(direction, xi.shape[-1])
        radius = _radius(xi)
        return np.where(radius > 0, (xi @ d) / np.where(radius > 0, radius, 1.0), 0.0).astype(complex)

    return DualFunction(rule, name="homogeneous0")


def cone_function(direction=(1.0, 0.0), plateau: float = np.pi / 4, ramp: float = np.pi / 4) -> DualFunction:
    """1 on the cone of half-angle ``plateau`` around ``direction``, 0 beyond ``plateau + ramp``, linear between."""

    def rule(xi):
        angle, nonzero = _angle_to(xi, direction)
        profile = np.clip((plateau + ramp - angle) / ramp, 0.0, 1.0)
        return np.where(nonzero, profile, 0.0).astype(complex)

    return DualFunction(rule, name="cone")


def decay_function() -> DualFunction:
    """1/(1+|xi|), a c0 function."""
    return DualFunction(lambda xi: (1.0 / (1.0 + _radius(xi))).astype(complex), name="decay")


_PROFILES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "cos": np.cos,
    "sin": np.sin,
    "tanh": np.tanh,
}


def power_profile(h: str = "cos", p: float = 0.5) -> DualFunction:
    """h(max(|xi|, 1)^p) for p < 1: slowly oscillating, vanishing oscillation at infinity."""
    if not 0 < p < 1:
        raise ValueError(f"power_profile needs 0 < p < 1, got {p}")
    profile = _PROFILES[h]
    return DualFunction(
        lambda xi: profile(np.maximum(_radius(xi), 1.0) ** p).astype(complex),
        name=f"{h}(|xi|^{p})",
    )


def cos_sqrt() -> DualFunction:
    """cos(sqrt(|xi|))."""
    return DualFunction(lambda xi: np.cos(np.sqrt(_radius(xi))).astype(complex), name="cos_sqrt")


def alternating() -> DualFunction:
    """(-1)^(sum of coordinates): bounded, oscillation 2 everywhere."""
    return DualFunction(
        lambda xi: np.where(np.sum(np.asarray(xi), axis=-1) % 2 == 0, 1.0, -1.0).astype(complex),
        name="alternating",
    )


def even_indicator() -> DualFunction:
    """1 on points with even coordinate sum."""
    return DualFunction(
        lambda xi: (np.sum(np.asarray(xi), axis=-1) % 2 == 0).astype(complex),
        name="even",
    )


# --- space functions ---


def cosine(frequency: int = 1, amplitude: float = 0.5, offset: float = 1.0) -> SpaceFunction:
    """offset + amplitude * cos(2 pi frequency x_1)."""
    return SpaceFunction(
        lambda x: (offset + amplitude * np.cos(2 * np.pi * frequency * np.asarray(x)[..., 0])).astype(complex),
        name=f"{offset}+{amplitude}cos({frequency})",
    )


def plane_wave(frequency: int = 1) -> SpaceFunction:
    """e^{2 pi i frequency x_1} on the first torus coordinate."""
    return SpaceFunction(
        lambda x: np.exp(2j * np.pi * frequency * np.asarray(x)[..., 0]),
        name=f"e{frequency}",
    )


# --- symbols ---


def sign(axis: int = 0) -> Symbol:
    return Symbol.multiplier(sign_function(axis), name="sign")


def homogeneous(direction=(1.0,)) -> Symbol:
    return Symbol.multiplier(homogeneous0(direction), name="homogeneous0")


def cone(direction=(1.0, 0.0), plateau: float = np.pi / 4, ramp: float = np.pi / 4) -> Symbol:
    return Symbol.multiplier(cone_function(direction, plateau, ramp), name="cone")


def decay() -> Symbol:
    return Symbol.multiplier(decay_function(), name="decay")


def c0_perturbation(direction=(1.0,), weight: float = 0.5) -> Symbol:
    """homogeneous0 + weight/(1+|xi|): same behaviour at infinity as homogeneous0."""
    return Symbol.multiplier(homogeneous0(direction) + weight * decay_function(), name="c0_perturbation")


def power(h: str = "cos", p: float = 0.5) -> Symbol:
    return Symbol.multiplier(power_profile(h, p), name="power_profile")


def cos_sqrt_symbol() -> Symbol:
    return Symbol.multiplier(cos_sqrt(), name="cos_sqrt")


def alternating_symbol() -> Symbol:
    return Symbol.multiplier(alternating(), name="alternating")


def modulated_sign(frequency: int = 1) -> Symbol:
    """e^{2 pi i x} sign(xi): unimodular in x, same D^Omega as sign."""
    return Symbol.separable(plane_wave(frequency), sign_function(), name="modulated_sign")


def mixed() -> Symbol:
    """(1 + cos(2 pi x)/2) cos(sqrt|xi|)."""
    return Symbol.separable(cosine(), cos_sqrt(), name="mixed")


GALLERY: dict[str, Callable[..., Symbol]] = {
    "sign": sign,
    "homogeneous0": homogeneous,
    "cone": cone,
    "decay": decay,
    "c0_perturbation": c0_perturbation,
    "power_profile": power,
    "cos_sqrt": cos_sqrt_symbol,
    "alternating": alternating_symbol,
    "modulated_sign": modulated_sign,
    "mixed": mixed,
}

DUAL_FUNCTIONS: dict[str, Callable[..., DualFunction]] = {
    "sign": sign_function,
    "homogeneous0": homogeneous0,
    "cone": cone_function,
    "decay": decay_function,
    "power_profile": power_profile,
    "cos_sqrt": cos_sqrt,
    "alternating": alternating,
    "even": even_indicator,
    "constant": DualFunction.constant,
}

SPACE_FUNCTIONS: dict[str, Callable[..., SpaceFunction]] = {
    "constant": SpaceFunction.constant,
    "cosine": cosine,
    "plane_wave": plane_wave,
}


def gallery(**overrides) -> dict[str, Symbol]:
    """Every gallery symbol with default parameters; ``overrides`` maps a name to its keyword arguments."""
    return {name: factory(**overrides.get(name, {})) for name, factory in GALLERY.items()}


def get(name: str, **params) -> Symbol:
    try:
        factory = GALLERY[name]
    except KeyError:
        raise KeyError(f"unknown gallery symbol {name!r}, available: {sorted(GALLERY)}") from None
    return factory(**params)


def describe() -> list[dict]:
    """Name and one-line description of every gallery symbol."""
    return [
        {"name": name, "description": (factory.__doc__ or factory(**{}).name).strip().splitlines()[0]}
        for name, factory in GALLERY.items()
    ]
