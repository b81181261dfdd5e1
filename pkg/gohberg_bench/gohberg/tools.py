"""Test vectors u_i(x) = xi_i(x) u(x x0^-1) and the two asymptotic checks built on them."""

import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from ..config import ASYMPTOTIC_TOL
from ..errors import OffGridError
from ..fourier import l2_norm, translate_x
from ..group import DualPoint, GroupPoint, GroupSpec
from ..quantize import LinOp, Op_operator
from ..symbols import Symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TestVectorFamily:
    """Modulated translates of a base vector; every member has the norm of ``base``."""

    __test__ = False  # not a pytest class

    spec: GroupSpec
    base: np.ndarray
    x0: GroupPoint
    xis: tuple[DualPoint, ...]
    vectors: np.ndarray

    def __len__(self) -> int:
        return len(self.xis)

    @property
    def base_norm(self) -> float:
        return l2_norm(self.spec, self.base)

    def norms(self) -> np.ndarray:
        return np.atleast_1d(l2_norm(self.spec, self.vectors))


def modulation(spec: GroupSpec, xi) -> np.ndarray:
    """Grid samples of the character xi, with the phase reduced exactly on the integer grid."""
    xi = xi.array if isinstance(xi, DualPoint) else spec.reduce_dual(xi)
    shape = np.asarray(spec.grid_shape)
    numerators = np.mod(xi * spec.layout.grid_multi, shape)
    return np.exp(2j * np.pi * np.sum(numerators / shape, axis=-1))


def make_test_vectors(u, x0: GroupPoint, xi_seq) -> TestVectorFamily:
    """u_i(x) = xi_i(x) u(x - x0) for an anchor x0 on the grid."""
    spec = x0.spec
    if x0.grid_index < 0:
        raise OffGridError(f"anchor {x0.coords} is not a grid point of {spec}")
    base = np.asarray(spec.check_samples(u), dtype=complex)
    shifted = translate_x(spec, base, x0)
    xis = tuple(xi if isinstance(xi, DualPoint) else DualPoint(spec, tuple(xi)) for xi in xi_seq)
    if xis:
        vectors = np.stack([modulation(spec, xi) * shifted for xi in xis])
    else:
        vectors = np.zeros((0, spec.grid_size), dtype=complex)
    return TestVectorFamily(spec=spec, base=base, x0=x0, xis=xis, vectors=vectors)


class DecaySequence(BaseModel):
    """i -> value along a test-vector family, with the eventual-decay verdict."""

    label: str
    xis: list[list[int]]
    values: list[float]
    tol: float
    verdict: bool

    @property
    def final(self) -> float | None:
        return self.values[-1] if self.values else None

    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.values, self.values[1:]))


def _decay(label: str, family: TestVectorFamily, values, tol: float) -> DecaySequence:
    values = [float(v) for v in values]
    verdict = bool(values) and values[-1] <= tol
    logger.debug(f"{label}: {values}")
    return DecaySequence(
        label=label,
        xis=[list(xi.coords) for xi in family.xis],
        values=values,
        tol=tol,
        verdict=verdict,
    )


def ideal_decay_check(L: LinOp, family: TestVectorFamily, tol: float = ASYMPTOTIC_TOL) -> DecaySequence:
    """i -> ||L u_i||; operators in the ideal send the family to zero."""
    values = np.atleast_1d(l2_norm(family.spec, L.apply(family.vectors))) if len(family) else []
    return _decay(f"||{L.label} u_i||", family, values, tol)


def frozen_symbol(f: Symbol, spec: GroupSpec, xi: DualPoint) -> np.ndarray:
    """x -> f(x, xi) on the grid."""
    return f.evaluate(spec.grid_points, xi.array[None, :]).reshape(spec.grid_size)


def symbol_freeze_check(f: Symbol, family: TestVectorFamily, tol: float = ASYMPTOTIC_TOL) -> DecaySequence:
    """i -> ||Op(f) u_i - f(., xi_i) u_i||."""
    spec = family.spec
    if not len(family):
        return _decay(f"freeze[{f.name}]", family, [], tol)
    applied = Op_operator(f, spec).apply(family.vectors)
    frozen = np.stack([frozen_symbol(f, spec, xi) for xi in family.xis]) * family.vectors
    values = np.atleast_1d(l2_norm(spec, applied - frozen))
    return _decay(f"freeze[{f.name}]", family, values, tol)
