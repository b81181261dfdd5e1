"""Oscillation, limsup along corona filters, and the vanishing-oscillation diagnostic."""

import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from ..config import ASYMPTOTIC_TOL
from ..group import DualPoint, GroupPoint, GroupSpec
from .filters import CoronaFilter, full_corona
from .symbol import DualFunction, Symbol

logger = logging.getLogger(__name__)

# rows of x evaluated at once when a symbol is not cached
_ROW_CHUNK = 256


def osc(psi: DualFunction, zeta: DualPoint) -> DualFunction:
    """osc^zeta_psi(xi) = psi(xi zeta) - psi(xi)."""
    return DualFunction(
        lambda xi: psi.rule(zeta.spec.add_dual(xi, zeta.array)) - psi.rule(np.asarray(xi)),
        name=f"osc[{zeta.coords}]({psi.name})",
    )


def OSC(f: Symbol, zeta: DualPoint) -> Symbol:
    """OSC^zeta_f(x, xi) = f(x, xi zeta) - f(x, xi)."""
    factors = None
    if f.factors is not None:
        phi, psi = f.factors
        factors = (phi, osc(psi, zeta))
    spec, shift = zeta.spec, zeta.array
    return Symbol(
        lambda x, xi: f.rule(x, spec.add_dual(xi, shift)) - f.rule(x, np.asarray(xi)),
        name=f"OSC[{zeta.coords}]({f.name})",
        x_independent=f.x_independent,
        factors=factors,
    )


def osc_max(psi: DualFunction, zetas: list[DualPoint]) -> DualFunction:
    """xi -> max over the finite set of |osc^zeta_psi(xi)|."""
    differences = [osc(psi, zeta) for zeta in zetas]
    return DualFunction(
        lambda xi: np.max([np.abs(d.rule(xi)) for d in differences], axis=0).astype(complex),
        name=f"oscmax({psi.name})",
    )


@dataclass(frozen=True)
class LevelSequence:
    """Level sups k = 1..k_max with their argmax dual points; None marks an empty level."""

    values: tuple[float | None, ...]
    witnesses: tuple[DualPoint | None, ...]
    x0: GroupPoint | None = None

    @property
    def levels(self) -> list[int]:
        return list(range(1, len(self.values) + 1))

    @property
    def deepest(self) -> int | None:
        """Deepest level with a nonempty window intersection."""
        present = [k for k, v in zip(self.levels, self.values) if v is not None]
        return present[-1] if present else None

    @property
    def estimate(self) -> float | None:
        """Window estimate of the limsup: the value at the deepest level."""
        deepest = self.deepest
        return None if deepest is None else self.values[deepest - 1]

    def to_list(self) -> list[float | None]:
        return list(self.values)


def column_sup(f: Symbol, spec: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    """sup over the x-grid of |f(x, xi)| for every window point, with the grid index of the argmax."""
    if f.x_independent or f.is_sampled(spec):
        modulus = np.abs(f.grid(spec))
        return modulus.max(axis=0), modulus.argmax(axis=0)
    best = np.full(spec.window_size, -np.inf)
    where = np.zeros(spec.window_size, dtype=np.int64)
    xi = spec.window_points[None, :, :]
    for start in range(0, spec.grid_size, _ROW_CHUNK):
        x = spec.grid_points[start:start + _ROW_CHUNK, None, :]
        modulus = np.abs(f.evaluate(x, xi))
        chunk_best = modulus.max(axis=0)
        better = chunk_best > best
        best = np.where(better, chunk_best, best)
        where = np.where(better, start + modulus.argmax(axis=0), where)
    return best, where


def _level_sups(
    values: np.ndarray,
    omega: CoronaFilter,
    spec: GroupSpec,
    k_max: int | None,
    region: np.ndarray | None,
    margin: int = 0,
) -> tuple[list[float | None], list[int | None]]:
    sups, argmaxes = [], []
    for mask in omega.inner_level_masks(spec, margin, k_max):
        if region is not None:
            mask = mask & region
        if not mask.any():
            sups.append(None)
            argmaxes.append(None)
            continue
        candidates = np.flatnonzero(mask)
        # first maximiser in enumeration order
        best = candidates[np.argmax(values[candidates])]
        sups.append(float(values[best]))
        argmaxes.append(int(best))
    return sups, argmaxes


def d_omega(
    psi: DualFunction,
    omega: CoronaFilter,
    spec: GroupSpec,
    k_max: int | None = None,
    region: np.ndarray | None = None,
) -> LevelSequence:
    """k -> sup over V_k and the window of |psi|."""
    sups, argmaxes = _level_sups(np.abs(psi.values(spec)), omega, spec, k_max, region)
    witnesses = tuple(None if i is None else DualPoint.from_window(spec, i) for i in argmaxes)
    return LevelSequence(values=tuple(sups), witnesses=witnesses)


def D_omega(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    k_max: int | None = None,
    region: np.ndarray | None = None,
    margin: int = 0,
) -> LevelSequence:
    """k -> sup over V_k, the window and the x-grid of |f|, with witnesses.

    ``x0`` is the grid argmax at the deepest level and ``witnesses`` the
    per-level dual argmax points. ``region`` restricts the dual search; with
    ``margin`` > 0 a point only counts at level k when its whole margin box
    lies in V_k and the window.
    """
    column, rows = column_sup(f, spec)
    sups, argmaxes = _level_sups(column, omega, spec, k_max, region, margin)
    witnesses = tuple(None if i is None else DualPoint.from_window(spec, i) for i in argmaxes)
    x0 = None
    present = [i for i in argmaxes if i is not None]
    if present:
        x0 = GroupPoint.from_grid(spec, int(rows[present[-1]]))
    logger.debug(f"D_omega({f.name}, {omega.name}) on {spec}: {sups}")
    return LevelSequence(values=tuple(sups), witnesses=witnesses, x0=x0)


class OscillationReport(BaseModel):
    """Per-generator decay sequences s_k(zeta) of sup |OSC^zeta_f| along the filter levels."""

    symbol: str
    filter: str
    tol: float
    generators: list[list[int]]
    levels: list[int]
    sequences: list[list[float | None]]
    osc_max: list[float | None]
    finals: list[float | None]
    verdict: bool

    def summary(self) -> str:
        state = "VO-consistent" if self.verdict else "NOT VO-consistent"
        worst = max((v for v in self.finals if v is not None), default=None)
        return f"{self.symbol} on {self.filter}: {state} (worst final oscillation {worst}, tol {self.tol})"


def vo_diagnostic(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    generators: list[DualPoint] | None = None,
    tol: float = ASYMPTOTIC_TOL,
    k_max: int | None = None,
) -> OscillationReport:
    """Check that sup_x |OSC^zeta_f| falls below ``tol`` at the deepest level for every generator."""
    generators = generators if generators is not None else omega.generator_points(spec)
    k_max = k_max or omega.deepest_level(spec)
    sequences = [D_omega(OSC(f, zeta), omega, spec, k_max).to_list() for zeta in generators]
    combined = []
    for values in zip(*sequences):
        present = [v for v in values if v is not None]
        combined.append(max(present) if present else None)
    finals = [LevelSequence(tuple(s), (None,) * len(s)).estimate for s in sequences]
    verdict = all(v is not None and v <= tol for v in finals)
    report = OscillationReport(
        symbol=f.name,
        filter=omega.name,
        tol=tol,
        generators=[list(z.coords) for z in generators],
        levels=list(range(1, k_max + 1)),
        sequences=sequences,
        osc_max=combined,
        finals=finals,
        verdict=verdict,
    )
    logger.info(report.summary())
    return report


def in_ideal(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    tol: float = ASYMPTOTIC_TOL,
    k_max: int | None = None,
) -> bool:
    """Membership test for the symbol ideal of Omega: the D^Omega estimate is at most ``tol``."""
    estimate = D_omega(f, omega, spec, k_max).estimate
    return estimate is not None and estimate <= tol


def is_compact_symbol(f: Symbol, spec: GroupSpec, tol: float = ASYMPTOTIC_TOL) -> bool:
    """sup_x |f(x, xi)| -> 0 as xi -> infinity, the symbol-side compactness criterion."""
    return in_ideal(f, full_corona(), spec, tol)
