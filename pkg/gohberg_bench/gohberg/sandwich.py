"""Lower and upper bounds for dist(Op(f), ideal of Omega) against D^Omega(f).

The lower side replays the argument behind the Gohberg bound: pick x0 and dual
points xi_k deep inside the levels of Omega where |f| is nearly maximal,
localise a bump u near x0, and measure ||(Op(f) - L) u_k|| / ||u|| on the
modulated translates u_k. The upper side takes operator norms of Op(f) - L
over the constructed approximants, so it may overestimate the true distance.
"""

import json
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Callable, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..config import DEFAULT_SEED, DENSE_LIMIT, NORM_MAX_ITER, NORM_TOL
from ..fourier import grid_spectrum, l2_norm, translate_x
from ..group import GroupPoint, GroupSpec
from ..quantize import LinOp, NormEstimate, Op_operator, operator_norm, right_symbol
from ..symbols import CoronaFilter, D_omega, InvarianceReport, OscillationReport, Symbol, vo_diagnostic
from .approximants import Approximant, cutoff_approximant, svd_approximants
from .config import (
    DEFAULT_BUMP_ENERGY,
    DEFAULT_CONTINUITY_FRACTION,
    DEFAULT_SVD_RANKS,
    DEFAULT_TOL_LOWER,
    DEFAULT_TOL_NUM,
    DEFAULT_TOL_VO,
)
from .tools import frozen_symbol, make_test_vectors

logger = logging.getLogger(__name__)

UPPER_NOTE = "upper bounds minimise over constructed approximants only and may overestimate the distance"


class SandwichConfig(BaseModel):
    tol_vo: float = Field(DEFAULT_TOL_VO, gt=0)
    tol_lower: float = Field(DEFAULT_TOL_LOWER, gt=0)
    tol_num: float = Field(DEFAULT_TOL_NUM, gt=0)
    svd_ranks: tuple[int, ...] = DEFAULT_SVD_RANKS
    continuity_fraction: float = Field(DEFAULT_CONTINUITY_FRACTION, gt=0)
    bump_energy: float = Field(DEFAULT_BUMP_ENERGY, gt=0, le=1)
    k_max: int | None = None
    norm_method: Literal["auto", "svd", "arpack", "power"] = "auto"
    norm_tol: float = NORM_TOL
    norm_max_iter: int = Field(NORM_MAX_ITER, gt=0)
    seed: int = DEFAULT_SEED


class Localisation(BaseModel):
    """The bump u around x0 used to build the test vectors."""

    x0: list[float]
    radius: float | None  # None: u is constant on the whole group
    support_size: int
    spectral_margin: int


class LevelBound(BaseModel):
    level: int
    witness: list[int] | None
    lower: float | None
    # |f(x0, xi_k)| minus the error budget, the bound the argument certifies
    proof_bound: float | None = None
    eps_freeze: float | None = None
    eps_continuity: float | None = None
    eps_ideal: float | None = None


class LowerBoundResult(BaseModel):
    symbol: str
    filter: str
    localisation: Localisation
    d_sequence: list[float | None]
    levels: list[LevelBound]

    @property
    def values(self) -> list[float | None]:
        return [level.lower for level in self.levels]


class LevelReport(BaseModel):
    level: int
    d_est: float | None
    lower: float | None
    upper: float | None
    upper_by: dict[str, float] = Field(default_factory=dict)
    # False when some norm behind upper_by stopped before converging
    upper_converged: bool = True
    witness: list[int] | None = None
    proof_bound: float | None = None
    eps_freeze: float | None = None
    eps_continuity: float | None = None
    eps_ideal: float | None = None


class SandwichReport(BaseModel):
    symbol: str
    filter: str
    group: dict
    verdict: Literal["PASS", "FAIL", "SKIP"]
    reason: str
    d_estimate: float | None
    final_lower: float | None
    final_upper: float | None
    lower_margin: float | None = None  # final lower - (D - tol_lower)
    max_inversion: float | None = None  # max over levels of lower - upper
    uppers_converged: bool = True
    tolerances: dict[str, float]
    nested: bool | None = None
    invariance: InvarianceReport | None = None
    localisation: Localisation | None = None
    vo: OscillationReport | None = None
    levels: list[LevelReport] = Field(default_factory=list)
    note: str = UPPER_NOTE

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "level": [r.level for r in self.levels],
                "D_est": [r.d_est for r in self.levels],
                "lower": [r.lower for r in self.levels],
                "upper": [r.upper for r in self.levels],
            },
            columns=["level", "D_est", "lower", "upper"],
        )

    def to_csv_text(self) -> str:
        return self.to_frame().to_csv(index=False, float_format="%.12g", lineterminator="\n")

    def to_json_text(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    def save(self, json_path, csv_path=None):
        from ..utils import atomic_write

        atomic_write(Path(json_path), self.to_json_text())
        if csv_path is not None:
            atomic_write(Path(csv_path), self.to_csv_text())



# --- localisation ---


def _distances(spec: GroupSpec, x0: GroupPoint) -> np.ndarray:
    """Max over factors of the distance to x0: circular on tori, 0/1 on cyclic factors."""
    delta = np.abs(spec.grid_points - x0.array)
    distance = np.zeros(spec.grid_size)
    for axis in range(spec.ndim):
        if axis in spec.torus_axes:
            d = np.minimum(delta[:, axis], 1.0 - delta[:, axis])
        else:
            d = (delta[:, axis] > 0.5).astype(float)
        distance = np.maximum(distance, d)
    return distance


def _modulus_is_constant_in_x(f: Symbol, spec: GroupSpec) -> bool:
    if f.x_independent:
        return True
    if f.factors is not None:
        phi = f.factors[0].values(spec)
        return bool(np.ptp(np.abs(phi)) <= 1e-12)
    modulus = np.abs(f.grid(spec))
    return bool(np.max(np.ptp(modulus, axis=0)) <= 1e-12)


def _spectral_margin(spec: GroupSpec, u: np.ndarray, energy: float) -> int:
    """Smallest R such that frequencies with |k|_inf <= R hold ``energy`` of the energy of u."""
    power = np.abs(grid_spectrum(spec, u)) ** 2
    total = power.sum()
    if total == 0:
        return 0
    torus = list(spec.torus_axes)
    if not torus:
        return 0
    radius = np.max(np.abs(spec.grid_frequencies()[:, torus]), axis=-1)
    for R in range(int(radius.max()) + 1):
        if power[radius <= R].sum() >= energy * total * (1 - 1e-12):
            return R
    return int(radius.max())


def _bump(
    f: Symbol,
    spec: GroupSpec,
    x0: GroupPoint,
    witnesses,
    threshold: float,
) -> tuple[np.ndarray, float]:
    """Normalised cos^2 bump on the largest ball around x0 where |f(., xi_k)| stays within ``threshold``.

    The cos^2 profile vanishes at the edge of the ball, so its spectrum decays
    like |k|^-3 and the spectral margin stays small.
    """
    distance = _distances(spec, x0)
    radius = np.inf
    origin = x0.grid_index
    for xi in witnesses:
        column = np.abs(frozen_symbol(f, spec, xi))
        bad = np.abs(column - column[origin]) > threshold
        if bad.any():
            radius = min(radius, float(distance[bad].min()))
    inside = distance < radius
    if np.isfinite(radius):
        u = np.where(inside, np.cos(np.pi * distance / (2 * radius)) ** 2, 0.0).astype(complex)
    else:
        u = inside.astype(complex)
    u /= l2_norm(spec, u)
    return u, radius


_LOCALISE_ROUNDS = 4


def _present(sequence) -> list:
    return [w for w in sequence.witnesses if w is not None]


def localise(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    config: SandwichConfig,
) -> tuple[np.ndarray, Localisation]:
    """Choose the base bump u (centred at the identity), the anchor x0 and the spectral margin.

    The continuity radius keeps ||f(x, xi_k)| - |f(x0, xi_k)|| within
    ``continuity_fraction`` of the D^Omega estimate on the bump. Witnesses at
    level k are then searched among points whose whole margin box lies in V_k
    and the window, and the two choices are iterated until the margin is
    stable. Symbols whose modulus does not depend on x use the constant bump.
    """
    if _modulus_is_constant_in_x(f, spec):
        localisation = Localisation(
            x0=list(GroupPoint.identity(spec).coords), radius=None, support_size=spec.grid_size, spectral_margin=0
        )
        return np.ones(spec.grid_size, dtype=complex), localisation

    sequence = D_omega(f, omega, spec, config.k_max)
    threshold = config.continuity_fraction * (sequence.estimate or 0.0)
    margin = 0
    x0 = sequence.x0 or GroupPoint.identity(spec)
    bump, radius = _bump(f, spec, x0, _present(sequence), threshold)
    for _ in range(_LOCALISE_ROUNDS):
        needed = _spectral_margin(spec, bump, config.bump_energy)
        if needed <= margin:
            break
        candidate = D_omega(f, omega, spec, config.k_max, margin=needed)
        if candidate.x0 is None:
            logger.warning(f"no level of {omega.name} holds a margin-{needed} box for {f.name} on {spec}")
            break
        margin, sequence = needed, candidate
        x0 = sequence.x0
        bump, radius = _bump(f, spec, x0, _present(sequence), threshold)

    base = translate_x(spec, bump, x0.inverse())
    localisation = Localisation(
        x0=list(x0.coords),
        radius=None if not np.isfinite(radius) else float(radius),
        support_size=int(np.count_nonzero(bump)),
        spectral_margin=margin,
    )
    logger.debug(f"localised {f.name}: {localisation}")
    return base, localisation


# --- lower bound ---

Candidates = Sequence[LinOp | Approximant] | Mapping[int, Sequence[LinOp | Approximant]] | None

# below this share of ||v|| the annihilated part is too small to test against
_KERNEL_FLOOR = 1e-6


def _candidates_at(candidates: Candidates, level: int) -> list[tuple[LinOp, Callable | None]]:
    if candidates is None:
        return []
    pool = candidates.get(level, []) if isinstance(candidates, Mapping) else candidates
    return [(c.op, c.kernel_part) if isinstance(c, Approximant) else (c, None) for c in pool]


def _residual_ratio(
    op: LinOp,
    L: LinOp,
    kernel_part: Callable | None,
    v: np.ndarray,
    residual: np.ndarray,
    spec: GroupSpec,
) -> float:
    """||(Op(f) - L) w|| / ||w|| for the part w of v that L annihilates, or for v itself."""
    norm_v = l2_norm(spec, v)
    if kernel_part is not None:
        w = kernel_part(v)
        norm_w = l2_norm(spec, w)
        if norm_w > _KERNEL_FLOOR * norm_v:
            return l2_norm(spec, op.apply(w) - L.apply(w)) / norm_w
    return l2_norm(spec, residual) / norm_v


def lower_bound_estimate(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    candidates: Candidates = None,
    config: SandwichConfig | None = None,
) -> LowerBoundResult:
    """Per level k: min over L in {0} and the candidates of ||(Op(f) - L) w|| / ||w||.

    ``candidates`` is a list used at every level or a mapping level -> list.
    For approximants that know their kernel, w is the part of u_k they
    annihilate; otherwise w = u_k. Each ratio is at most ||Op(f) - L||, so
    the value bounds the distance of Op(f) to the candidates from below.
    """
    config = config or SandwichConfig()
    base, localisation = localise(f, omega, spec, config)
    sequence = D_omega(f, omega, spec, config.k_max, margin=localisation.spectral_margin)
    d_sequence = D_omega(f, omega, spec, config.k_max).to_list()
    x0 = GroupPoint(spec, tuple(localisation.x0))
    op = Op_operator(f, spec)
    norm_u = l2_norm(spec, base)

    levels = []
    for k, xi in zip(sequence.levels, sequence.witnesses):
        if xi is None:
            levels.append(LevelBound(level=k, witness=None, lower=None))
            continue
        v = make_test_vectors(base, x0, [xi]).vectors[0]
        applied = op.apply(v)
        lower = l2_norm(spec, applied) / norm_u
        eps_ideal = 0.0
        for L, kernel_part in _candidates_at(candidates, k):
            image = L.apply(v)
            eps_ideal = max(eps_ideal, l2_norm(spec, image) / norm_u)
            lower = min(lower, _residual_ratio(op, L, kernel_part, v, applied - image, spec))
        frozen = frozen_symbol(f, spec, xi)
        eps_freeze = l2_norm(spec, applied - frozen * v) / norm_u
        anchor = abs(frozen[x0.grid_index])
        on_bump = np.abs(v) > 0
        eps_continuity = float(np.max(np.abs(np.abs(frozen[on_bump]) - anchor)))
        levels.append(
            LevelBound(
                level=k,
                witness=list(xi.coords),
                lower=float(lower),
                proof_bound=float(anchor - eps_continuity - eps_freeze - eps_ideal),
                eps_freeze=float(eps_freeze),
                eps_continuity=eps_continuity,
                eps_ideal=float(eps_ideal),
            )
        )
    return LowerBoundResult(
        symbol=f.name,
        filter=omega.name,
        localisation=localisation,
        d_sequence=d_sequence,
        levels=levels,
    )


# --- sandwich ---


def _final(values: list[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return present[-1] if present else None


def _upper_norm(A: LinOp, config: SandwichConfig) -> NormEstimate:
    estimate = operator_norm(
        A, tol=config.norm_tol, method=config.norm_method, max_iter=config.norm_max_iter, seed=config.seed
    )
    if not estimate.converged and A.dim <= DENSE_LIMIT:
        logger.warning(f"norm of {A.label} did not converge ({estimate.method}); using the dense SVD")
        estimate = operator_norm(A, method="svd")
    return estimate


def _skipped(d_sequence, reason: str, **common) -> SandwichReport:
    levels = [
        LevelReport(level=k, d_est=d, lower=None, upper=None)
        for k, d in zip(d_sequence.levels, d_sequence.values)
    ]
    logger.info(f"sandwich {common['symbol']} / {common['filter']}: SKIP ({reason})")
    return SandwichReport(
        verdict="SKIP",
        reason=reason,
        d_estimate=d_sequence.estimate,
        final_lower=None,
        final_upper=None,
        levels=levels,
        **common,
    )


def sandwich(
    f: Symbol,
    omega: CoronaFilter,
    spec: GroupSpec,
    config: SandwichConfig | None = None,
) -> SandwichReport:
    """Bracket dist(Op(f), ideal) between replayed lower bounds and approximant norms.

    PASS iff the final lower bound reaches the D^Omega estimate within
    ``tol_lower``, no level has lower > upper + ``tol_num`` and every upper
    norm converged. SKIP when the bound does not apply on this window: the
    filter has no nonempty level, its nesting or translation invariance
    cannot be verified, or f fails the vanishing-oscillation diagnostic.
    """
    config = config or SandwichConfig()
    tolerances = {"vo": config.tol_vo, "lower": config.tol_lower, "numeric": config.tol_num}
    d_sequence = D_omega(f, omega, spec, config.k_max)
    common = dict(symbol=f.name, filter=omega.name, group=spec.to_json(), tolerances=tolerances)

    if d_sequence.deepest is None:
        return _skipped(d_sequence, f"filter {omega.name} has no nonempty level inside the window", **common)

    common["nested"] = omega.check_nesting(spec, config.k_max)
    common["invariance"] = omega.check_invariance(spec, config.k_max)
    if not common["nested"]:
        return _skipped(d_sequence, f"levels of {omega.name} are not nested on this window", **common)
    if not common["invariance"].verified:
        return _skipped(d_sequence, f"translation invariance of {omega.name} could not be verified", **common)

    common["vo"] = vo_diagnostic(f, omega, spec, tol=config.tol_vo, k_max=config.k_max)
    if not common["vo"].verdict:
        reason = "vanishing-oscillation hypothesis fails at this window; the lower bound does not apply"
        return _skipped(d_sequence, reason, **common)

    svd = svd_approximants(f, spec, config.svd_ranks) if omega.is_full else []
    svd_norms = {a.op.label: _upper_norm(a.remainder, config) for a in svd}
    cutoffs = {k: cutoff_approximant(f, omega, spec, k) for k in d_sequence.levels}
    candidates = {k: [cutoffs[k], *svd] for k in d_sequence.levels}
    lower = lower_bound_estimate(f, omega, spec, candidates, config)

    levels = []
    for k, d, bound in zip(d_sequence.levels, d_sequence.values, lower.levels):
        norms = {"cutoff": _upper_norm(cutoffs[k].remainder, config), **svd_norms}
        upper_by = {label: estimate.value for label, estimate in norms.items()}
        levels.append(
            LevelReport(
                level=k,
                d_est=d,
                lower=bound.lower,
                upper=min(upper_by.values()),
                upper_by=upper_by,
                upper_converged=all(estimate.converged for estimate in norms.values()),
                witness=bound.witness,
                proof_bound=bound.proof_bound,
                eps_freeze=bound.eps_freeze,
                eps_continuity=bound.eps_continuity,
                eps_ideal=bound.eps_ideal,
            )
        )

    d_estimate = d_sequence.estimate
    final_lower = _final([r.lower for r in levels])
    final_upper = _final([r.upper for r in levels])
    gaps = [r.lower - r.upper for r in levels if r.lower is not None and r.upper is not None]
    max_inversion = max(gaps) if gaps else None
    unconverged = [r.level for r in levels if not r.upper_converged]

    if final_lower is None:
        verdict, reason, lower_margin = "FAIL", "no level holds a witness with its whole margin box", None
    else:
        lower_margin = final_lower - (d_estimate - config.tol_lower)
        ordered = max_inversion is None or max_inversion <= config.tol_num
        if unconverged:
            verdict, reason = "FAIL", f"upper norms did not converge at levels {unconverged}"
        elif lower_margin >= 0 and ordered:
            verdict, reason = "PASS", "final lower bound reaches D^Omega and the bounds never invert"
        elif not ordered:
            verdict, reason = "FAIL", f"lower exceeds upper by {max_inversion:.3e}"
        else:
            verdict, reason = "FAIL", f"final lower bound {final_lower:.6f} below D^Omega {d_estimate:.6f}"

    report = SandwichReport(
        verdict=verdict,
        reason=reason,
        d_estimate=d_estimate,
        final_lower=final_lower,
        final_upper=final_upper,
        lower_margin=lower_margin,
        max_inversion=max_inversion,
        uppers_converged=not unconverged,
        localisation=lower.localisation,
        levels=levels,
        **common,
    )
    logger.info(
        f"sandwich {f.name} / {omega.name} on {spec}: {verdict} "
        f"(D={d_estimate}, lower={final_lower}, upper={final_upper})"
    )
    return report


def right_sandwich(
    g,
    omega: CoronaFilter,
    spec: GroupSpec,
    config: SandwichConfig | None = None,
    name: str = "g",
    x_independent: bool = False,
) -> SandwichReport:
    """Sandwich for the right quantization op(g o mu^-1); D^Omega is the limsup of |g(xi, x)|."""
    return sandwich(right_symbol(g, spec, name, x_independent), omega, spec, config)
