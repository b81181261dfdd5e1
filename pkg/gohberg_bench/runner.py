"""Experiment configs and the executor behind ``gohberg_bench run``."""

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .config import DEFAULT_SEED, MAX_WORKERS
from .errors import ConfigError
from .gohberg import SandwichConfig, SandwichReport, sandwich
from .gohberg.config import DEFAULT_SVD_RANKS, DEFAULT_TOL_LOWER, DEFAULT_TOL_NUM, DEFAULT_TOL_VO
from .group import DualPoint, GroupSpec
from .symbols import CoronaFilter, SpaceFunction, Symbol, cone_corona, full_corona
from .symbols.gallery import DUAL_FUNCTIONS, GALLERY, SPACE_FUNCTIONS, get
from .utils import atomic_write

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["id", "symbol", "filter", "window", "verdict", "d_estimate", "final_lower", "final_upper"]


class FunctionSpec(BaseModel):
    """A factor of a separable symbol: a registry name with parameters, or a character of X."""

    name: str | None = None
    params: dict = Field(default_factory=dict)
    character: list[int] | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.name is None) == (self.character is None):
            raise ValueError("give exactly one of 'name' or 'character'")
        return self

    def label(self) -> str:
        if self.character is not None:
            return "chi" + "_".join(str(c) for c in self.character)
        return self.name


class SeparableSpec(BaseModel):
    phi: FunctionSpec = Field(default_factory=lambda: FunctionSpec(name="constant"))
    psi: FunctionSpec

    @model_validator(mode="after")
    def _known(self):
        if self.phi.name is not None and self.phi.name not in SPACE_FUNCTIONS:
            raise ValueError(f"unknown space function {self.phi.name!r}, available: {sorted(SPACE_FUNCTIONS)}")
        if self.psi.character is not None:
            raise ValueError("psi must name a dual function")
        if self.psi.name not in DUAL_FUNCTIONS:
            raise ValueError(f"unknown dual function {self.psi.name!r}, available: {sorted(DUAL_FUNCTIONS)}")
        return self


class SymbolSpec(BaseModel):
    name: str | None = None
    params: dict = Field(default_factory=dict)
    separable: SeparableSpec | None = None
    label: str | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.name is None) == (self.separable is None):
            raise ValueError("give exactly one of 'name' or 'separable'")
        if self.name is not None and self.name not in GALLERY:
            raise ValueError(f"unknown gallery symbol {self.name!r}, available: {sorted(GALLERY)}")
        return self

    @property
    def id(self) -> str:
        if self.label:
            return self.label
        if self.name is not None:
            return self.name
        return f"{self.separable.phi.label()}*{self.separable.psi.label()}"

    def build(self, spec: GroupSpec) -> Symbol:
        if self.name is not None:
            return get(self.name, **self.params)
        phi_spec, psi_spec = self.separable.phi, self.separable.psi
        if phi_spec.character is not None:
            phi = SpaceFunction.character(DualPoint(spec, tuple(phi_spec.character)))
        else:
            phi = SPACE_FUNCTIONS[phi_spec.name](**phi_spec.params)
        psi = DUAL_FUNCTIONS[psi_spec.name](**psi_spec.params)
        return Symbol.separable(phi, psi, name=self.id)


class FilterSpec(BaseModel):
    type: Literal["full", "cone"]
    directions: list[list[float]] | None = None
    angle: float = Field(np.pi / 8, gt=0)
    name: str | None = None
    generators: list[list[int]] | None = None

    @model_validator(mode="after")
    def _cone_needs_directions(self):
        if self.type == "cone" and not self.directions:
            raise ValueError("a cone filter needs 'directions'")
        return self

    @property
    def id(self) -> str:
        return self.name or self.type

    def build(self) -> CoronaFilter:
        if self.type == "full":
            return full_corona(self.generators)
        return cone_corona(self.directions, self.angle, name=self.name, generators=self.generators)


class Tolerances(BaseModel):
    vo: float = Field(DEFAULT_TOL_VO, gt=0)
    lower: float = Field(DEFAULT_TOL_LOWER, gt=0)
    numeric: float = Field(DEFAULT_TOL_NUM, gt=0)


class ExperimentConfig(BaseModel):
    group: GroupSpec
    symbols: list[SymbolSpec] = Field(min_length=1)
    filters: list[FilterSpec] = Field(default_factory=lambda: [FilterSpec(type="full")], min_length=1)
    schedule: list[int] = Field(min_length=1)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    svd_ranks: tuple[int, ...] = DEFAULT_SVD_RANKS
    output: str = "results"
    seed: int = DEFAULT_SEED
    k_max: int | None = None

    @field_validator("schedule")
    @classmethod
    def _increasing(cls, value):
        if any(m <= 0 for m in value):
            raise ValueError("window sizes must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"schedule must be strictly increasing, got {value}")
        return value

    @field_validator("svd_ranks")
    @classmethod
    def _positive_ranks(cls, value):
        if any(r <= 0 for r in value):
            raise ValueError("SVD ranks must be positive")
        return value

    def sandwich_config(self) -> SandwichConfig:
        return SandwichConfig(
            tol_vo=self.tolerances.vo,
            tol_lower=self.tolerances.lower,
            tol_num=self.tolerances.numeric,
            svd_ranks=self.svd_ranks,
            k_max=self.k_max,
            seed=self.seed,
        )


def _locate(text: str, loc) -> int:
    """Line of the innermost key of a pydantic error location (list indices are skipped)."""
    start = 0
    for part in loc:
        if isinstance(part, str):
            found = text.find(f'"{part}"', start)
            if found >= 0:
                start = found
    return text.count("\n", 0, start) + 1


def parse_config(text: str, path: str = "<config>") -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", path, e.lineno) from None
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        where = ".".join(str(p) for p in error["loc"]) or "config"
        raise ConfigError(f"{where}: {error['msg']}", path, _locate(text, error["loc"])) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", str(path)) from None
    return parse_config(text, str(path))


class Experiment(BaseModel):
    id: str
    symbol: SymbolSpec
    filter: FilterSpec
    window: int


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "-", text).strip("-")


class ExperimentExecutor:
    """Runs every (symbol, filter, window) of a config and writes its artifacts."""

    def __init__(self, config: ExperimentConfig, out_dir=None, max_workers: int = MAX_WORKERS):
        self.config = config
        self.out_dir = Path(out_dir if out_dir is not None else config.output)
        self.max_workers = max(1, max_workers)

    def experiments(self) -> list[Experiment]:
        """Config order: symbols, then filters, then windows."""
        return [
            Experiment(
                id=_slug(f"{s.id}__{f.id}__M{m}"),
                symbol=s,
                filter=f,
                window=m,
            )
            for s in self.config.symbols
            for f in self.config.filters
            for m in self.config.schedule
        ]

    def _run_one(self, experiment: Experiment) -> SandwichReport:
        spec = self.config.group.with_window(experiment.window)
        logger.info(f"running {experiment.id} on {spec}")
        f = experiment.symbol.build(spec)
        omega = experiment.filter.build()
        report = sandwich(f, omega, spec, self.config.sandwich_config())
        report.save(self.out_dir / f"{experiment.id}.json", self.out_dir / f"{experiment.id}.csv")
        logger.info(f"wrote {experiment.id}.json and {experiment.id}.csv ({report.verdict})")
        return report

    def _safe_run(self, experiment: Experiment) -> dict:
        try:
            report = self._run_one(experiment)
        except Exception as e:
            logger.error(f"experiment {experiment.id} failed: {e}")
            return {"id": experiment.id, "verdict": "FAIL", "reason": str(e), "report": None}
        return {"id": experiment.id, "verdict": report.verdict, "reason": report.reason, "report": report}

    def run(self) -> list[dict]:
        """Run all experiments, write summary.csv and return one row per experiment in config order."""
        experiments = self.experiments()
        workers = min(self.max_workers, len(experiments))
        logger.info(f"{len(experiments)} experiments on {workers} workers, output in {self.out_dir}")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(self._safe_run, experiments))

        rows = []
        for experiment, outcome in zip(experiments, outcomes):
            report = outcome["report"]
            rows.append(
                {
                    "id": experiment.id,
                    "symbol": experiment.symbol.id,
                    "filter": experiment.filter.id,
                    "window": experiment.window,
                    "verdict": outcome["verdict"],
                    "d_estimate": report.d_estimate if report else None,
                    "final_lower": report.final_lower if report else None,
                    "final_upper": report.final_upper if report else None,
                }
            )
        frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
        atomic_write(
            self.out_dir / "summary.csv",
            frame.to_csv(index=False, float_format="%.12g", lineterminator="\n"),
        )
        return rows


def exit_code(rows: list[dict]) -> int:
    """0 when every verdict is PASS or SKIP, 1 otherwise."""
    return 1 if any(row["verdict"] == "FAIL" for row in rows) else 0


def run_config(path, out_dir=None, seed: int | None = None) -> tuple[int, list[dict]]:
    """Load, run and score a config file. Raises ConfigError for malformed configs."""
    config = load_config(path)
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    rows = ExperimentExecutor(config, out_dir).run()
    return exit_code(rows), rows
