"""
harness/experiment.py

Monte Carlo convergence experiments.

For every n in the grid: draw ``replications`` samples of size n, evaluate
the cell's normalized statistic on each, draw ``reference_draws`` values
from the cell's limit law, and record the two-sample KS distance plus
nearest-rank quantiles of both sides.

Seed lanes (see ``harness.seeds``)::

    data       derive_seed(seed, 0, n_index, replication)
    reference  derive_seed(seed, 1, n_index)

so the output is a function of the config alone, whatever the worker count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import stats as _stats

from config import (
    DEFAULT_REFERENCE_DRAWS,
    DEFAULT_REPLICATIONS,
    HARNESS_MAX_WORKERS,
    KS_LEVEL,
    MIN_MEANINGFUL_REPLICATIONS,
    QUANTILE_LEVELS,
)
from estimators.sample_stats import Stat
from harness.pool import ReplicationPool
from harness.seeds import MASK64, derive_seed
from models.distributions import parse_model_spec
from theory.normalizers import NormalizerSet, Regime
from theory.regimes import build_cell, reference_sample

LANE_DATA = 0
LANE_REFERENCE = 1

LOW_REPLICATIONS = "low_replications"

QUANTILE_COLUMNS = ["q05", "q25", "q50", "q75", "q95"]


# ── Config ────────────────────────────────────────────────────────────────────

class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    model: str
    stat: Stat
    n_grid: list[int]
    replications: int = DEFAULT_REPLICATIONS
    reference_draws: int = DEFAULT_REFERENCE_DRAWS
    seed: int = 0
    out: Path | None = None
    format: Literal["csv", "json"] = "csv"
    workers: int = HARNESS_MAX_WORKERS

    @field_validator("model")
    @classmethod
    def _model_parses(cls, v: str) -> str:
        parse_model_spec(v)
        return v

    @field_validator("n_grid")
    @classmethod
    def _grid_increasing(cls, v: list[int]) -> list[int]:
        if any(n < 1 for n in v):
            raise ValueError(f"n_grid entries must be positive, got {v}")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"n_grid must be strictly increasing, got {v}")
        return v

    @field_validator("replications", "reference_draws", "workers")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def _u64(cls, v: int) -> int:
        if not 0 <= v <= MASK64:
            raise ValueError(f"seed must be in [0, 2**64), got {v}")
        return v


# ── Result ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ExperimentRow:
    n: int
    ks: float
    quantiles: tuple[float, ...]
    ref_quantiles: tuple[float, ...]
    a: float
    b: float
    c: float
    d: float
    regime: Regime

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ks": self.ks,
            **dict(zip(QUANTILE_COLUMNS, self.quantiles)),
            **{f"ref_{tag}": q for tag, q in zip(QUANTILE_COLUMNS, self.ref_quantiles)},
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "regime": self.regime.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentRow":
        return cls(
            n=int(d["n"]),
            ks=float(d["ks"]),
            quantiles=tuple(float(d[tag]) for tag in QUANTILE_COLUMNS),
            ref_quantiles=tuple(float(d[f"ref_{tag}"]) for tag in QUANTILE_COLUMNS),
            a=float(d["a"]),
            b=float(d["b"]),
            c=float(d["c"]),
            d=float(d["d"]),
            regime=Regime(d["regime"]),
        )


@dataclass(frozen=True)
class ExperimentResult:
    model: str
    stat: Stat
    regime: Regime
    law: str
    seed: int
    replications: int
    reference_draws: int
    rows: list[ExperimentRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "stat": self.stat.value,
            "regime": self.regime.value,
            "law": self.law,
            "seed": self.seed,
            "replications": self.replications,
            "reference_draws": self.reference_draws,
            "quantile_levels": list(QUANTILE_LEVELS),
            "rows": [r.to_dict() for r in self.rows],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        return cls(
            model=d["model"],
            stat=Stat(d["stat"]),
            regime=Regime(d["regime"]),
            law=d["law"],
            seed=int(d["seed"]),
            replications=int(d["replications"]),
            reference_draws=int(d["reference_draws"]),
            rows=[ExperimentRow.from_dict(r) for r in d.get("rows", [])],
            warnings=list(d.get("warnings", [])),
        )


# ── Distances and quantiles ───────────────────────────────────────────────────

def ks_distance(sample: np.ndarray, reference: np.ndarray) -> float:
    """Two-sample Kolmogorov–Smirnov statistic, in [0, 1]."""
    return float(_stats.ks_2samp(np.asarray(sample), np.asarray(reference)).statistic)


def ks_critical_value(n1: int, n2: int, level: float = KS_LEVEL) -> float:
    """Asymptotic two-sample KS critical value at significance ``level``."""
    if n1 < 1 or n2 < 1:
        raise ValueError(f"sample sizes must be >= 1, got ({n1!r}, {n2!r})")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level!r}")
    c = math.sqrt(-math.log(level / 2.0) / 2.0)
    return c * math.sqrt((n1 + n2) / (n1 * n2))


def nearest_rank_quantiles(values: np.ndarray,
                           levels: tuple[float, ...] = QUANTILE_LEVELS) -> tuple[float, ...]:
    """The ⌈p·k⌉-th order statistic for each level p."""
    q = np.quantile(np.asarray(values, dtype=float), levels, method="inverted_cdf")
    return tuple(float(v) for v in q)


# ── Runner ────────────────────────────────────────────────────────────────────

def run_experiment(
    config: ExperimentConfig,
    *,
    on_replication: Callable[[int], None] | None = None,
    on_row: Callable[[ExperimentRow], None] | None = None,
) -> ExperimentResult:
    """Run the experiment described by ``config``.

    ``on_replication`` fires once per finished replication (from worker
    threads); ``on_row`` once per finished n. Both are for progress output
    only and cannot change the result.
    """
    model = parse_model_spec(config.model)
    cell = build_cell(config.stat, model)
    normalizers = NormalizerSet.build(model, config.n_grid)

    flags: list[str] = []
    if config.replications < MIN_MEANINGFUL_REPLICATIONS:
        warnings.warn(
            f"{config.replications} replications is below "
            f"{MIN_MEANINGFUL_REPLICATIONS}; KS distances are not meaningful",
            stacklevel=2,
        )
        flags.append(LOW_REPLICATIONS)

    rows: list[ExperimentRow] = []
    with ReplicationPool(config.workers) as pool:
        for n_index, n in enumerate(config.n_grid):
            def one(rep: int, _i: int = n_index, _n: int = n) -> float:
                data = model.sample(_n, derive_seed(config.seed, LANE_DATA, _i, rep))
                return cell.normalized(data, normalizers)

            values = np.asarray(pool.map(one, range(config.replications), on_replication))
            reference = reference_sample(
                cell, config.reference_draws,
                derive_seed(config.seed, LANE_REFERENCE, n_index),
            )
            row_norm = normalizers.row(n)
            row = ExperimentRow(
                n=n,
                ks=ks_distance(values, reference),
                quantiles=nearest_rank_quantiles(values),
                ref_quantiles=nearest_rank_quantiles(reference),
                a=row_norm.a,
                b=row_norm.b,
                c=row_norm.c,
                d=row_norm.d,
                regime=cell.regime,
            )
            rows.append(row)
            if on_row is not None:
                on_row(row)

    return ExperimentResult(
        model=model.spec,
        stat=cell.stat,
        regime=cell.regime,
        law=cell.describe(),
        seed=config.seed,
        replications=config.replications,
        reference_draws=config.reference_draws,
        rows=rows,
        warnings=flags,
    )
