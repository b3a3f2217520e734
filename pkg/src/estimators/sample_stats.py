"""
estimators/sample_stats.py

Ratio statistics of a positive sample and their regime-specific
normalizations.

    T   = ΣXᵢ² / (ΣXᵢ)²          C  = ΣXᵢ² / ΣXᵢ
    SV  = √(nT − 1)              SD = C − X̄ = (nT − 1)·X̄
    t²  = n / (nT − 1)           SUM = ΣXᵢ

nT − 1 is evaluated as n·Σ(Xᵢ − X̄)² / (ΣXᵢ)², all sums through
``math.fsum``. A sample of equal values has nT − 1 = 0 exactly, SV = SD = 0
and t² = nan.

``normalized_statistic`` evaluates the left-hand side of the limit theorem
for a (statistic, regime) cell; the formulas live in ``_NORMALIZED``, one
entry per cell.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from errors import TailStatsError
from models.distributions import MomentTable
from theory.normalizers import NormalizerRow, NormalizerSet, Regime


class Stat(str, Enum):
    T = "T"
    C = "C"
    SV = "SV"
    SD = "SD"
    T2 = "T2"
    SUM = "SUM"


class UndefinedCell(TailStatsError):
    """The cell's left-hand side is not defined on this input."""

    category = "undefined_cell"

    def __init__(self, stat: Stat | str | None, regime: Regime | str | None, reason: str):
        self.stat = Stat(stat) if stat is not None else None
        self.regime = Regime(regime) if regime is not None else None
        self.reason = reason
        if self.stat is None or self.regime is None:
            super().__init__(reason)
        else:
            super().__init__(f"{self.stat.value} in regime {self.regime.value}: {reason}")


class AllZeroSample(UndefinedCell):
    category = "all_zero_sample"

    def __init__(self, n: int):
        self.n = n
        super().__init__(None, None, f"all {n} values are zero; ratio statistics undefined")


# ── Raw statistics ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SampleStats:
    n: int
    sum: float
    sum_sq: float
    t_ratio: float
    c_ratio: float
    n_t_minus_one: float
    sv: float
    sd: float
    t2: float

    @property
    def mean(self) -> float:
        return self.sum / self.n

    @property
    def degenerate(self) -> bool:
        return self.n_t_minus_one == 0.0

    def value(self, stat: Stat) -> float:
        return {
            Stat.T: self.t_ratio,
            Stat.C: self.c_ratio,
            Stat.SV: self.sv,
            Stat.SD: self.sd,
            Stat.T2: self.t2,
            Stat.SUM: self.sum,
        }[Stat(stat)]

    def to_dict(self) -> dict:
        return {
            "n": self.n, "sum": self.sum, "sum_sq": self.sum_sq,
            "T": self.t_ratio, "C": self.c_ratio, "SV": self.sv,
            "SD": self.sd, "T2": self.t2,
        }


def compute_stats(data: Sequence[float] | np.ndarray) -> SampleStats:
    """All ratio statistics of ``data`` (non-negative, at least one value)."""
    values = np.asarray(data, dtype=float).ravel()
    n = values.size
    if n == 0:
        raise ValueError("data must be non-empty")
    if not np.all(values >= 0.0):
        raise ValueError("data must be non-negative and free of nan")

    total = math.fsum(values)
    if total == 0.0:
        raise AllZeroSample(n)
    total_sq = math.fsum(values * values)
    mean = total / n

    if np.all(values == values[0]):
        spread = 0.0
    else:
        spread = n * math.fsum((values - mean) ** 2) / (total * total)

    return SampleStats(
        n=n,
        sum=total,
        sum_sq=total_sq,
        t_ratio=total_sq / (total * total),
        c_ratio=total_sq / total,
        n_t_minus_one=spread,
        sv=math.sqrt(spread),
        sd=spread * mean,
        t2=n / spread if spread > 0.0 else math.nan,
    )


# ── Normalized statistics ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Inputs:
    stats: SampleStats
    row: NormalizerRow
    moments: MomentTable

    @property
    def n(self) -> int:
        return self.stats.n


def _regime_iii_shift(x: _Inputs) -> float:
    """c(n) = d(n)/(nμ²) − 1, the moving target of the α = 2 cells."""
    return x.row.d / (x.n * x.moments.mu ** 2) - 1.0


def _sv_regime_iii(x: _Inputs) -> float:
    c_n = _regime_iii_shift(x)
    if c_n <= 0.0:
        raise UndefinedCell(Stat.SV, Regime.III, f"c(n) = {c_n!r} is not positive")
    root = math.sqrt(c_n)
    return x.n * root / x.row.b * (x.stats.sv - root)


def _t2_regime_iii(x: _Inputs) -> float:
    c_n = _regime_iii_shift(x)
    if c_n <= 0.0:
        raise UndefinedCell(Stat.T2, Regime.III, f"c(n) = {c_n!r} is not positive")
    return x.n * c_n ** 2 / x.row.b * (1.0 / c_n - x.stats.t2 / x.n)


def _t2_light(x: _Inputs) -> float:
    c = x.moments.sigma2 / x.moments.mu ** 2
    return x.n * c * c / x.row.b * (1.0 / c - x.stats.t2 / x.n)


_Formula = Callable[[_Inputs], float]

_NORMALIZED: dict[tuple[Stat, Regime], _Formula] = {
    # ── T ──
    (Stat.T, Regime.I):    lambda x: x.stats.t_ratio,
    (Stat.T, Regime.II):   lambda x: (x.n * x.row.m_a / x.row.a) ** 2 * x.stats.t_ratio,
    (Stat.T, Regime.III):  lambda x: x.n / x.row.b * (
        x.n * x.stats.t_ratio - x.row.d / (x.n * x.moments.mu ** 2)),
    (Stat.T, Regime.IV):   lambda x: x.n / x.row.b * (
        x.n * x.stats.t_ratio - x.moments.mu2 / x.moments.mu ** 2),
    (Stat.T, Regime.V):    lambda x: x.n / x.row.b * (
        x.n * x.stats.t_ratio - x.moments.mu2 / x.moments.mu ** 2),
    # ── SV ──
    (Stat.SV, Regime.I):   lambda x: x.stats.sv / math.sqrt(x.n),
    (Stat.SV, Regime.II):  lambda x: math.sqrt(x.n) * x.row.m_a / x.row.a * x.stats.sv,
    (Stat.SV, Regime.III): _sv_regime_iii,
    (Stat.SV, Regime.IV):  lambda x: x.n / x.row.b * (
        x.stats.sv - x.moments.sigma / x.moments.mu),
    (Stat.SV, Regime.V):   lambda x: x.n / x.row.b * (
        x.stats.sv - x.moments.sigma / x.moments.mu),
    # ── C ──
    (Stat.C, Regime.I):    lambda x: x.stats.c_ratio / x.row.a,
    (Stat.C, Regime.II):   lambda x: x.n * x.row.m_a / x.row.a ** 2 * x.stats.c_ratio,
    (Stat.C, Regime.III):  lambda x: x.row.d / x.row.b * (
        x.n * x.stats.c_ratio / x.row.d - 1.0 / x.moments.mu),
    (Stat.C, Regime.IV):   lambda x: x.n / x.row.b * (
        x.stats.c_ratio - x.moments.mu2 / x.moments.mu),
    (Stat.C, Regime.V):    lambda x: x.n / x.row.b * (
        x.stats.c_ratio - x.moments.mu2 / x.moments.mu),
    # ── SD ──
    (Stat.SD, Regime.I):   lambda x: x.stats.sd / x.row.a,
    (Stat.SD, Regime.II):  lambda x: x.n * x.row.m_a / x.row.a ** 2 * x.stats.sd,
    (Stat.SD, Regime.III): lambda x: x.n / x.row.b * (
        x.stats.sd - x.row.d / (x.n * x.moments.mu) + x.moments.mu),
    (Stat.SD, Regime.IV):  lambda x: x.n / x.row.b * (
        x.stats.sd - x.moments.sigma2 / x.moments.mu),
    (Stat.SD, Regime.V):   lambda x: x.n / x.row.b * (
        x.stats.sd - x.moments.sigma2 / x.moments.mu),
    # ── t² ──
    (Stat.T2, Regime.I):   lambda x: x.stats.t2,
    (Stat.T2, Regime.II):  lambda x: (x.row.a / (x.n * x.row.m_a)) ** 2 * x.stats.t2,
    (Stat.T2, Regime.III): _t2_regime_iii,
    (Stat.T2, Regime.IV):  _t2_light,
    (Stat.T2, Regime.V):   _t2_light,
    # ── ΣXᵢ ──
    (Stat.SUM, Regime.I):   lambda x: x.stats.sum / x.row.a,
    (Stat.SUM, Regime.II):  lambda x: x.stats.sum / (x.n * x.row.m_a),
    (Stat.SUM, Regime.III): lambda x: (x.stats.sum - x.n * x.moments.mu) / x.row.a,
    (Stat.SUM, Regime.IV):  lambda x: (x.stats.sum - x.n * x.moments.mu) / x.row.a,
    (Stat.SUM, Regime.V):   lambda x: (x.stats.sum - x.n * x.moments.mu) / x.row.a,
}


def normalized_statistic(
    stat: Stat | str,
    regime: Regime | str,
    data: Sequence[float] | np.ndarray | SampleStats,
    normalizers: NormalizerSet,
    moments: MomentTable,
) -> float:
    """Left-hand side of the limit statement for this (stat, regime) cell."""
    stat, regime = Stat(stat), Regime(regime)
    stats = data if isinstance(data, SampleStats) else compute_stats(data)
    if stat is Stat.T2 and stats.degenerate:
        raise UndefinedCell(stat, regime, "t² is undefined on a sample of equal values")
    if stats.degenerate and stat in (Stat.SV, Stat.SD):
        warnings.warn(
            f"{stat.value} evaluated on a sample of {stats.n} equal values",
            stacklevel=2,
        )

    value = _NORMALIZED[(stat, regime)](_Inputs(stats, normalizers.row(stats.n), moments))
    if math.isnan(value):
        raise UndefinedCell(stat, regime, "formula evaluated to nan (needed moment is infinite)")
    return value
