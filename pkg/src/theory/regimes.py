"""
theory/regimes.py

Binds a (statistic, model) pair to its limit law.

``CELL_TABLE`` is the full grid of six statistics × five regimes as literal
rows: which law, which transform of it, which constant scale, and the limit
statement in words. ``build_cell`` looks up the row for the model's regime
and instantiates it with the model's moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from estimators.sample_stats import SampleStats, Stat, UndefinedCell, normalized_statistic
from models.distributions import DistributionModel, MomentTable
from theory.bivariate import sigma_matrix
from theory.limit_laws import (
    CompositeKind,
    LimitReference,
    composite,
    degenerate,
    gaussian,
    ratio_law,
    stable_marginal,
)
from theory.normalizers import NormalizerSet, Regime, classify

# ── Transforms applied to a law's samples ─────────────────────────────────────

TRANSFORMS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "identity":   lambda y: y,
    "sqrt":       np.sqrt,
    "reciprocal": lambda y: 1.0 / y,
}


# ── Law factories, keyed by the names used in CELL_TABLE ──────────────────────

def _first_variance(m: MomentTable) -> float:
    return 1.0 - m.mu ** 2 / m.mu2 if math.isfinite(m.mu2) else 1.0


_LAWS: dict[str, Callable[[float, MomentTable], LimitReference]] = {
    "ratio:y2/y1^2":     lambda a, m: ratio_law(a, "y2/y1^2"),
    "ratio:sqrt(y2)/y1": lambda a, m: ratio_law(a, "sqrt(y2)/y1"),
    "ratio:y2/y1":       lambda a, m: ratio_law(a, "y2/y1"),
    "ratio:y1^2/y2":     lambda a, m: ratio_law(a, "y1^2/y2"),
    "y1":                lambda a, m: stable_marginal(a),
    "y2":                lambda a, m: stable_marginal(a / 2.0),
    "y2_unit":           lambda a, m: stable_marginal(1.0),
    "one":               lambda a, m: degenerate(1.0),
    "normal":            lambda a, m: gaussian(_first_variance(m)),
    "t_limit":           lambda a, m: composite(CompositeKind.T_LIMIT, m),
    "c_limit":           lambda a, m: composite(CompositeKind.C_LIMIT, m),
    "sd_limit":          lambda a, m: composite(CompositeKind.SD_LIMIT, m),
}

_Scale = Callable[[MomentTable], float]

_unit: _Scale = lambda m: 1.0
_inv_mu: _Scale = lambda m: 1.0 / m.mu
_inv_mu2: _Scale = lambda m: 1.0 / m.mu ** 2

# stat, regime, law, transform, scale, statement
CELL_TABLE: list[tuple[Stat, Regime, str, str, _Scale, str]] = [
    (Stat.T, Regime.I, "ratio:y2/y1^2", "identity", _unit,
     "T(n) → Y₂(α/2)/Y₁²(α)"),
    (Stat.T, Regime.II, "y2", "identity", _unit,
     "n²m²(a(n))/a²(n)·T(n) → Y₂(α/2)"),
    (Stat.T, Regime.III, "y2_unit", "identity", _inv_mu2,
     "n/b(n)·(nT(n) − d(n)/(nμ²)) → Y₂(1)/μ²"),
    (Stat.T, Regime.IV, "y2", "identity", _inv_mu2,
     "n/b(n)·(nT(n) − μ₂/μ²) → Y₂(α/2)/μ²"),
    (Stat.T, Regime.V, "t_limit", "identity", _unit,
     "n/b(n)·(nT(n) − μ₂/μ²) → Y₂(2)/μ² − 2μ₂√μ₂/(μ³√μ₄)·Y₁(2)"),

    (Stat.SV, Regime.I, "ratio:sqrt(y2)/y1", "identity", _unit,
     "SV(n)/√n → √Y₂(α/2)/Y₁(α)"),
    (Stat.SV, Regime.II, "y2", "sqrt", _unit,
     "√n·m(a(n))/a(n)·SV(n) → √Y₂(α/2)"),
    (Stat.SV, Regime.III, "y2_unit", "identity", lambda m: 0.5 / m.mu ** 2,
     "n√c(n)/b(n)·(SV(n) − √c(n)) → Y₂(1)/(2μ²), c(n) = d(n)/(nμ²) − 1"),
    (Stat.SV, Regime.IV, "y2", "identity", lambda m: 0.5 / (m.sigma * m.mu),
     "n/b(n)·(SV(n) − σ/μ) → Y₂(α/2)/(2σμ)"),
    (Stat.SV, Regime.V, "t_limit", "identity", lambda m: m.mu / (2.0 * m.sigma),
     "n/b(n)·(SV(n) − σ/μ) → μ/(2σ)·Y₃(2)"),

    (Stat.C, Regime.I, "ratio:y2/y1", "identity", _unit,
     "C(n)/a(n) → Y₂(α/2)/Y₁(α)"),
    (Stat.C, Regime.II, "y2", "identity", _unit,
     "n·m(a(n))/a²(n)·C(n) → Y₂(α/2)"),
    (Stat.C, Regime.III, "y2_unit", "identity", _inv_mu,
     "d(n)/b(n)·(nC(n)/d(n) − 1/μ) → Y₂(1)/μ"),
    (Stat.C, Regime.IV, "y2", "identity", _inv_mu,
     "n/b(n)·(C(n) − μ₂/μ) → Y₂(α/2)/μ"),
    (Stat.C, Regime.V, "c_limit", "identity", _unit,
     "n/b(n)·(C(n) − μ₂/μ) → Y₂(2)/μ − μ₂√μ₂/(μ²√μ₄)·Y₁(2)"),

    (Stat.SD, Regime.I, "ratio:y2/y1", "identity", _unit,
     "SD(n)/a(n) → Y₂(α/2)/Y₁(α)"),
    (Stat.SD, Regime.II, "y2", "identity", _unit,
     "n·m(a(n))/a²(n)·SD(n) → Y₂(α/2)"),
    (Stat.SD, Regime.III, "y2_unit", "identity", _inv_mu,
     "n/b(n)·(SD(n) − d(n)/(nμ) + μ) → Y₂(1)/μ"),
    (Stat.SD, Regime.IV, "y2", "identity", _inv_mu,
     "n/b(n)·(SD(n) − σ²/μ) → Y₂(α/2)/μ"),
    (Stat.SD, Regime.V, "sd_limit", "identity", _unit,
     "n/b(n)·(SD(n) − σ²/μ) → Y₂(2)/μ − (μ₂/μ² + 1)√(μ₂/μ₄)·Y₁(2)"),

    (Stat.T2, Regime.I, "ratio:y1^2/y2", "identity", _unit,
     "t²(n) → Y₁²(α)/Y₂(α/2)"),
    (Stat.T2, Regime.II, "y2", "reciprocal", _unit,
     "a²(n)/(n²m²(a(n)))·t²(n) → 1/Y₂(α/2)"),
    (Stat.T2, Regime.III, "y2_unit", "identity", _inv_mu2,
     "nc²(n)/b(n)·(1/c(n) − t²(n)/n) → Y₂(1)/μ², c(n) = (d(n) − nμ²)/(nμ²)"),
    (Stat.T2, Regime.IV, "y2", "identity", _inv_mu2,
     "nc²/b(n)·(1/c − t²(n)/n) → Y₂(α/2)/μ², c = σ²/μ²"),
    (Stat.T2, Regime.V, "t_limit", "identity", _unit,
     "nc²/b(n)·(1/c − t²(n)/n) → Y₃(2), c = σ²/μ²"),

    (Stat.SUM, Regime.I, "y1", "identity", _unit,
     "ΣXᵢ/a(n) → Y₁(α)"),
    (Stat.SUM, Regime.II, "one", "identity", _unit,
     "ΣXᵢ/(n·m(a(n))) → 1"),
    (Stat.SUM, Regime.III, "normal", "identity", _unit,
     "(ΣXᵢ − nμ)/a(n) → N(0, 1)"),
    (Stat.SUM, Regime.IV, "normal", "identity", _unit,
     "(ΣXᵢ − nμ)/a(n) → N(0, σ²/μ₂)"),
    (Stat.SUM, Regime.V, "normal", "identity", _unit,
     "(ΣXᵢ − nμ)/a(n) → N(0, σ²/μ₂)"),
]

_CELL_INDEX = {(row[0], row[1]): row for row in CELL_TABLE}

# Cells whose scale or centering divides by σ or by c = σ²/μ².
_NEEDS_SPREAD = frozenset({Stat.SV, Stat.T2})


# ── Cells ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class TheoremCell:
    stat: Stat
    regime: Regime
    law: LimitReference
    transform: str
    scale: float
    statement: str
    moments: MomentTable

    def normalized(self, data: Sequence[float] | np.ndarray | SampleStats,
                   normalizers: NormalizerSet) -> float:
        """The cell's left-hand side on ``data``."""
        return normalized_statistic(self.stat, self.regime, data, normalizers, self.moments)

    def describe(self) -> str:
        scale = "" if self.scale == 1.0 else f"{self.scale!r}·"
        inner = self.law.describe()
        if self.transform != "identity":
            inner = f"{self.transform}({inner})"
        return f"{scale}{inner}"


def build_cell(stat: Stat | str, model: DistributionModel) -> TheoremCell:
    stat = Stat(stat)
    regime = classify(model)
    moments = model.moments()
    if regime in (Regime.IV, Regime.V):
        sigma_matrix(moments)  # rejects an infinite second moment
        if stat in _NEEDS_SPREAD and moments.sigma2 == 0.0:
            raise UndefinedCell(stat, regime, "σ = 0: degenerate law")
    _stat, _regime, law_name, transform, scale, statement = _CELL_INDEX[(stat, regime)]
    return TheoremCell(
        stat=stat,
        regime=regime,
        law=_LAWS[law_name](model.tail_index, moments),
        transform=transform,
        scale=scale(moments),
        statement=statement,
        moments=moments,
    )


def reference_sample(cell: TheoremCell, count: int, seed: int) -> np.ndarray:
    """``count`` draws from the cell's limit law, transformed and scaled."""
    values = TRANSFORMS[cell.transform](cell.law.sample(count, seed))
    return cell.scale * values
