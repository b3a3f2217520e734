"""
test_regimes.py

Tests for the (statistic, regime) cell table and reference sampling.
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

import numpy as np
import pytest
from estimators.sample_stats import Stat, UndefinedCell
from models.distributions import Bernoulli, Exponential, Pareto, ParetoLog
from theory.limit_laws import LawKind
from theory.normalizers import NormalizerSet, Regime
from theory.regimes import CELL_TABLE, TRANSFORMS, build_cell, reference_sample


# one model per regime
REGIME_MODELS = {
    Regime.I: Pareto(0.5),
    Regime.II: Pareto(1.5),
    Regime.III: Pareto(2.0),
    Regime.IV: Pareto(3.0),
    Regime.V: Exponential(1.0),
}


class TestCellTable:
    def test_complete_grid(self):
        keys = [(row[0], row[1]) for row in CELL_TABLE]
        assert len(keys) == len(set(keys)) == len(Stat) * len(Regime)

    def test_transforms_known(self):
        assert {row[3] for row in CELL_TABLE} <= set(TRANSFORMS)

    @pytest.mark.parametrize("stat", list(Stat))
    @pytest.mark.parametrize("regime", list(Regime))
    def test_every_cell_builds_and_samples(self, stat, regime):
        cell = build_cell(stat, REGIME_MODELS[regime])
        assert cell.regime is regime
        assert cell.statement
        draws = reference_sample(cell, 200, seed=1)
        assert draws.shape == (200,)
        assert np.isfinite(draws).all()


class TestBuildCell:
    def test_regime_one_t(self):
        cell = build_cell("T", Pareto(0.5))
        assert cell.law.kind is LawKind.RATIO
        assert cell.law.params == {"alpha": 0.5, "form": "y2/y1^2"}
        assert cell.scale == 1.0

    def test_regime_two_sum_is_degenerate(self):
        cell = build_cell(Stat.SUM, Pareto(1.5))
        assert cell.law.kind is LawKind.DEGENERATE
        assert reference_sample(cell, 3, seed=0).tolist() == [1.0, 1.0, 1.0]

    def test_regime_two_t2_is_reciprocal(self):
        cell = build_cell(Stat.T2, Pareto(1.5))
        assert cell.transform == "reciprocal"
        assert cell.law.params == {"index": 0.75}
        assert cell.describe() == "reciprocal(stable_marginal{index=0.75})"

    def test_regime_three_t2_scale(self):
        cell = build_cell(Stat.T2, Pareto(2.0))
        assert cell.law.params == {"index": 1.0}
        assert cell.scale == pytest.approx(0.25)

    def test_regime_four_sv_scale(self):
        cell = build_cell(Stat.SV, Pareto(3.0))
        assert cell.scale == pytest.approx(0.5 / (math.sqrt(0.75) * 1.5))

    def test_regime_five_composite(self):
        cell = build_cell(Stat.T, Exponential(1.0))
        assert cell.law.kind is LawKind.COMPOSITE
        assert cell.law.params == {"composite": "t_limit"}

    def test_regime_five_bernoulli(self):
        cell = build_cell(Stat.SD, Bernoulli(0.3))
        assert cell.regime is Regime.V
        assert cell.law.moments == Bernoulli(0.3).moments()

    @pytest.mark.parametrize("stat", [Stat.SV, Stat.T2])
    def test_zero_spread_law_is_undefined(self, stat):
        with pytest.raises(UndefinedCell, match="σ = 0") as info:
            build_cell(stat, Bernoulli(1.0))
        assert info.value.stat is stat
        assert info.value.regime is Regime.V

    def test_zero_spread_law_keeps_sum_cell(self):
        assert build_cell(Stat.SUM, Bernoulli(1.0)).regime is Regime.V

    def test_paretolog_uses_tail_index(self):
        cell = build_cell(Stat.SUM, ParetoLog(0.7))
        assert cell.law.params == {"index": 0.7}


class TestReferenceSample:
    def test_deterministic(self):
        cell = build_cell(Stat.C, Pareto(0.5))
        assert np.array_equal(reference_sample(cell, 300, seed=4), reference_sample(cell, 300, seed=4))

    def test_sqrt_transform_positive(self):
        cell = build_cell(Stat.SV, Pareto(1.5))
        assert (reference_sample(cell, 500, seed=5) > 0.0).all()

    def test_regime_one_t_in_unit_interval(self):
        draws = reference_sample(build_cell(Stat.T, Pareto(0.5)), 500, seed=6)
        assert ((draws > 0.0) & (draws <= 1.0)).all()

    def test_normalized_uses_cell_moments(self):
        model = Pareto(3.0)
        cell = build_cell(Stat.C, model)
        table = NormalizerSet.build(model, [100])
        data = model.sample(100, seed=7)
        assert math.isfinite(cell.normalized(data, table))
