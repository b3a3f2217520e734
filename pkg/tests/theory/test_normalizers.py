"""
test_normalizers.py

Tests for regime classification and the normalizing sequences.
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

import pytest
from models import quadrature
from models.distributions import Bernoulli, Exponential, Pareto, ParetoLog
from theory.normalizers import (
    NormalizerError,
    NormalizerSet,
    Regime,
    UnsupportedRegime,
    centering,
    classify,
    solve_a,
    solve_b,
)


# ── classify ─────────────────────────────────────────────────────────────────

class TestClassify:
    @pytest.mark.parametrize("model,regime", [
        (Pareto(0.5), Regime.I),
        (ParetoLog(0.7), Regime.I),
        (Pareto(1.0), Regime.II),
        (Pareto(1.5), Regime.II),
        (Pareto(2.0), Regime.III),
        (Pareto(3.0), Regime.IV),
        (Pareto(4.0), Regime.V),
        (Pareto(6.0), Regime.V),
        (Exponential(1.0), Regime.V),
        (Bernoulli(0.3), Regime.V),
    ], ids=str)
    def test_regimes(self, model, regime):
        assert classify(model) is regime

    def test_non_model_rejected(self):
        with pytest.raises(UnsupportedRegime):
            classify("pareto{alpha=1}")


# ── a(n) ─────────────────────────────────────────────────────────────────────

class TestSolveA:
    @pytest.mark.parametrize("closed_form", [True, False])
    def test_pareto_half_is_n_squared(self, closed_form):
        assert solve_a(Pareto(0.5), 100, closed_form=closed_form) == pytest.approx(1e4, rel=1e-9)

    def test_pareto_two_fixed_point(self):
        n = 1000
        a = 10.0
        for _ in range(500):
            a = math.sqrt(2 * n * math.log(a))
        assert solve_a(Pareto(2.0), n) == pytest.approx(a, rel=1e-9)

    def test_exponential_large_n(self):
        assert solve_a(Exponential(1.0), 10 ** 6) == pytest.approx(math.sqrt(2e6), rel=1e-3)

    @pytest.mark.parametrize("closed_form", [True, False])
    def test_bernoulli(self, closed_form):
        assert solve_a(Bernoulli(0.3), 1000, closed_form=closed_form) == pytest.approx(
            math.sqrt(300.0), rel=1e-9)

    def test_n_equal_one_on_support_edge(self):
        assert solve_a(Pareto(1.5), 1, closed_form=False) == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("model", [Pareto(0.7), Pareto(1.5), ParetoLog(1.2)], ids=str)
    def test_tail_relation_holds_at_root(self, model):
        n = 5000
        a = solve_a(model, n, closed_form=False)
        assert abs(n * model.tail(a) - 1.0) < 1e-8

    @pytest.mark.parametrize("model", [Pareto(2.0), Pareto(3.0), Exponential(1.0)], ids=str)
    def test_second_moment_relation_holds_at_root(self, model):
        n = 5000
        a = solve_a(model, n)
        assert abs(n * model.truncated_second_moment(a) / a ** 2 - 1.0) < 1e-8

    @pytest.mark.parametrize("alpha,index", [(0.5, 2.0), (1.5, 1 / 1.5), (3.0, 0.5), (5.0, 0.5)])
    def test_regular_variation_index(self, alpha, index):
        model = Pareto(alpha)
        n = 10 ** 6
        ratio = solve_a(model, 2 * n, closed_form=False) / solve_a(model, n, closed_form=False)
        assert ratio == pytest.approx(2.0 ** index, rel=1e-2)

    def test_no_root_raises(self):
        # n·2·log(a)/a² peaks at 1/e < 1 when n = 1.
        with pytest.raises(NormalizerError) as exc_info:
            solve_a(Pareto(2.0), 1)
        assert exc_info.value.n == 1
        assert exc_info.value.category == "normalizer"

    def test_n_must_be_positive(self):
        with pytest.raises(ValueError):
            solve_a(Pareto(1.0), 0)


# ── b(n) ─────────────────────────────────────────────────────────────────────

class TestSolveB:
    @pytest.mark.parametrize("closed_form", [True, False])
    def test_pareto_three(self, closed_form):
        assert solve_b(Pareto(3.0), 1000, closed_form=closed_form) == pytest.approx(100.0, rel=1e-9)

    @pytest.mark.parametrize("closed_form", [True, False])
    def test_pareto_two(self, closed_form):
        assert solve_b(Pareto(2.0), 1000, closed_form=closed_form) == pytest.approx(1000.0, rel=1e-9)

    def test_exponential_large_n(self):
        assert solve_b(Exponential(1.0), 10 ** 6) == pytest.approx(math.sqrt(24e6), rel=1e-3)

    @pytest.mark.parametrize("model", [Pareto(0.3), Pareto(0.9), ParetoLog(0.6)], ids=str)
    def test_regime_one_is_a_squared(self, model):
        for n in (10, 1000):
            assert solve_b(model, n) == solve_a(model, n) ** 2

    def test_fourth_moment_relation_holds_at_root(self):
        model, n = Pareto(5.0), 5000
        b = solve_b(model, n)
        assert abs(n * model.squared_functionals(b)[1] / b ** 2 - 1.0) < 1e-8


# ── c(n), d(n) ───────────────────────────────────────────────────────────────

class TestCentering:
    def test_regime_one_zero(self):
        assert centering(Pareto(0.5), 1234) == (0.0, 0.0)

    @pytest.mark.parametrize("closed_form", [True, False])
    def test_pareto_two(self, closed_form):
        c, d = centering(Pareto(2.0), 1000, closed_form=closed_form)
        assert c == pytest.approx(2000.0)
        assert d == pytest.approx(1000 * (1 + math.log(1000)), rel=1e-8)
        assert d == pytest.approx(7907.755, rel=1e-6)

    @pytest.mark.parametrize("n", [10, 1000, 100_000])
    def test_pareto_two_generic_matches_quadrature(self, n):
        model = Pareto(2.0)
        b = solve_b(model, n, closed_form=False)
        assert b == pytest.approx(n, rel=1e-10)
        _c, d = centering(model, n, closed_form=False)
        assert d == pytest.approx(n * quadrature.squared_functionals(model, b)[0], rel=1e-12)
        assert d == pytest.approx(n * (1 + math.log(n)), rel=1e-8)

    def test_alpha_one_generic_matches_closed_form(self):
        n = 1000
        assert centering(Pareto(1.0), n, closed_form=False)[0] == pytest.approx(
            centering(Pareto(1.0), n)[0], rel=1e-8)

    def test_exponential(self):
        assert centering(Exponential(1.0), 1000) == pytest.approx((1000.0, 2000.0))

    def test_alpha_one_uses_integrated_tail(self):
        n = 1000
        c, d = centering(Pareto(1.0), n)
        assert c == pytest.approx(n * (1 + math.log(n)))
        assert d == 0.0

    def test_alpha_above_one_uses_mean(self):
        c, _d = centering(Pareto(1.5), 100)
        assert c == pytest.approx(100 * 3.0)

    @pytest.mark.parametrize("model", [Pareto(1.0), Pareto(2.0), Pareto(3.0)], ids=str)
    def test_non_decreasing(self, model):
        values = [centering(model, n) for n in (10, 100, 1000, 10_000)]
        for (c0, d0), (c1, d1) in zip(values, values[1:]):
            assert c1 >= c0 and d1 >= d0


# ── NormalizerSet ────────────────────────────────────────────────────────────

class TestNormalizerSet:
    def test_build_and_lookup(self):
        table = NormalizerSet.build(Pareto(0.5), [10, 100])
        assert table.regime is Regime.I
        assert table.a(100) == pytest.approx(1e4)
        assert table.b(100) == pytest.approx(1e8)
        assert table.c(100) == 0.0 and table.d(100) == 0.0

    def test_rows_read_only(self):
        table = NormalizerSet.build(Pareto(1.5), [10])
        with pytest.raises(TypeError):
            table.rows[20] = table.rows[10]

    def test_lookup_outside_grid_not_stored(self):
        table = NormalizerSet.build(Pareto(1.5), [10])
        assert table.a(1000) == pytest.approx(1000 ** (1 / 1.5))
        assert 1000 not in table.rows

    def test_regime_two_m_a(self):
        table = NormalizerSet.build(Pareto(1.0), [100])
        assert table.row(100).m_a == pytest.approx(1 + math.log(100))

    def test_a_and_b_non_decreasing(self):
        grid = [10, 100, 1000, 10_000]
        table = NormalizerSet.build(Exponential(1.0), grid)
        a = [table.a(n) for n in grid]
        b = [table.b(n) for n in grid]
        assert a == sorted(a) and b == sorted(b)
