"""
theory/normalizers.py

Regime classification and the normalizing sequences a(n), b(n), c(n), d(n).

Each "→ 1" relation defining a sequence is solved as an exact equality at
the given n:

    regimes I, II     n F̄(a) = 1
    regimes III–V     n V(a) / a² = 1              (largest root)
    regime I          b = a²
    regimes II–IV     n F̄(√b) = 1
    regime V          n V₂(b) / b² = 1             (largest root)

Roots are bracketed by doubling from ``BRACKET_START_LOW`` and refined with
``scipy.optimize.bisect``. Pareto and Bernoulli have closed forms, which are
used unless ``closed_form=False``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from scipy import optimize as _optimize

from config import (
    BRACKET_MAX_DOUBLINGS,
    BRACKET_START_LOW,
    SOLVER_MAXITER,
    SOLVER_RTOL,
)
from errors import TailStatsError
from models import quadrature
from models.distributions import Bernoulli, DistributionModel, Pareto


class NormalizerError(TailStatsError):
    """The defining relation has no bracketable root at this n."""

    category = "normalizer"

    def __init__(self, model: DistributionModel, relation: str, n: int, detail: str):
        self.model = model
        self.relation = relation
        self.n = n
        super().__init__(f"{model}: cannot solve {relation} at n={n}: {detail}")


class UnsupportedRegime(TailStatsError):
    category = "unsupported_regime"

    def __init__(self, model: object, reason: str):
        self.model = model
        self.reason = reason
        super().__init__(f"{model}: {reason}")


class Regime(str, Enum):
    I = "I"        # 0 < α < 1
    II = "II"      # 1 ≤ α < 2
    III = "III"    # α = 2
    IV = "IV"      # 2 < α < 4
    V = "V"        # X² in the Gaussian domain (α ≥ 4, light tails)


def classify(model: DistributionModel) -> Regime:
    """Map the tail index to its regime. Light-tailed kinds and α ≥ 4 are V."""
    if not isinstance(model, DistributionModel):
        raise UnsupportedRegime(model, "not a distribution model")
    alpha = model.tail_index
    if math.isnan(alpha) or alpha <= 0.0:
        raise UnsupportedRegime(model, f"tail index must be positive, got {alpha!r}")
    if alpha < 1.0:
        return Regime.I
    if alpha < 2.0:
        return Regime.II
    if alpha == 2.0:
        return Regime.III
    if alpha < 4.0:
        return Regime.IV
    return Regime.V


# ── Root finding ──────────────────────────────────────────────────────────────

def _bisect(g: Callable[[float], float], lo: float, hi: float) -> float:
    # Zero counts as positive so the bracket closes on the upper end of any
    # flat zero stretch (n = 1 on a Pareto support edge).
    def signed(x: float) -> float:
        value = g(x)
        return value if value != 0.0 else math.ldexp(1.0, -1000)

    return float(_optimize.bisect(signed, lo, hi, rtol=SOLVER_RTOL,
                                  maxiter=SOLVER_MAXITER))


def _largest_root(g: Callable[[float], float], model: DistributionModel,
                  relation: str, n: int) -> float:
    """Largest x with g(x) ≥ 0, for g eventually negative.

    Doubles from ``BRACKET_START_LOW`` until g ≥ 0, keeps doubling until
    g < 0, then bisects between the last two grid points.
    """
    x = BRACKET_START_LOW
    seen_nonneg = False
    last_nonneg = x
    for _ in range(BRACKET_MAX_DOUBLINGS):
        value = g(x)
        if value >= 0.0:
            seen_nonneg = True
            last_nonneg = x
        elif seen_nonneg:
            return _bisect(g, last_nonneg, x)
        x *= 2.0
        if math.isinf(x):
            break
    if not seen_nonneg:
        raise NormalizerError(model, relation, n, "relation never reaches 1 on the scan grid")
    raise NormalizerError(model, relation, n, "bracket expansion overflowed")


# ── a(n), b(n) ────────────────────────────────────────────────────────────────

def solve_a(model: DistributionModel, n: int, *, closed_form: bool = True) -> float:
    """Scale for the first coordinate ΣXᵢ."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    regime = classify(model)

    if regime in (Regime.I, Regime.II):
        if closed_form and isinstance(model, Pareto):
            return float(n) ** (1.0 / model.alpha)
        return _largest_root(lambda a: n * model.tail(a) - 1.0, model, "n·F̄(a) = 1", n)

    if closed_form and isinstance(model, Bernoulli):
        return math.sqrt(n * model.p)

    def g(a: float) -> float:
        return n * model.truncated_second_moment(a) / (a * a) - 1.0

    return _largest_root(g, model, "n·V(a)/a² = 1", n)


def solve_b(model: DistributionModel, n: int, *, closed_form: bool = True) -> float:
    """Scale for the second coordinate ΣXᵢ²."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    regime = classify(model)

    if regime is Regime.I:
        return solve_a(model, n, closed_form=closed_form) ** 2

    if regime is not Regime.V:
        if closed_form and isinstance(model, Pareto):
            return float(n) ** (2.0 / model.alpha)
        return _largest_root(lambda b: n * model.tail(math.sqrt(b)) - 1.0,
                             model, "n·F̄(√b) = 1", n)

    if closed_form and isinstance(model, Bernoulli):
        return math.sqrt(n * model.p)

    def g(b: float) -> float:
        return n * model.squared_functionals(b)[1] / (b * b) - 1.0

    return _largest_root(g, model, "n·V₂(b)/b² = 1", n)


def centering(model: DistributionModel, n: int, *, closed_form: bool = True) -> tuple[float, float]:
    """(c(n), d(n)): centerings of ΣXᵢ and ΣXᵢ²."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return _centering(
        model, n, classify(model),
        a=lambda: solve_a(model, n, closed_form=closed_form),
        b=lambda: solve_b(model, n, closed_form=closed_form),
        closed_form=closed_form,
    )


def _centering(model: DistributionModel, n: int, regime: Regime,
               a: Callable[[], float], b: Callable[[], float],
               *, closed_form: bool = True) -> tuple[float, float]:
    if regime is Regime.I:
        return 0.0, 0.0
    moments = model.moments()
    # the generic path integrates m and m₂ numerically whatever the family
    if closed_form:
        m, squared = model.integrated_tail, model.squared_functionals
    else:
        m = lambda x: quadrature.integrated_tail(model, x)
        squared = lambda x: quadrature.squared_functionals(model, x)
    if regime is Regime.II:
        if model.tail_index == 1.0:
            return n * m(a()), 0.0
        return n * moments.mu, 0.0
    if regime is Regime.III:
        return n * moments.mu, n * squared(b())[0]
    return n * moments.mu, n * moments.mu2


# ── Memo table ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class NormalizerRow:
    """All sequences at one n, plus m(a(n)) for the regime II scalings."""

    n: int
    a: float
    b: float
    c: float
    d: float
    m_a: float

    def to_dict(self) -> dict:
        return {"n": self.n, "a": self.a, "b": self.b, "c": self.c,
                "d": self.d, "m_a": self.m_a}


def normalizer_row(model: DistributionModel, n: int, *, closed_form: bool = True) -> NormalizerRow:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    a = solve_a(model, n, closed_form=closed_form)
    b = solve_b(model, n, closed_form=closed_form)
    c, d = _centering(model, n, classify(model), a=lambda: a, b=lambda: b,
                      closed_form=closed_form)
    return NormalizerRow(n=n, a=a, b=b, c=c, d=d, m_a=model.integrated_tail(a))


class NormalizerSet:
    """The four sequences for one model, memoised over an n-grid.

    The table is built once and exposed read-only; lookups for n outside
    the grid are computed on demand and not stored.
    """

    def __init__(self, model: DistributionModel, rows: Mapping[int, NormalizerRow],
                 *, closed_form: bool = True):
        self.model = model
        self.regime = classify(model)
        self._closed_form = closed_form
        self._rows: Mapping[int, NormalizerRow] = MappingProxyType(dict(rows))

    @classmethod
    def build(cls, model: DistributionModel, n_grid: Iterable[int],
              *, closed_form: bool = True) -> "NormalizerSet":
        rows = {n: normalizer_row(model, n, closed_form=closed_form) for n in n_grid}
        return cls(model, rows, closed_form=closed_form)

    @property
    def rows(self) -> Mapping[int, NormalizerRow]:
        return self._rows

    def row(self, n: int) -> NormalizerRow:
        cached = self._rows.get(n)
        if cached is not None:
            return cached
        return normalizer_row(self.model, n, closed_form=self._closed_form)

    def a(self, n: int) -> float:
        return self.row(n).a

    def b(self, n: int) -> float:
        return self.row(n).b

    def c(self, n: int) -> float:
        return self.row(n).c

    def d(self, n: int) -> float:
        return self.row(n).d
