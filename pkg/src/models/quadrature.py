"""
models/quadrature.py

Adaptive quadrature helpers and the generic (quadrature) paths for the
scalar functionals of a positive law. Model kinds with closed forms override
these; the generic versions stay importable so the analytic paths can be
cross-checked against them.

Everything here only needs ``model.tail(x)`` and ``model.tail_index``.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Callable, Iterable

from scipy import integrate as _integrate

from config import LOG_SPLIT_RATIO, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT

if TYPE_CHECKING:
    from models.distributions import DistributionModel

# exp() overflows past this; integrands handed to quad on [.., inf) decay there.
_MAX_LOG = 700.0


def _quad(fn: Callable[[float], float], lo: float, hi: float,
          epsrel: float, epsabs: float) -> float:
    value, _abserr = _integrate.quad(
        fn, lo, hi, epsrel=epsrel, epsabs=epsabs, limit=QUAD_LIMIT
    )
    return float(value)


def _segment(fn: Callable[[float], float], lo: float, hi: float,
             epsrel: float, epsabs: float) -> float:
    if hi <= lo:
        return 0.0
    # Wide segments away from the origin are power-law territory: integrate
    # in s = log u, where the integrand is close to an exponential.
    if lo > 0.0 and (math.isinf(hi) or hi / lo > LOG_SPLIT_RATIO):
        def in_log(s: float) -> float:
            if s > _MAX_LOG:
                return 0.0
            u = math.exp(s)
            return fn(u) * u
        upper = math.inf if math.isinf(hi) else math.log(hi)
        return _quad(in_log, math.log(lo), upper, epsrel, epsabs)
    return _quad(fn, lo, hi, epsrel, epsabs)


def integrate(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    breakpoints: Iterable[float] = (),
    *,
    epsrel: float = QUAD_EPSREL,
    epsabs: float = QUAD_EPSABS,
) -> float:
    """Integrate ``fn`` over [lo, hi] (``hi`` may be ``inf``).

    The range is split at every breakpoint strictly inside it and always at
    u = 1, the support edge of the Pareto kinds and the atom of the
    Bernoulli kind. Each piece is handed to ``scipy.integrate.quad``.
    """
    if hi <= lo:
        return 0.0
    cuts = sorted({float(b) for b in (*breakpoints, 1.0) if lo < b < hi})
    edges = [lo, *cuts, hi]
    return math.fsum(
        _segment(fn, a, b, epsrel, epsabs) for a, b in zip(edges, edges[1:])
    )


# ── Generic functionals ───────────────────────────────────────────────────────

def truncated_moment(model: "DistributionModel", k: int, x: float) -> float:
    """∫₀^x y^k dF(y) through the tail: k∫₀^x y^(k-1) F̄(y) dy − x^k F̄(x)."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        if k >= model.tail_index:
            return math.inf
        return k * integrate(lambda y: y ** (k - 1) * model.tail(y), 0.0, math.inf)
    body = k * integrate(lambda y: y ** (k - 1) * model.tail(y), 0.0, x)
    return max(body - x ** k * model.tail(x), 0.0)


def integrated_tail(model: "DistributionModel", x: float) -> float:
    """m(x) = ∫₀^x F̄(t) dt."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x) and model.tail_index <= 1.0:
        return math.inf
    return integrate(model.tail, 0.0, x)


def squared_functionals(model: "DistributionModel", x: float) -> tuple[float, float]:
    """(m₂(x), V₂(x)) for X²: m₂(x) = 2∫₀^√x w F̄(w) dw, V₂(x) = ∫₀^√x u⁴ dF(u)."""
    if x <= 0.0:
        return 0.0, 0.0
    root = math.sqrt(x)
    if math.isinf(x) and model.tail_index <= 2.0:
        m2 = math.inf
    else:
        m2 = 2.0 * integrate(lambda w: w * model.tail(w), 0.0, root)
    return m2, truncated_moment(model, 4, root)
