"""
theory/bivariate.py

Tail functionals of the vector (X, X²):

    U(x, y) = ∫₀^x ∫₀^y F̄(max(u, √v)) dv du
    W(x, y) = E[X · X² · I{X ≤ x, X² ≤ y}] = E[X³ I{X ≤ min(x, √y)}]

the transfer bound |W − U| ≤ 2xyF̄(x) + 2xyF̄(√y), the limit Ω of
U(tx, t²y)/(t³F̄(t)) for pure power tails, and the Gaussian-limit
covariance matrix built from the moments.

U is split along the curve u = √v. Below it the integrand is F̄(u); above
it F̄(√v). Integrating out the free coordinate leaves two 1-D integrals:

    U = ∫₀^x F̄(u) min(y, u²) du + ∫₀^√y F̄(w) min(x, w) 2w dw
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from config import FUNCTIONAL_EPSREL, PSD_TOLERANCE
from errors import TailStatsError
from models.distributions import DistributionModel, MomentTable
from models.quadrature import integrate


class NonPSDCovariance(TailStatsError):
    category = "non_psd_covariance"


@dataclass(frozen=True)
class CovMatrix2:
    """Symmetric 2×2 covariance ``[[v11, v12], [v12, v22]]``."""

    v11: float
    v22: float
    v12: float

    @property
    def determinant(self) -> float:
        return self.v11 * self.v22 - self.v12 ** 2

    @property
    def is_psd(self) -> bool:
        return (self.v11 >= -PSD_TOLERANCE and self.v22 >= -PSD_TOLERANCE
                and self.determinant >= -PSD_TOLERANCE)

    def as_array(self) -> np.ndarray:
        return np.array([[self.v11, self.v12], [self.v12, self.v22]], dtype=float)

    def to_dict(self) -> dict:
        return {"v11": self.v11, "v12": self.v12, "v22": self.v22}


def _check_point(x: float, y: float) -> tuple[float, float]:
    x, y = float(x), float(y)
    if not (x >= 0.0 and y >= 0.0):
        raise ValueError(f"x and y must be >= 0, got ({x!r}, {y!r})")
    return x, y


# ── U, W ──────────────────────────────────────────────────────────────────────

def u_integral(model: DistributionModel, x: float, y: float) -> float:
    """U(x, y) for (X, X²)."""
    x, y = _check_point(x, y)
    if x == 0.0 or y == 0.0:
        return 0.0
    root_y = math.sqrt(y)
    tail = model.tail

    below = integrate(lambda u: tail(u) * min(y, u * u), 0.0, x,
                      breakpoints=(root_y,), epsrel=FUNCTIONAL_EPSREL)
    above = integrate(lambda w: tail(w) * min(x, w) * 2.0 * w, 0.0, root_y,
                      breakpoints=(x,), epsrel=FUNCTIONAL_EPSREL)
    return below + above


def u_integral_monte_carlo(model: DistributionModel, x: float, y: float,
                           count: int, seed: int) -> tuple[float, float]:
    """(estimate, standard error) of U(x, y) = E[min(X, x) · min(X², y)]."""
    x, y = _check_point(x, y)
    draws = model.sample(count, seed)
    values = np.minimum(draws, x) * np.minimum(draws * draws, y)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(count))


def w_integral(model: DistributionModel, x: float, y: float) -> float:
    """W(x, y) = ∫₀^min(x,√y) u³ dF(u)."""
    x, y = _check_point(x, y)
    return model.truncated_moment(3, min(x, math.sqrt(y)))


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool


def check_transfer_bound(model: DistributionModel, x: float, y: float) -> BoundCheck:
    """|W(x, y) − U(x, y)| against 2xyP(X > x) + 2xyP(X² > y)."""
    x, y = _check_point(x, y)
    if x == 0.0 or y == 0.0:
        raise ValueError(f"x and y must be > 0, got ({x!r}, {y!r})")
    lhs = abs(w_integral(model, x, y) - u_integral(model, x, y))
    rhs = 2.0 * x * y * model.tail(x) + 2.0 * x * y * model.tail(math.sqrt(y))
    return BoundCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-9)


# ── Ω ─────────────────────────────────────────────────────────────────────────

def _power_span(e: float, lo: float, hi: float) -> float:
    """∫_lo^hi w^(e-1) dw for 0 < lo ≤ hi."""
    if e == 0.0:
        return math.log(hi / lo)
    return (hi ** e - lo ** e) / e


def omega_limit(alpha: float, x: float, y: float) -> float:
    """Ω(x, y) = ∫₀^x ∫₀^y max(u, √v)^(−α) dv du, in closed form."""
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha!r}")
    x, y = _check_point(x, y)
    if x == 0.0 or y == 0.0:
        return 0.0
    root_y = math.sqrt(y)
    z = min(x, root_y)

    value = 3.0 * z ** (3.0 - alpha) / (3.0 - alpha)
    if x > root_y:
        value += y * _power_span(1.0 - alpha, root_y, x)
    elif root_y > x:
        value += 2.0 * x * _power_span(2.0 - alpha, x, root_y)
    return value


def omega_convergence_ratio(model: DistributionModel, t: float, x: float, y: float) -> float:
    """U(tx, t²y) / (t³ F̄(t))."""
    if not t >= 1.0:
        raise ValueError(f"t must be >= 1, got {t!r}")
    return u_integral(model, t * x, t * t * y) / (t ** 3 * model.tail(t))


# ── Gaussian-limit covariance ─────────────────────────────────────────────────

def sigma_matrix(moments: MomentTable) -> CovMatrix2:
    """Covariance of the Gaussian limit of the normalized (ΣXᵢ, ΣXᵢ²).

    With an infinite fourth moment the second coordinate is asymptotically
    independent of the first and has unit variance.
    """
    mu, mu2, mu3, mu4 = moments.mu, moments.mu2, moments.mu3, moments.mu4
    if not math.isfinite(mu2):
        raise ValueError("sigma_matrix needs a finite second moment")
    v11 = (mu2 - mu * mu) / mu2
    if not math.isfinite(mu4):
        return CovMatrix2(v11=v11, v22=1.0, v12=0.0)
    v12 = (mu3 - mu * mu2) / math.sqrt(mu2 * mu4)
    v22 = (mu4 - mu2 * mu2) / mu4
    return CovMatrix2(v11=v11, v22=v22, v12=v12)
