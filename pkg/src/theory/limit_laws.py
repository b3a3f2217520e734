"""
theory/limit_laws.py

Samplers and transforms for every limit law of the normalized sums and
ratio statistics.

Laws
----
- positive stable, index α < 1, LST exp(−Γ(1−α)s^α)
- centered spectrally positive stable, index 1 ≤ α < 2,
  LST exp(s log s + γs) at α = 1 and exp(Γ(2−α)s^α/(α−1)) above
- the joint law of (Y₁(α), Y₂(α/2)), realised as two shot-noise series over
  one Poisson arrival sequence: y1 = Σ Γᵢ^(−1/α), y2 = Σ Γᵢ^(−2/α)
- bivariate Gaussians with a given CovMatrix2
- linear composites c₂·Y₂ − c₁·Y₁ of a Gaussian pair, which are the
  regime V limits of T, C and SD

Stable variates come from the Chambers–Mallows–Stuck construction with
skewness 1, rescaled so the Laplace transform matches the forms above.
Every sampler is a pure function of (count, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy import special as _special

from config import PSD_TOLERANCE, SERIES_BLOCK_DRAWS, SERIES_TERMS
from harness.seeds import child_rng
from models.distributions import MomentTable
from theory.bivariate import CovMatrix2, NonPSDCovariance, sigma_matrix

EULER_GAMMA = float(np.euler_gamma)

# seed lanes
_LANE_STABLE = 0
_LANE_ARRIVALS = 1
_LANE_REMAINDER = 2
_LANE_GAUSSIAN = 3


def _check_count(count: int) -> None:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")


# ── Laplace transforms ────────────────────────────────────────────────────────

def lst_phi(alpha: float, s: float, moments: MomentTable | None = None) -> float:
    """E exp(−sY) for the limit of the normalized first coordinate.

    α < 1: exp(−Γ(1−α)s^α)        α = 1: exp(s log s + γs)
    1 < α < 2: exp(Γ(2−α)s^α/(α−1))
    α = 2: exp(½s²v), v = 1 − μ²/μ₂ (or 1 when μ₂ = ∞); needs ``moments``.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must be in (0, 2], got {alpha!r}")
    if not s > 0.0:
        raise ValueError(f"s must be > 0, got {s!r}")
    if alpha < 1.0:
        return math.exp(-_special.gamma(1.0 - alpha) * s ** alpha)
    if alpha == 1.0:
        return math.exp(s * math.log(s) + EULER_GAMMA * s)
    if alpha < 2.0:
        return math.exp(_special.gamma(2.0 - alpha) * s ** alpha / (alpha - 1.0))
    if moments is None:
        raise ValueError("alpha = 2 needs the moment table")
    variance = 1.0 - moments.mu ** 2 / moments.mu2 if math.isfinite(moments.mu2) else 1.0
    return math.exp(0.5 * s * s * variance)


# ── Stable variates ───────────────────────────────────────────────────────────

def _skewed_stable(alpha: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """Chambers–Mallows–Stuck with skewness 1 and unit Laplace exponent.

    Draws have LST exp(−s^α) for α < 1 and exp(s^α) for 1 < α < 2 (mean 0).
    Multiplying by K^(1/α) gives exponent ∓K s^α.
    """
    v = np.pi * (rng.random(count) - 0.5)
    w = rng.standard_exponential(count)
    shift = np.arctan(np.tan(np.pi * alpha / 2.0)) / alpha
    av = alpha * (v + shift)
    return (np.sin(av) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha))


def sample_positive_stable(alpha: float, count: int, seed: int) -> np.ndarray:
    """Positive stable draws with LST exp(−Γ(1−α)s^α), 0 < α < 1."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    _check_count(count)
    rng = child_rng(seed, _LANE_STABLE)
    scale = _special.gamma(1.0 - alpha) ** (1.0 / alpha)
    return scale * _skewed_stable(alpha, rng, count)


def sample_centered_stable(alpha: float, count: int, seed: int) -> np.ndarray:
    """Centered spectrally positive stable draws, 1 ≤ α < 2.

    The Laplace transform is exp(s log s + γs) at α = 1 and
    exp(Γ(2−α)s^α/(α−1)) above.
    """
    if not 1.0 <= alpha < 2.0:
        raise ValueError(f"alpha must be in [1, 2), got {alpha!r}")
    _check_count(count)
    rng = child_rng(seed, _LANE_STABLE)
    if alpha == 1.0:
        v = np.pi * (rng.random(count) - 0.5)
        w = rng.standard_exponential(count)
        lever = np.pi / 2.0 + v
        return lever * np.tan(v) - np.log(w * np.cos(v) / lever) - EULER_GAMMA
    scale = (_special.gamma(2.0 - alpha) / (alpha - 1.0)) ** (1.0 / alpha)
    return scale * _skewed_stable(alpha, rng, count)


def sample_stable(alpha: float, count: int, seed: int) -> np.ndarray:
    """Positive stable below 1, centered stable on [1, 2)."""
    if alpha < 1.0:
        return sample_positive_stable(alpha, count, seed)
    return sample_centered_stable(alpha, count, seed)


# ── Joint shot-noise series ───────────────────────────────────────────────────

def _series_block(alpha: float, count: int, terms: int, arrivals_rng: np.random.Generator,
                  remainder_rng: np.random.Generator) -> np.ndarray:
    # Arrivals are drawn term-major so the first N rows do not depend on
    # ``terms``: doubling the truncation extends each series in place.
    gaps = arrivals_rng.standard_exponential((terms, count))
    arrivals = np.cumsum(gaps, axis=0)
    last = arrivals[-1]

    p = 1.0 / alpha
    y1 = np.power(arrivals, -p).sum(axis=0)
    if alpha == 1.0:
        y1 += -np.log(last) - 1.0
    else:
        y1 += last ** (1.0 - p) / (p - 1.0)
    if alpha >= 1.0:
        # Fluctuation of the compensated tail Σ_{i>N}; Gaussian with
        # variance ∫_{Γ_N}^∞ t^(−2p) dt.
        spread = np.sqrt(last ** (1.0 - 2.0 * p) / (2.0 * p - 1.0))
        y1 += spread * remainder_rng.standard_normal(count)

    q = 2.0 / alpha
    y2 = np.power(arrivals, -q).sum(axis=0) + last ** (1.0 - q) / (q - 1.0)
    return np.column_stack((y1, y2))


def sample_joint_series(alpha: float, count: int, seed: int,
                        terms: int = SERIES_TERMS) -> np.ndarray:
    """``count`` pairs (y1, y2) ~ (Y₁(α), Y₂(α/2)) jointly; shape (count, 2).

    y1 is uncentered for α < 1, centered at the mean for 1 < α < 2, and
    at m(a(n)) for α = 1. y2 is never centered.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha!r}")
    _check_count(count)
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms!r}")

    blocks = []
    for index, start in enumerate(range(0, count, SERIES_BLOCK_DRAWS)):
        size = min(SERIES_BLOCK_DRAWS, count - start)
        blocks.append(_series_block(
            alpha, size, terms,
            arrivals_rng=child_rng(seed, _LANE_ARRIVALS, index),
            remainder_rng=child_rng(seed, _LANE_REMAINDER, index),
        ))
    return np.vstack(blocks)


# ── Gaussians ─────────────────────────────────────────────────────────────────

def sample_gaussian2(cov: CovMatrix2, count: int, seed: int) -> np.ndarray:
    """Centered bivariate normal draws, shape (count, 2).

    Factorised spectrally so rank-deficient matrices are accepted.
    """
    _check_count(count)
    eigvals, eigvecs = np.linalg.eigh(cov.as_array())
    if eigvals.min() < -PSD_TOLERANCE or not cov.is_psd:
        raise NonPSDCovariance(f"covariance is not positive semidefinite: {cov.to_dict()}")
    factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    z = child_rng(seed, _LANE_GAUSSIAN).standard_normal((count, 2))
    return z @ factor.T


def sample_gaussian(variance: float, count: int, seed: int) -> np.ndarray:
    if not variance >= 0.0:
        raise ValueError(f"variance must be >= 0, got {variance!r}")
    _check_count(count)
    return math.sqrt(variance) * child_rng(seed, _LANE_GAUSSIAN).standard_normal(count)


# ── Composites ────────────────────────────────────────────────────────────────

class CompositeKind(str, Enum):
    T_LIMIT = "t_limit"     # T, and through it SV and t²
    C_LIMIT = "c_limit"
    SD_LIMIT = "sd_limit"


def composite_coefficients(kind: CompositeKind, moments: MomentTable) -> tuple[float, float]:
    """(c₂, c₁) with composite = c₂·Y₂ − c₁·Y₁.

    c₁ = 0 when μ₄ = ∞: the first coordinate's scale is then negligible
    against the second's.
    """
    mu, mu2, mu4 = moments.mu, moments.mu2, moments.mu4
    if not math.isfinite(mu2):
        raise ValueError("composite laws need a finite second moment")
    kind = CompositeKind(kind)
    c2 = 1.0 / mu ** 2 if kind is CompositeKind.T_LIMIT else 1.0 / mu
    if not math.isfinite(mu4):
        return c2, 0.0
    ratio = math.sqrt(mu2 / mu4)
    if kind is CompositeKind.T_LIMIT:
        c1 = 2.0 * mu2 * ratio / mu ** 3
    elif kind is CompositeKind.C_LIMIT:
        c1 = mu2 * ratio / mu ** 2
    else:
        c1 = (mu2 / mu ** 2 + 1.0) * ratio
    return c2, c1


def composite_variance(kind: CompositeKind, moments: MomentTable) -> float:
    cov = sigma_matrix(moments)
    c2, c1 = composite_coefficients(kind, moments)
    return c2 * c2 * cov.v22 + c1 * c1 * cov.v11 - 2.0 * c2 * c1 * cov.v12


def composite_law(kind: CompositeKind, moments: MomentTable, count: int, seed: int) -> np.ndarray:
    """c₂·Y₂ − c₁·Y₁ with (Y₁, Y₂) ~ N(0, sigma_matrix(moments))."""
    c2, c1 = composite_coefficients(kind, moments)
    pairs = sample_gaussian2(sigma_matrix(moments), count, seed)
    return c2 * pairs[:, 1] - c1 * pairs[:, 0]


def bernoulli_t_reference(p: float, count: int, seed: int) -> np.ndarray:
    """−(√q/p²)·Z, the regime V limit of T for Bernoulli(p) data."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p!r}")
    return -(math.sqrt(1.0 - p) / p ** 2) * sample_gaussian(1.0, count, seed)


# ── References ────────────────────────────────────────────────────────────────

class LawKind(str, Enum):
    STABLE_MARGINAL = "stable_marginal"
    JOINT_SERIES = "joint_series"
    GAUSSIAN = "gaussian"
    GAUSSIAN2 = "gaussian2"
    COMPOSITE = "composite"
    RATIO = "ratio"
    DEGENERATE = "degenerate"


RATIO_FORMS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "y2/y1^2":     lambda y1, y2: y2 / (y1 * y1),
    "sqrt(y2)/y1": lambda y1, y2: np.sqrt(y2) / y1,
    "y2/y1":       lambda y1, y2: y2 / y1,
    "y1^2/y2":     lambda y1, y2: y1 * y1 / y2,
}


@dataclass(frozen=True)
class LimitReference:
    """A limit law as a deterministic sampler of (count, seed).

    Scalar kinds return shape (count,); JOINT_SERIES and GAUSSIAN2 return
    (count, 2).
    """

    kind: LawKind
    params: dict = field(default_factory=dict)
    moments: MomentTable | None = None

    @property
    def is_pair(self) -> bool:
        return self.kind in (LawKind.JOINT_SERIES, LawKind.GAUSSIAN2)

    def sample(self, count: int, seed: int) -> np.ndarray:
        _check_count(count)
        p = self.params
        if self.kind is LawKind.STABLE_MARGINAL:
            return sample_stable(p["index"], count, seed)
        if self.kind is LawKind.JOINT_SERIES:
            return sample_joint_series(p["alpha"], count, seed)
        if self.kind is LawKind.RATIO:
            pairs = sample_joint_series(p["alpha"], count, seed)
            return RATIO_FORMS[p["form"]](pairs[:, 0], pairs[:, 1])
        if self.kind is LawKind.GAUSSIAN:
            return sample_gaussian(p["variance"], count, seed)
        if self.kind is LawKind.GAUSSIAN2:
            cov = CovMatrix2(v11=p["v11"], v22=p["v22"], v12=p["v12"])
            return sample_gaussian2(cov, count, seed)
        if self.kind is LawKind.COMPOSITE:
            return composite_law(CompositeKind(p["composite"]), self.moments, count, seed)
        if self.kind is LawKind.DEGENERATE:
            return np.full(count, float(p["point"]))
        raise ValueError(f"unknown law kind {self.kind!r}")

    def describe(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind.value}{{{body}}}"


def stable_marginal(index: float) -> LimitReference:
    return LimitReference(LawKind.STABLE_MARGINAL, {"index": index})


def joint_series(alpha: float) -> LimitReference:
    return LimitReference(LawKind.JOINT_SERIES, {"alpha": alpha})


def ratio_law(alpha: float, form: str) -> LimitReference:
    if form not in RATIO_FORMS:
        raise ValueError(f"unknown ratio form {form!r} (supported: {sorted(RATIO_FORMS)})")
    return LimitReference(LawKind.RATIO, {"alpha": alpha, "form": form})


def gaussian(variance: float) -> LimitReference:
    return LimitReference(LawKind.GAUSSIAN, {"variance": variance})


def gaussian2(cov: CovMatrix2) -> LimitReference:
    return LimitReference(LawKind.GAUSSIAN2, cov.to_dict())


def composite(kind: CompositeKind, moments: MomentTable) -> LimitReference:
    return LimitReference(LawKind.COMPOSITE, {"composite": CompositeKind(kind).value}, moments)


def degenerate(point: float) -> LimitReference:
    return LimitReference(LawKind.DEGENERATE, {"point": point})
