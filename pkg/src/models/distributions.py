"""
models/distributions.py

Positive distribution families with analytically known tails, the moment
functionals the normalizers need, and the small model-spec grammar used by
the CLI (``pareto{alpha=1.5}``, ``bernoulli{p=0.3}``, ``exp{rate=1}``).

Conventions
-----------
- Infinite moments are ``math.inf``; regime logic branches on
  ``math.isfinite``.
- Pareto kinds have support [1, ∞): F̄(x) = min(1, x^-α) for ``Pareto``.
- Models are frozen dataclasses. ``sample`` builds a fresh generator from
  the seed on every call, so no random state is ever shared.
"""

from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar

import numpy as np
from scipy import optimize as _optimize
from scipy import special as _special

from errors import TailStatsError
from models import quadrature


class ModelSpecError(TailStatsError, ValueError):
    """Bad model spec string or out-of-range model parameter."""

    category = "model_spec"


class ModelKind(str, Enum):
    PARETO = "pareto"
    PARETO_LOG = "paretolog"
    BERNOULLI = "bernoulli"
    EXPONENTIAL = "exp"


# ── Moment table ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MomentTable:
    """μ = E X and μₖ = E X^k for k = 2, 3, 4; entries may be ``inf``."""

    mu: float
    mu2: float
    mu3: float
    mu4: float

    @property
    def sigma2(self) -> float:
        if not math.isfinite(self.mu2):
            return math.inf
        return max(self.mu2 - self.mu ** 2, 0.0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def to_dict(self) -> dict:
        return {"mu": self.mu, "mu2": self.mu2, "mu3": self.mu3, "mu4": self.mu4}

    @classmethod
    def from_dict(cls, d: dict) -> "MomentTable":
        return cls(mu=float(d["mu"]), mu2=float(d["mu2"]),
                   mu3=float(d["mu3"]), mu4=float(d["mu4"]))


def _check_nonneg(x: float) -> float:
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    return x


# ── Base class ────────────────────────────────────────────────────────────────

class DistributionModel(ABC):
    """A positive law: tail, quantile, sampler, tail index, moment functionals.

    Subclasses implement ``tail``, ``_ppf`` and ``tail_index``. Every
    functional has a quadrature default (see ``models.quadrature``);
    subclasses with closed forms override them.
    """

    kind: ClassVar[ModelKind]

    # ── Law ────────────────────────────────────────────────────────────
    @abstractmethod
    def tail(self, x: float) -> float:
        """F̄(x) = P(X > x), for x ≥ 0."""

    @abstractmethod
    def _ppf(self, u: np.ndarray) -> np.ndarray:
        """Vectorised quantile on u ∈ [0, 1)."""

    @property
    @abstractmethod
    def tail_index(self) -> float:
        """α for regularly varying tails, ``inf`` for light-tailed kinds."""

    @property
    @abstractmethod
    def params(self) -> dict[str, float]:
        ...

    def cdf(self, x: float) -> float:
        return 1.0 - self.tail(x)

    def quantile(self, u: float) -> float:
        if not 0.0 <= u < 1.0:
            raise ValueError(f"u must be in [0, 1), got {u!r}")
        return float(self._ppf(np.asarray([u], dtype=float))[0])

    def sample(self, count: int, seed: int) -> np.ndarray:
        """``count`` i.i.d. draws by inverse transform; deterministic in ``seed``."""
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count!r}")
        rng = np.random.default_rng(seed)
        return self._ppf(rng.random(count))

    # ── Functionals ────────────────────────────────────────────────────
    def truncated_moment(self, k: int, x: float) -> float:
        """∫₀^x y^k dF(y)."""
        return quadrature.truncated_moment(self, k, _check_nonneg(x))

    def truncated_second_moment(self, x: float) -> float:
        """V(x) = ∫₀^x y² dF(y)."""
        return self.truncated_moment(2, x)

    def integrated_tail(self, x: float) -> float:
        """m(x) = ∫₀^x F̄(t) dt."""
        return quadrature.integrated_tail(self, _check_nonneg(x))

    def squared_functionals(self, x: float) -> tuple[float, float]:
        """(m₂(x), V₂(x)) for the law of X², F₂(x) = F(√x)."""
        return quadrature.squared_functionals(self, _check_nonneg(x))

    def moments(self) -> MomentTable:
        mu = self.truncated_moment(1, math.inf)
        mu2 = self.truncated_moment(2, math.inf)
        mu3 = self.truncated_moment(3, math.inf)
        mu4 = self.truncated_moment(4, math.inf)
        return MomentTable(mu=mu, mu2=mu2, mu3=mu3, mu4=mu4)

    # ── Spec grammar ───────────────────────────────────────────────────
    @property
    def spec(self) -> str:
        body = ",".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.kind.value}{{{body}}}"

    def __str__(self) -> str:
        return self.spec


# ── Pareto ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Pareto(DistributionModel):
    """F̄(x) = min(1, x^-α): Pareto with threshold 1."""

    alpha: float
    kind: ClassVar[ModelKind] = ModelKind.PARETO

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ModelSpecError(f"pareto alpha must be a positive real, got {self.alpha!r}")

    @property
    def tail_index(self) -> float:
        return self.alpha

    @property
    def params(self) -> dict[str, float]:
        return {"alpha": self.alpha}

    def tail(self, x: float) -> float:
        x = _check_nonneg(x)
        if x <= 1.0:
            return 1.0
        return x ** (-self.alpha)

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        return (1.0 - u) ** (-1.0 / self.alpha)

    def _power_integral(self, e: float, x: float) -> float:
        """∫₁^x y^(e-1) dy."""
        if e == 0.0:
            return math.log(x)
        return (x ** e - 1.0) / e

    def truncated_moment(self, k: int, x: float) -> float:
        x = _check_nonneg(x)
        if x <= 1.0:
            return 0.0
        if math.isinf(x):
            return self.alpha / (self.alpha - k) if k < self.alpha else math.inf
        return self.alpha * self._power_integral(k - self.alpha, x)

    def integrated_tail(self, x: float) -> float:
        x = _check_nonneg(x)
        if x <= 1.0:
            return x
        if math.isinf(x):
            return self.alpha / (self.alpha - 1.0) if self.alpha > 1.0 else math.inf
        return 1.0 + self._power_integral(1.0 - self.alpha, x)

    def squared_functionals(self, x: float) -> tuple[float, float]:
        x = _check_nonneg(x)
        half = self.alpha / 2.0
        if x <= 1.0:
            m2 = x
        elif math.isinf(x):
            m2 = half / (half - 1.0) if half > 1.0 else math.inf
        else:
            m2 = 1.0 + self._power_integral(1.0 - half, x)
        return m2, self.truncated_moment(4, math.sqrt(x))


@dataclass(frozen=True)
class ParetoLog(DistributionModel):
    """F̄(x) = x^-α / (1 + log x) on x ≥ 1: RV(−α) with a slowly varying factor.

    A stress family; only the quantile has to be solved numerically.
    """

    alpha: float
    kind: ClassVar[ModelKind] = ModelKind.PARETO_LOG

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ModelSpecError(f"paretolog alpha must be a positive real, got {self.alpha!r}")

    @property
    def tail_index(self) -> float:
        return self.alpha

    @property
    def params(self) -> dict[str, float]:
        return {"alpha": self.alpha}

    def tail(self, x: float) -> float:
        x = _check_nonneg(x)
        if x <= 1.0:
            return 1.0
        return x ** (-self.alpha) / (1.0 + math.log(x))

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        # Solve α·y + log(1 + y) = −log(1 − u) for y = log x. The left side is
        # increasing and concave, so Newton from y = 0 climbs monotonically.
        target = -np.log1p(-np.asarray(u, dtype=float))
        alpha = self.alpha
        y = _optimize.newton(
            lambda y: alpha * y + np.log1p(y) - target,
            np.zeros_like(target),
            fprime=lambda y: alpha + 1.0 / (1.0 + y),
            tol=1e-13,
            maxiter=100,
        )
        return np.exp(np.asarray(y, dtype=float))


# ── Light-tailed kinds ────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Bernoulli(DistributionModel):
    """P(X = 1) = p, P(X = 0) = 1 − p. All moments equal p."""

    p: float
    kind: ClassVar[ModelKind] = ModelKind.BERNOULLI

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 1.0:
            raise ModelSpecError(f"bernoulli p must be in (0, 1], got {self.p!r}")

    @property
    def tail_index(self) -> float:
        return math.inf

    @property
    def params(self) -> dict[str, float]:
        return {"p": self.p}

    def tail(self, x: float) -> float:
        return self.p if _check_nonneg(x) < 1.0 else 0.0

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        return (np.asarray(u) >= 1.0 - self.p).astype(float)

    def sample(self, count: int, seed: int) -> np.ndarray:
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count!r}")
        rng = np.random.default_rng(seed)
        return (rng.random(count) < self.p).astype(float)

    def truncated_moment(self, k: int, x: float) -> float:
        return self.p if _check_nonneg(x) >= 1.0 else 0.0

    def integrated_tail(self, x: float) -> float:
        return self.p * min(_check_nonneg(x), 1.0)

    def squared_functionals(self, x: float) -> tuple[float, float]:
        x = _check_nonneg(x)
        return self.p * min(x, 1.0), (self.p if x >= 1.0 else 0.0)


@dataclass(frozen=True)
class Exponential(DistributionModel):
    """F̄(x) = exp(−λx); μₖ = k!/λ^k."""

    rate: float
    kind: ClassVar[ModelKind] = ModelKind.EXPONENTIAL

    def __post_init__(self) -> None:
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ModelSpecError(f"exp rate must be a positive real, got {self.rate!r}")

    @property
    def tail_index(self) -> float:
        return math.inf

    @property
    def params(self) -> dict[str, float]:
        return {"rate": self.rate}

    def tail(self, x: float) -> float:
        return math.exp(-self.rate * _check_nonneg(x))

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-np.asarray(u, dtype=float)) / self.rate

    def truncated_moment(self, k: int, x: float) -> float:
        # ∫₀^x y^k λe^{-λy} dy = Γ(k+1)·P(k+1, λx) / λ^k
        x = _check_nonneg(x)
        scale = math.factorial(k) / self.rate ** k
        if math.isinf(x):
            return scale
        return scale * float(_special.gammainc(k + 1, self.rate * x))

    def integrated_tail(self, x: float) -> float:
        return -math.expm1(-self.rate * _check_nonneg(x)) / self.rate

    def squared_functionals(self, x: float) -> tuple[float, float]:
        root = math.sqrt(_check_nonneg(x))
        if math.isinf(root):
            m2 = 2.0 / self.rate ** 2
        else:
            m2 = 2.0 * float(_special.gammainc(2, self.rate * root)) / self.rate ** 2
        return m2, self.truncated_moment(4, root)


# ── Spec grammar ──────────────────────────────────────────────────────────────

_SPEC_RE = re.compile(r"^\s*([A-Za-z_]+)\s*\{\s*(.*?)\s*\}\s*$")

_KINDS: dict[str, tuple[type[DistributionModel], tuple[str, ...]]] = {
    "pareto":      (Pareto, ("alpha",)),
    "paretolog":   (ParetoLog, ("alpha",)),
    "bernoulli":   (Bernoulli, ("p",)),
    "exp":         (Exponential, ("rate",)),
    "exponential": (Exponential, ("rate",)),
}


def parse_model_spec(spec: str) -> DistributionModel:
    """Parse ``kind{name=value,...}`` into a model.

    >>> parse_model_spec("pareto{alpha=1.5}")
    Pareto(alpha=1.5)
    """
    match = _SPEC_RE.match(spec or "")
    if match is None:
        raise ModelSpecError(f"model spec must look like 'kind{{name=value}}', got {spec!r}")
    name, body = match.group(1).lower(), match.group(2)
    if name not in _KINDS:
        raise ModelSpecError(f"unknown model kind {name!r} (supported: {sorted(_KINDS)})")
    cls, expected = _KINDS[name]

    values: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in expected:
            raise ModelSpecError(f"{name}: bad parameter {item!r} (expected {expected})")
        try:
            values[key] = float(raw)
        except ValueError:
            raise ModelSpecError(f"{name}: parameter {key!r} is not a number: {raw!r}") from None
    missing = [k for k in expected if k not in values]
    if missing:
        raise ModelSpecError(f"{name}: missing parameter(s) {missing}")
    return cls(**values)
