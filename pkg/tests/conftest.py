"""
conftest.py

Shared pytest fixtures and helpers.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Bootstrap sys.path so tests can import from src/ without installation
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from models.distributions import Bernoulli, Exponential, Pareto, ParetoLog  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: Monte Carlo acceptance checks (minutes); deselect with -m 'not slow'"
    )


# ── Statistical helpers ───────────────────────────────────────────────────────

def mc_lst(draws: np.ndarray, s: float) -> tuple[float, float]:
    """(mean, standard error) of exp(−s·Y) over ``draws``."""
    values = np.exp(-s * np.asarray(draws))
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def assert_within_se(estimate: float, se: float, target: float, k: float = 3.0) -> None:
    assert abs(estimate - target) <= k * se + 1e-12, (
        f"estimate {estimate!r} ± {se!r} is more than {k} SE from {target!r}"
    )


# ── Model fixtures ────────────────────────────────────────────────────────────

@pytest.fixture()
def pareto_half():
    return Pareto(alpha=0.5)


@pytest.fixture()
def pareto_two():
    return Pareto(alpha=2.0)


@pytest.fixture()
def exp_one():
    return Exponential(rate=1.0)


@pytest.fixture()
def bernoulli_03():
    return Bernoulli(p=0.3)


@pytest.fixture()
def paretolog_15():
    return ParetoLog(alpha=1.5)
