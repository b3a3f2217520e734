"""
models

Positive distribution families and their scalar moment functionals.
"""

from models.distributions import (
    Bernoulli,
    DistributionModel,
    Exponential,
    ModelKind,
    ModelSpecError,
    MomentTable,
    Pareto,
    ParetoLog,
    parse_model_spec,
)

__all__ = [
    "Bernoulli",
    "DistributionModel",
    "Exponential",
    "ModelKind",
    "ModelSpecError",
    "MomentTable",
    "Pareto",
    "ParetoLog",
    "parse_model_spec",
]
