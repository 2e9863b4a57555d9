"""Numerical laboratory for 1-D Levy-driven SDEs with bounded measurable drift."""

from ._backend import BACKEND
from .levy_model import (
    LevyModel,
    LevyMeasureSpec,
    ConditionReport,
    GridFunction,
    SymmetricStable,
    CompoundPoissonTag,
    symmetric_stable,
    stable_via_density,
    compound_poisson,
    gaussian,
    from_density,
    psi,
    check_condition,
    lambda0,
    n1_constant,
    apply_generator,
)

__all__ = [
    "BACKEND",
    "LevyModel",
    "LevyMeasureSpec",
    "ConditionReport",
    "GridFunction",
    "SymmetricStable",
    "CompoundPoissonTag",
    "symmetric_stable",
    "stable_via_density",
    "compound_poisson",
    "gaussian",
    "from_density",
    "psi",
    "check_condition",
    "lambda0",
    "n1_constant",
    "apply_generator",
]

__version__ = "0.1.0"
