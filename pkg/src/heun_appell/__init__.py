"""Heun functions from Appell F1 expansions of their derivative."""
from .errors import (
    DomainError,
    ExponentError,
    HeunError,
    NonConvergenceError,
    ParameterError,
    PoleError,
    ProbeError,
    RegimeError,
    ResonanceError,
    StepUnderflowError,
)
from .expansions import Center, ExpansionSpec, build_solution, sum_expansion
from .heun_model import HeunParams, ReductionClass, classify, make_params

__all__ = [
    "Center",
    "DomainError",
    "ExpansionSpec",
    "ExponentError",
    "HeunError",
    "HeunParams",
    "NonConvergenceError",
    "ParameterError",
    "PoleError",
    "ProbeError",
    "ReductionClass",
    "RegimeError",
    "ResonanceError",
    "StepUnderflowError",
    "build_solution",
    "classify",
    "make_params",
    "sum_expansion",
]
