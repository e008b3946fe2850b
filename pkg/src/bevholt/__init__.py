"""Higher-order Beverton-Holt recurrences ``z[n+k] = z[n] / (A[n] + B[n] z[n])``."""

from .core import (
    Backend,
    BevHoltError,
    CoefficientSequence,
    ConfigError,
    Constant,
    DomainError,
    Model,
    Periodic,
    Sampled,
    SingularityError,
    Trajectory,
    as_sequence,
    coefficients_from_ecology,
    step,
)
from .formula import Formula, FormulaError, parse_formula

__all__ = [
    "Backend",
    "BevHoltError",
    "CoefficientSequence",
    "ConfigError",
    "Constant",
    "DomainError",
    "Formula",
    "FormulaError",
    "Model",
    "Periodic",
    "Sampled",
    "SingularityError",
    "Trajectory",
    "as_sequence",
    "coefficients_from_ecology",
    "parse_formula",
    "step",
]

__version__ = "0.1.0"
