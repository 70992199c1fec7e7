"""Vector calculus for radially symmetric fields in non-integer dimension.

Submodules: :mod:`special`, :mod:`quadrature`, :mod:`geometry`,
:mod:`operators`, :mod:`radial_solver`, :mod:`elasticity`, :mod:`heat`,
:mod:`electrostatics`, :mod:`expr` and :mod:`cli`.
"""

from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    FracvecError,
    GammaOverflowError,
    InstabilityError,
    NumericalError,
    PoleError,
    SingularSystemError,
)
from .expr import FieldExpression, parse_expression
from .fields import RadialScalarField, RadialVectorField
from .geometry import DimensionSpec, RadialInterval, Symmetry
from .quadrature import QuadratureConfig
from .special import gamma, gamma_ratio, lgamma

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DivergenceError", "DomainError", "FracvecError", "GammaOverflowError",
    "InstabilityError", "NumericalError", "PoleError", "SingularSystemError",
    "FieldExpression", "parse_expression", "RadialScalarField", "RadialVectorField",
    "DimensionSpec", "RadialInterval", "Symmetry", "QuadratureConfig",
    "gamma", "gamma_ratio", "lgamma",
]
