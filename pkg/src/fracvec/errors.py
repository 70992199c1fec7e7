"""Exception hierarchy shared by all fracvec modules.

Validation problems (bad dimension, bad radii, malformed expressions) derive
from :class:`DomainError`; failures that happen while computing a valid
request derive from :class:`NumericalError`. The CLI maps the two families
to exit codes 2 and 3.
"""


class FracvecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracvecError, ValueError):
    """An argument lies outside the domain of an operation."""


class PoleError(DomainError):
    """A Gamma function argument hits a non-positive integer."""


class NumericalError(FracvecError, ArithmeticError):
    """A well-posed computation failed numerically."""


class GammaOverflowError(NumericalError, OverflowError):
    """Gamma argument beyond the double-precision guard."""


class ConvergenceError(NumericalError):
    """Adaptive quadrature exhausted its subdivision budget."""


class DivergenceError(NumericalError):
    """An integrand failed the finiteness / decay probe."""


class SingularSystemError(NumericalError):
    """A linear system (tridiagonal or 2x2 boundary system) is singular."""


class InstabilityError(NumericalError):
    """Time stepping produced values beyond the instability sentinel."""
