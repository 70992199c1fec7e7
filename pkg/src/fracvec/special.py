"""Real Gamma function on the positive axis.

Lanczos approximation with g = 7 and nine coefficients. Only positive
arguments occur in the dimension-dependent coefficients of this package, so
the reflection formula is never needed; arguments below 1/2 are shifted up
with the recurrence Gamma(x + 1) = x Gamma(x).
"""

import math

from .errors import DomainError, GammaOverflowError

__all__ = ["gamma", "lgamma", "gamma_ratio", "GAMMA_MAX_ARG"]

GAMMA_MAX_ARG = 170.0

_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check(x):
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma argument must be finite and > 0, got {x!r}")
    return x


def _series(z):
    # z = x - 1 with x >= 1/2
    acc = _COEF[0]
    for i in range(1, 9):
        acc += _COEF[i] / (z + i)
    return acc


def gamma(x):
    """Gamma function for ``0 < x <= 170``.

    Raises
    ------
    DomainError
        For ``x <= 0`` or non-finite input.
    GammaOverflowError
        For ``x > 170``.
    """
    x = _check(x)
    if x > GAMMA_MAX_ARG:
        raise GammaOverflowError(f"gamma({x}) exceeds the overflow guard {GAMMA_MAX_ARG}")
    if x < 0.5:
        return gamma(x + 1.0) / x
    z = x - 1.0
    t = z + _G + 0.5
    # split the power so t**(z + 0.5) cannot overflow before exp(-t) rescales it
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * _series(z)


def lgamma(x):
    """Natural log of Gamma for any finite ``x > 0`` (no upper guard)."""
    x = _check(x)
    if x < 0.5:
        return lgamma(x + 1.0) - math.log(x)
    z = x - 1.0
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_series(z))


def gamma_ratio(a, b):
    """``Gamma(a) / Gamma(b)`` evaluated through log-gamma differences.

    Stays finite when the individual factors would overflow, e.g.
    ``gamma_ratio(180.5, 179.5) == 179.5``.
    """
    a = _check(a)
    b = _check(b)
    if a == b:
        return 1.0
    return math.exp(lgamma(a) - lgamma(b))
