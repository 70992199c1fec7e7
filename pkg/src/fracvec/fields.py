"""Field descriptors for rotationally covariant scalar and vector fields."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

__all__ = [
    "RadialScalarField",
    "RadialVectorField",
    "AxialField",
    "as_scalar_field",
    "power_field",
]

_EPS = 2.220446049250313e-16
_STEP = _EPS ** 0.2


def _step(r):
    h = max(_STEP * abs(r), _STEP)
    if r - 2.0 * h <= 0.0:
        # keep every stencil point on r > 0
        h = 0.25 * r
    return h


def central_d1(f, r):
    """Fourth-order central difference for f'(r)."""
    h = _step(r)
    return (f(r - 2 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2 * h)) / (12.0 * h)


def central_d2(f, r):
    """Fourth-order central difference for f''(r)."""
    h = _step(r)
    return (-f(r - 2 * h) + 16.0 * f(r - h) - 30.0 * f(r) + 16.0 * f(r + h) - f(r + 2 * h)) / (12.0 * h * h)


@dataclass(frozen=True)
class RadialScalarField:
    """Scalar field phi(r) with optional analytic first and second derivatives.

    Missing derivatives fall back to fourth-order central differences with
    step ``max(eps**(1/5) * r, eps**(1/5))``.
    """

    eval: Callable[[float], float]
    deriv1: Optional[Callable[[float], float]] = None
    deriv2: Optional[Callable[[float], float]] = None

    def __call__(self, r):
        return self.eval(r)

    def d1(self, r):
        if self.deriv1 is not None:
            return self.deriv1(r)
        return central_d1(self.eval, r)

    def d2(self, r):
        if self.deriv2 is not None:
            return self.deriv2(r)
        if self.deriv1 is not None:
            return central_d1(self.deriv1, r)
        return central_d2(self.eval, r)

    def scaled(self, a):
        """Return ``a * phi`` keeping analytic derivatives."""
        d1 = None if self.deriv1 is None else (lambda r: a * self.deriv1(r))
        d2 = None if self.deriv2 is None else (lambda r: a * self.deriv2(r))
        return RadialScalarField(lambda r: a * self.eval(r), d1, d2)

    def __add__(self, other):
        if not isinstance(other, RadialScalarField):
            return NotImplemented
        both1 = self.deriv1 is not None and other.deriv1 is not None
        both2 = self.deriv2 is not None and other.deriv2 is not None
        return RadialScalarField(
            lambda r: self.eval(r) + other.eval(r),
            (lambda r: self.deriv1(r) + other.deriv1(r)) if both1 else None,
            (lambda r: self.deriv2(r) + other.deriv2(r)) if both2 else None,
        )


@dataclass(frozen=True)
class RadialVectorField:
    """Vector field u = u_r(r) e_r; there are no angular components."""

    radial: RadialScalarField

    @classmethod
    def from_callable(cls, u_r, deriv1=None, deriv2=None):
        return cls(RadialScalarField(u_r, deriv1, deriv2))

    def __call__(self, r):
        return self.radial(r)


@dataclass(frozen=True)
class AxialField:
    """u(r, z) = u_r(r, z) e_r + u_z(r, z) e_z with optional analytic partials."""

    u_r: Callable[[float, float], float]
    u_z: Callable[[float, float], float]
    du_r_dz: Optional[Callable[[float, float], float]] = None
    du_z_dr: Optional[Callable[[float, float], float]] = None

    def dur_dz(self, r, z):
        if self.du_r_dz is not None:
            return self.du_r_dz(r, z)
        h = max(_STEP * abs(z), _STEP)
        f = lambda s: self.u_r(r, s)
        return (f(z - 2 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2 * h)) / (12.0 * h)

    def duz_dr(self, r, z):
        if self.du_z_dr is not None:
            return self.du_z_dr(r, z)
        return central_d1(lambda s: self.u_z(s, z), r)


def as_scalar_field(f):
    """Coerce a callable, vector field or scalar field into a RadialScalarField."""
    if isinstance(f, RadialScalarField):
        return f
    if isinstance(f, RadialVectorField):
        return f.radial
    if callable(f):
        return RadialScalarField(f)
    raise TypeError(f"cannot interpret {type(f).__name__} as a radial field")


def power_field(k, coef=1.0):
    """``coef * r**k`` with exact derivatives."""
    return RadialScalarField(
        lambda r: coef * r ** k,
        lambda r: coef * k * r ** (k - 1),
        lambda r: coef * k * (k - 1) * r ** (k - 2),
    )


def exp_field(k=1.0):
    """``exp(k r)`` with exact derivatives."""
    return RadialScalarField(
        lambda r: math.exp(k * r),
        lambda r: k * math.exp(k * r),
        lambda r: k * k * math.exp(k * r),
    )
