"""Pointwise vector-calculus operators for radial fields in dimension D.

Two families are provided. The simple family assumes the boundary of a
region has dimension ``d = D - 1`` and covers spherical symmetry
(coefficient ``c = D - 1``) and cylindrical symmetry (``c = D - 2``). The
generalized family allows ``d != D - 1`` through the radial dimension
``alpha_r = D - d`` and collapses to the simple spherical family at
``alpha_r = 1``.

Every operator evaluates at a single radius and returns an
:class:`OperatorResult` whose ``basis`` is ``"scalar"`` or ``"e_r"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .fields import AxialField, as_scalar_field
from .geometry import DimensionSpec, Symmetry
from .special import gamma, gamma_ratio

__all__ = [
    "OperatorResult",
    "div_radial",
    "grad_radial",
    "curl_radial",
    "curl_rz",
    "laplacian_scalar",
    "laplacian_vector",
    "stillinger_laplacian_radial",
    "div_generalized",
    "grad_generalized",
    "laplacian_scalar_generalized",
    "laplacian_vector_generalized",
    "generalized_coefficients",
]


@dataclass(frozen=True)
class OperatorResult:
    value: float
    basis: str = "scalar"

    def __float__(self):
        return float(self.value)


def _r(r):
    if not r > 0:
        raise DomainError(f"operators are defined for r > 0, got {r!r}")
    return float(r)


def _coef(spec):
    if spec.symmetry is Symmetry.CYLINDRICAL and spec.D <= 1.0:
        raise DomainError("cylindrical operators need 1 < D <= 3")
    return spec.radial_coefficient


def div_radial(u, spec: DimensionSpec, r) -> OperatorResult:
    """``u_r' + (c/r) u_r``."""
    r = _r(r)
    f = as_scalar_field(u)
    return OperatorResult(f.d1(r) + _coef(spec) / r * f(r))


def grad_radial(phi, spec: DimensionSpec, r) -> OperatorResult:
    """``phi'(r) e_r`` for either symmetry."""
    r = _r(r)
    return OperatorResult(as_scalar_field(phi).d1(r), "e_r")


def curl_radial(u=None) -> OperatorResult:
    """The curl of any purely radial field vanishes identically."""
    return OperatorResult(0.0, "e_r")


def curl_rz(u: AxialField, r, z) -> OperatorResult:
    """``(du_r/dz - du_z/dr)`` for an axisymmetric field ``u_r e_r + u_z e_z``.

    The basis is labelled ``e_r`` by convention; in classical
    cylindrical coordinates this component points along the azimuthal
    direction.
    """
    r = _r(r)
    return OperatorResult(u.dur_dz(r, z) - u.duz_dr(r, z), "e_r")


def laplacian_scalar(phi, spec: DimensionSpec, r) -> OperatorResult:
    """``phi'' + (c/r) phi'``, i.e. Div Grad phi."""
    r = _r(r)
    f = as_scalar_field(phi)
    return OperatorResult(f.d2(r) + _coef(spec) / r * f.d1(r))


def laplacian_vector(u, spec: DimensionSpec, r) -> OperatorResult:
    """``(u'' + (c/r) u' - (c/r^2) u) e_r``, i.e. Grad Div u."""
    r = _r(r)
    f = as_scalar_field(u)
    c = _coef(spec)
    return OperatorResult(f.d2(r) + c / r * f.d1(r) - c / (r * r) * f(r), "e_r")


def stillinger_laplacian_radial(phi, D, r) -> OperatorResult:
    """Radial part of Stillinger's Laplacian, ``r^(1-D) (r^(D-1) phi')'``."""
    r = _r(r)
    if not (math.isfinite(D) and 0.0 < D <= 3.0):
        raise DomainError(f"D must lie in (0, 3], got {D!r}")
    f = as_scalar_field(phi)
    return OperatorResult(f.d2(r) + (D - 1.0) / r * f.d1(r))


def _alpha(spec):
    a = spec.alpha_r
    if not a > 0:
        raise DomainError(f"radial dimension alpha_r must be > 0, got {a!r}")
    return a


def generalized_coefficients(spec: DimensionSpec):
    """Return ``(k_div, k_grad)``, the prefactors of the generalized Div and Grad.

    ``k_div = pi^((1-a)/2) Gamma((d+a)/2) / Gamma((d+1)/2)`` and
    ``k_grad = Gamma(a/2) / pi^(a/2)`` with ``a = alpha_r``. Both equal 1 at
    ``a = 1``.
    """
    a = _alpha(spec)
    d = spec.d
    k_div = math.pi ** ((1.0 - a) / 2.0) * gamma_ratio((d + a) / 2.0, (d + 1.0) / 2.0)
    k_grad = gamma(a / 2.0) / math.pi ** (a / 2.0)
    return k_div, k_grad


def div_generalized(u, spec: DimensionSpec, r) -> OperatorResult:
    """Divergence for boundary dimension ``d`` and radial dimension ``alpha_r``."""
    r = _r(r)
    a = _alpha(spec)
    f = as_scalar_field(u)
    k_div, _ = generalized_coefficients(spec)
    return OperatorResult(k_div * (r ** (1.0 - a) * f.d1(r) + spec.d * r ** (-a) * f(r)))


def grad_generalized(phi, spec: DimensionSpec, r) -> OperatorResult:
    r = _r(r)
    a = _alpha(spec)
    _, k_grad = generalized_coefficients(spec)
    return OperatorResult(k_grad * r ** (1.0 - a) * as_scalar_field(phi).d1(r), "e_r")


def laplacian_scalar_generalized(phi, spec: DimensionSpec, r) -> OperatorResult:
    """Closed form of Div Grad in the generalized family."""
    r = _r(r)
    a = _alpha(spec)
    d = spec.d
    f = as_scalar_field(phi)
    k_div, k_grad = generalized_coefficients(spec)
    bracket = r ** (2.0 - 2.0 * a) * f.d2(r) + (d + 1.0 - a) * r ** (1.0 - 2.0 * a) * f.d1(r)
    return OperatorResult(k_div * k_grad * bracket)


def laplacian_vector_generalized(u, spec: DimensionSpec, r) -> OperatorResult:
    """Closed form of Grad Div in the generalized family."""
    r = _r(r)
    a = _alpha(spec)
    d = spec.d
    f = as_scalar_field(u)
    k_div, k_grad = generalized_coefficients(spec)
    bracket = (
        r ** (2.0 - 2.0 * a) * f.d2(r)
        + (d + 1.0 - a) * r ** (1.0 - 2.0 * a) * f.d1(r)
        - d * a * r ** (-2.0 * a) * f(r)
    )
    return OperatorResult(k_div * k_grad * bracket, "e_r")
