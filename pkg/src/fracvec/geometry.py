"""Measures, radial integration and flux checks in non-integer dimension D.

A rotationally covariant integrand f(|r|) is integrated over D-dimensional
space by reducing it to a one-dimensional radial integral weighted with the
unit-sphere area ``S_{D-1} = 2 pi^(D/2) / Gamma(D/2)``.

Translation invariance of the D-dimensional integral is not tested here:
purely radial evaluators have no representation of a shifted argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError, PoleError
from .fields import RadialScalarField, as_scalar_field
from .quadrature import QuadratureConfig, integrate
from .special import gamma, gamma_ratio

__all__ = [
    "Symmetry",
    "DimensionSpec",
    "RadialInterval",
    "QuadratureConfig",
    "sphere_area",
    "surface_area",
    "ball_volume",
    "shell_volume",
    "ball_mass",
    "integrate_radial",
    "closed_form_power_integral",
    "closed_form_rational_integral",
    "DimRegValue",
    "angular_sine_integral",
    "flux_across_sphere",
    "gauss_residual",
]


class Symmetry(str, Enum):
    SPHERICAL = "spherical"
    CYLINDRICAL = "cylindrical"


@dataclass(frozen=True)
class DimensionSpec:
    """Bulk dimension ``D``, boundary dimension ``d`` and symmetry kind.

    ``d`` defaults to ``D - 1``; the radial dimension is ``alpha_r = D - d``.
    """

    D: float
    d: Optional[float] = None
    symmetry: Symmetry = Symmetry.SPHERICAL

    def __post_init__(self):
        D = float(self.D)
        if not (math.isfinite(D) and 0.0 < D <= 3.0):
            raise DomainError(f"bulk dimension D must lie in (0, 3], got {self.D!r}")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
        if self.d is None:
            if D <= 1.0:
                raise DomainError("default boundary dimension d = D - 1 requires D > 1")
            object.__setattr__(self, "d", D - 1.0)
        d = float(self.d)
        if not (math.isfinite(d) and 0.0 < d < D):
            raise DomainError(f"boundary dimension d must lie in (0, D), got {self.d!r}")
        object.__setattr__(self, "d", d)

    @property
    def alpha_r(self):
        return self.D - self.d

    @property
    def radial_coefficient(self):
        """Coefficient c in u' + (c/r) u: D - 1 (spherical) or D - 2 (cylindrical)."""
        return self.D - 1.0 if self.symmetry is Symmetry.SPHERICAL else self.D - 2.0


@dataclass(frozen=True)
class RadialInterval:
    r_min: float = 0.0
    r_max: float = math.inf

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and self.r_min >= 0.0):
            raise DomainError(f"r_min must be finite and >= 0, got {self.r_min!r}")
        if math.isnan(self.r_max) or not self.r_max > self.r_min:
            raise DomainError(f"r_max must exceed r_min, got [{self.r_min}, {self.r_max}]")

    @property
    def infinite(self):
        return math.isinf(self.r_max)


def _check_D(D):
    D = float(D)
    if not (math.isfinite(D) and 0.0 < D <= 3.0):
        raise DomainError(f"dimension D must lie in (0, 3], got {D!r}")
    return D


def sphere_area(D):
    """Area of the unit (D-1)-sphere, ``2 pi^(D/2) / Gamma(D/2)``."""
    D = _check_D(D)
    return 2.0 * math.pi ** (D / 2.0) / gamma(D / 2.0)


def surface_area(d):
    """Area of a unit surface of dimension ``d``: ``2 pi^((d+1)/2) / Gamma((d+1)/2)``."""
    d = float(d)
    if not (math.isfinite(d) and d > -1.0):
        raise DomainError(f"surface dimension must be > -1, got {d!r}")
    return 2.0 * math.pi ** ((d + 1.0) / 2.0) / gamma((d + 1.0) / 2.0)


def ball_volume(D, R):
    """Volume ``pi^(D/2) R^D / Gamma(D/2 + 1)`` of the D-ball of radius R."""
    D = _check_D(D)
    if not R >= 0:
        raise DomainError(f"radius must be >= 0, got {R!r}")
    return math.pi ** (D / 2.0) * R ** D / gamma(D / 2.0 + 1.0)


def shell_volume(D, R1, R2):
    """Volume of the hollow ball ``R1 <= r <= R2``."""
    if not (0.0 <= R1 < R2):
        raise DomainError(f"shell requires 0 <= R1 < R2, got R1={R1!r}, R2={R2!r}")
    D = _check_D(D)
    return math.pi ** (D / 2.0) * (R2 ** D - R1 ** D) / gamma(D / 2.0 + 1.0)


def ball_mass(D, R, rho0):
    """Mass of a homogeneous D-ball; scales as ``M(lam R) = lam^D M(R)``."""
    if not rho0 >= 0:
        raise DomainError(f"density must be >= 0, got {rho0!r}")
    return rho0 * ball_volume(D, R)


def integrate_radial(f, D, interval=None, cfg=None):
    """D-dimensional integral of a radial function over a (possibly infinite) shell.

    Computes ``S_{D-1} * int r^(D-1) f(r) dr`` with adaptive Gauss-Kronrod
    quadrature. An infinite upper bound requires ``f`` to decay faster than
    ``r^(-D)``.
    """
    D = _check_D(D)
    interval = interval or RadialInterval()
    fn = f.eval if isinstance(f, RadialScalarField) else as_scalar_field(f).eval
    res = integrate(lambda r: r ** (D - 1.0) * fn(r), interval.r_min, interval.r_max, cfg)
    return sphere_area(D) * res.value


def _gamma_signed(x):
    """Gamma for real non-pole arguments; negatives via the reflection formula."""
    if x > 0:
        return gamma(x)
    if x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))


def closed_form_power_integral(D, alpha, beta, a):
    """Closed form of ``int d^D r  r^(2 alpha) / (r^2 + a^2)^beta``.

    Convergent when ``alpha + D/2 > 0`` and ``beta - alpha - D/2 > 0``;
    elsewhere the value is the analytic continuation in D.
    """
    D = _check_D(D)
    if not a > 0:
        raise DomainError(f"a must be > 0, got {a!r}")
    g1 = _gamma_signed(alpha + D / 2.0)
    g2 = _gamma_signed(beta - alpha - D / 2.0)
    g3 = _gamma_signed(beta)
    g4 = _gamma_signed(D / 2.0)
    return g1 * g2 / (g4 * g3) * math.pi ** (D / 2.0) * a ** (D + 2.0 * alpha - 2.0 * beta)


class DimRegValue(float):
    """A float assigned by dimensional regularization.

    ``quadrature_comparable`` is always False: the defining integral diverges
    classically, so the value must not be checked against quadrature.
    """

    quadrature_comparable = False


def closed_form_rational_integral(D, a, b):
    """Dimensionally regularized ``int d^D r (r^2 + a)/(r^2 + b)``.

    Returns ``(pi b)^(D/2) (a/b - 1) Gamma(1 - D/2)`` as a :class:`DimRegValue`.
    ``D = 2`` is a pole of ``Gamma(1 - D/2)``.
    """
    D = _check_D(D)
    if not b > 0:
        raise DomainError(f"b must be > 0, got {b!r}")
    g = _gamma_signed(1.0 - D / 2.0)
    return DimRegValue((math.pi * b) ** (D / 2.0) * (a / b - 1.0) * g)


def angular_sine_integral(D):
    """``int_0^pi sin^(D-2)(t) dt = sqrt(pi) Gamma((D-1)/2) / Gamma(D/2)`` for D > 1."""
    D = _check_D(D)
    if D <= 1.0:
        raise DomainError("the angular integral diverges for D <= 1")
    return math.sqrt(math.pi) * gamma_ratio((D - 1.0) / 2.0, D / 2.0)


def flux_across_sphere(u, d, r):
    """Flux of ``u_r(r) e_r`` through a sphere of dimension ``d`` and radius ``r``."""
    if not r > 0:
        raise DomainError(f"radius must be > 0, got {r!r}")
    return surface_area(d) * as_scalar_field(u)(r) * r ** d


def gauss_residual(u, spec, R1, R2, cfg=None):
    """Relative mismatch between the volume integral of Div u and the boundary flux.

    The denominator is floored by the larger of the two boundary fluxes, so
    divergence-free fields (zero net flux) yield a meaningful residual.
    """
    from .operators import div_radial  # local import avoids a cycle

    if spec.symmetry is not Symmetry.SPHERICAL or abs(spec.d - (spec.D - 1.0)) > 1e-14:
        raise DomainError("the Gauss check needs spherical symmetry with d = D - 1")
    if not (0.0 < R1 < R2):
        raise DomainError(f"need 0 < R1 < R2, got R1={R1!r}, R2={R2!r}")
    cfg = cfg or QuadratureConfig()
    field = as_scalar_field(u)
    lhs = integrate_radial(
        lambda r: float(div_radial(field, spec, r)), spec.D, RadialInterval(R1, R2), cfg
    )
    f1 = flux_across_sphere(field, spec.d, R1)
    f2 = flux_across_sphere(field, spec.d, R2)
    net = f2 - f1
    floor = max(abs(f1), abs(f2), 1e-300)
    return abs(lhs - net) / max(abs(net), floor)
