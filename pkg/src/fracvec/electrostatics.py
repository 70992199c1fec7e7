"""Uniformly charged fractal infinite cylinder, ``2 < D <= 3``.

The potential is normalized by ``phi(0) = 0`` and is continuous with a
continuous derivative at the surface ``r = R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .fields import RadialScalarField
from .special import gamma

__all__ = [
    "CylinderChargeScenario",
    "potential",
    "field",
    "potential_field",
    "charge_per_length",
    "effective_permittivities",
]

# |D - 3| below this switches to the logarithmic potential
LOG_BRANCH_TOL = 1e-8


@dataclass(frozen=True)
class CylinderChargeScenario:
    R: float
    rho_q: float = 1.0
    eps0: float = 1.0
    D: float = 3.0

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"cylinder radius must be > 0, got {self.R!r}")
        if not self.eps0 > 0:
            raise DomainError(f"eps0 must be > 0, got {self.eps0!r}")
        if not (math.isfinite(self.D) and 2.0 < self.D <= 3.0):
            raise DomainError(f"charged cylinder needs 2 < D <= 3, got {self.D!r}")


def _check_r(r):
    if not r >= 0:
        raise DomainError(f"r must be >= 0, got {r!r}")


def potential(s: CylinderChargeScenario, r):
    """Electrostatic potential with ``phi(0) = 0``."""
    _check_r(r)
    D, R, rho, eps = s.D, s.R, s.rho_q, s.eps0
    if abs(D - 3.0) < LOG_BRANCH_TOL:
        if r <= R:
            return -rho * r * r / (4.0 * eps)
        return -rho * R * R / (4.0 * eps) - rho * R * R / (2.0 * eps) * math.log(r / R)
    if r <= R:
        return -rho * r * r / (2.0 * eps * (D - 1.0))
    c3 = -rho * R * R / (2.0 * eps * (D - 3.0))
    c4 = rho * R ** (D - 1.0) / (eps * (D - 1.0) * (D - 3.0))
    return c3 + c4 * r ** (3.0 - D)


def field(s: CylinderChargeScenario, r):
    """Radial electric field ``E = -phi'``; linear inside, ``r^(2-D)`` outside."""
    _check_r(r)
    D, R, rho, eps = s.D, s.R, s.rho_q, s.eps0
    if r <= R:
        return rho * r / (eps * (D - 1.0))
    return rho * R ** (D - 1.0) * r ** (2.0 - D) / (eps * (D - 1.0))


def potential_field(s: CylinderChargeScenario) -> RadialScalarField:
    """Potential as a field with analytic derivatives (``phi' = -E``)."""
    D, R, rho, eps = s.D, s.R, s.rho_q, s.eps0

    def d2(r):
        if r <= R:
            return -rho / (eps * (D - 1.0))
        return rho * R ** (D - 1.0) * (D - 2.0) * r ** (1.0 - D) / (eps * (D - 1.0))

    return RadialScalarField(lambda r: potential(s, r), lambda r: -field(s, r), d2)


def charge_per_length(s: CylinderChargeScenario):
    """``tau_D = rho_q pi^((D-1)/2) R^(D-1) / Gamma((D+1)/2)``."""
    D = s.D
    return s.rho_q * math.pi ** ((D - 1.0) / 2.0) * s.R ** (D - 1.0) / gamma((D + 1.0) / 2.0)


def effective_permittivities(s: CylinderChargeScenario):
    """Return ``(eps_in, eps_out)``.

    ``eps_in = (D - 1)/2`` writes the interior field as ``rho r / (2 eps0 eps_in)``.
    ``eps_out = (D - 1) / (2 pi^((3-D)/2) Gamma((D+1)/2))`` is the value for
    which the exterior field equals ``tau_D / (2 pi eps0 eps_out r^(D-2))``.
    """
    D = s.D
    eps_in = (D - 1.0) / 2.0
    eps_out = (D - 1.0) / (2.0 * math.pi ** ((3.0 - D) / 2.0) * gamma((D + 1.0) / 2.0))
    return eps_in, eps_out
