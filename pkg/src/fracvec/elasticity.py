"""Static radial elasticity of fractal hollow balls, pipes and cavities.

The displacement ``u_r`` solves the vector-Laplace equation with coefficient
``c = D - 1`` (ball) or ``c = D - 2`` (pipe); the radial stress is
``sigma_rr = (2 mu + lambda) u' + lambda c u / r``. Integration constants
are always obtained by solving the two stress boundary conditions
``sigma_rr(R1) = -p1`` and ``sigma_rr(R2) = -p2`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, SingularSystemError
from .fields import RadialScalarField
from .radial_solver import BoundaryCondition, RadialGrid, SolutionProfile, solve_linear_bvp

__all__ = [
    "Geometry",
    "MaterialParams",
    "ElasticScenario",
    "ball_constants",
    "ball_displacement",
    "ball_stress",
    "pipe_constants",
    "pipe_displacement",
    "pipe_stress",
    "displacement_field",
    "radial_stress",
    "validate_against_bvp",
]


class Geometry(str, Enum):
    HOLLOW_BALL = "hollow_ball"
    PIPE = "pipe"
    CAVITY_INFINITE = "cavity_infinite"


@dataclass(frozen=True)
class MaterialParams:
    """Material constants shared by the elasticity, heat and electrostatics modules."""

    lam: float = 1.0
    mu: float = 1.0
    rho: float = 1.0
    c_p: float = 1.0
    k: float = 1.0
    eps0: float = 1.0
    rho_q: float = 1.0

    @property
    def diffusivity(self):
        return self.k / (self.c_p * self.rho)


@dataclass(frozen=True)
class ElasticScenario:
    geometry: Geometry
    D: float
    R1: float
    R2: float
    p1: float = 0.0
    p2: float = 0.0
    material: MaterialParams = field(default_factory=MaterialParams)

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        D = float(self.D)
        if not (math.isfinite(D) and 0.0 < D <= 3.0):
            raise DomainError(f"D must lie in (0, 3], got {self.D!r}")
        if not self.material.mu > 0:
            raise DomainError("shear modulus mu must be > 0")
        if self.geometry is Geometry.CAVITY_INFINITE:
            if not (self.R1 > 0 and math.isinf(self.R2)):
                raise DomainError("cavity needs R1 > 0 and R2 = inf")
        elif not (0.0 < self.R1 < self.R2 and math.isfinite(self.R2)):
            raise DomainError(f"need 0 < R1 < R2 < inf, got R1={self.R1!r}, R2={self.R2!r}")
        lam, mu = self.material.lam, self.material.mu
        if self.geometry is Geometry.PIPE:
            if 2.0 * mu + lam * (D - 1.0) == 0.0:
                raise DomainError("2 mu + lambda (D - 1) must not vanish")
        else:
            if D == 1.0:
                raise DomainError("the ball solution degenerates at D = 1")
            if 2.0 * mu + D * lam == 0.0:
                raise DomainError("2 mu + D lambda must not vanish")

    @property
    def coefficient(self):
        return self.D - 2.0 if self.geometry is Geometry.PIPE else self.D - 1.0


def _check_r(s, r):
    tol = 1e-12 * max(1.0, abs(s.R1))
    if not (s.R1 - tol <= r <= s.R2 * (1 + 1e-12) + 1e-12):
        raise DomainError(f"r={r!r} outside [{s.R1}, {s.R2}]")


def _solve2(m, rhs):
    m = np.asarray(m, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = np.max(np.abs(m[:, 0])) * np.max(np.abs(m[:, 1]))
    if scale == 0 or abs(det) <= 1e-13 * scale:
        raise SingularSystemError("boundary system is singular")
    return (
        float((rhs[0] * m[1, 1] - m[0, 1] * rhs[1]) / det),
        float((m[0, 0] * rhs[1] - rhs[0] * m[1, 0]) / det),
    )


# ---------------------------------------------------------------- basis


def _basis(s):
    """Return (phi1, phi1', phi2, phi2') for the displacement general solution."""
    D = s.D
    if s.geometry is Geometry.PIPE:
        if D == 1.0:
            return (lambda r: r, lambda r: 1.0,
                    lambda r: r * math.log(r), lambda r: math.log(r) + 1.0)
        if D == 2.0:
            return (lambda r: 1.0, lambda r: 0.0, lambda r: r, lambda r: 1.0)
        k = 2.0 - D
    else:
        k = 1.0 - D
    return (lambda r: r, lambda r: 1.0, lambda r: r ** k, lambda r: k * r ** (k - 1.0))


def _stress_row(s, r, phi, dphi):
    lam, mu = s.material.lam, s.material.mu
    return (2.0 * mu + lam) * dphi(r) + lam * s.coefficient * phi(r) / r


def _constants(s):
    f1, d1, f2, d2 = _basis(s)
    if s.geometry is Geometry.CAVITY_INFINITE:
        # far field: only the linear term carries stress at infinity
        lam, mu = s.material.lam, s.material.mu
        c1 = -s.p2 / (2.0 * mu + s.D * lam)
        c2 = (-s.p1 - c1 * _stress_row(s, s.R1, f1, d1)) / _stress_row(s, s.R1, f2, d2)
        return c1, c2
    if s.geometry is Geometry.PIPE and s.D == 2.0:
        # sigma_rr = (2 mu + lambda) C2 is uniform; C1 is a rigid mode, pinned to 0
        if s.p1 != s.p2:
            raise SingularSystemError("a D = 2 pipe carries uniform stress only; p1 must equal p2")
        return 0.0, -s.p1 / (2.0 * s.material.mu + s.material.lam)
    m = [
        [_stress_row(s, s.R1, f1, d1), _stress_row(s, s.R1, f2, d2)],
        [_stress_row(s, s.R2, f1, d1), _stress_row(s, s.R2, f2, d2)],
    ]
    return _solve2(m, (-s.p1, -s.p2))


def ball_constants(s: ElasticScenario):
    """``(C1, C2)`` of ``u = C1 r + C2 r^(1-D)`` for a hollow ball or cavity."""
    if s.geometry is Geometry.PIPE:
        raise DomainError("ball_constants needs a ball or cavity scenario")
    return _constants(s)


def pipe_constants(s: ElasticScenario):
    """Constants of the pipe displacement for the branch selected by ``D``.

    ``D = 1``: ``C1 r + C2 r ln r``; ``D = 2``: ``C1 + C2 r``; otherwise
    ``C1 r + C2 r^(2-D)``. At ``D = 2`` the stress ``(2 mu + lambda) C2`` is
    uniform: unequal pressures raise :class:`SingularSystemError`, and for
    equal pressures the rigid term ``C1`` is pinned to zero.
    """
    if s.geometry is not Geometry.PIPE:
        raise DomainError("pipe_constants needs a pipe scenario")
    return _constants(s)


def displacement_field(s: ElasticScenario) -> RadialScalarField:
    """Closed-form displacement with analytic first and second derivatives."""
    c1, c2 = _constants(s)
    f1, d1, f2, d2 = _basis(s)
    pipe = s.geometry is Geometry.PIPE
    k = 2.0 - s.D if pipe else 1.0 - s.D

    def second(r):
        if pipe and s.D == 1.0:
            return c2 / r
        if pipe and s.D == 2.0:
            return 0.0
        return c2 * k * (k - 1.0) * r ** (k - 2.0)

    return RadialScalarField(
        lambda r: c1 * f1(r) + c2 * f2(r),
        lambda r: c1 * d1(r) + c2 * d2(r),
        second,
    )


def radial_stress(s: ElasticScenario, r):
    """``sigma_rr(r)`` from the boundary-solved displacement."""
    c1, c2 = _constants(s)
    f1, d1, f2, d2 = _basis(s)
    return c1 * _stress_row(s, r, f1, d1) + c2 * _stress_row(s, r, f2, d2)


def ball_displacement(s: ElasticScenario, r):
    if s.geometry is Geometry.PIPE:
        raise DomainError("ball_displacement needs a ball or cavity scenario")
    _check_r(s, r)
    return displacement_field(s)(r)


def ball_stress(s: ElasticScenario, r):
    """Radial stress in a hollow ball (or the exterior of a cavity).

    For the hollow ball this is
    ``-(p2 R2^D - p1 R1^D)/(R2^D - R1^D) + (p2 - p1)(R1 R2)^D r^-D/(R2^D - R1^D)``;
    the cavity uses its ``R2 -> inf`` limit ``-p2 + (p2 - p1)(R1/r)^D``.
    """
    if s.geometry is Geometry.PIPE:
        raise DomainError("ball_stress needs a ball or cavity scenario")
    _check_r(s, r)
    D, R1, R2, p1, p2 = s.D, s.R1, s.R2, s.p1, s.p2
    if s.geometry is Geometry.CAVITY_INFINITE:
        return -p2 + (p2 - p1) * (R1 / r) ** D
    den = R2 ** D - R1 ** D
    return -(p2 * R2 ** D - p1 * R1 ** D) / den + (p2 - p1) * (R1 * R2) ** D * r ** (-D) / den


def pipe_displacement(s: ElasticScenario, r):
    if s.geometry is not Geometry.PIPE:
        raise DomainError("pipe_displacement needs a pipe scenario")
    _check_r(s, r)
    return displacement_field(s)(r)


def pipe_stress(s: ElasticScenario, r):
    """``(2 mu + lambda) u' + lambda (D - 2) u / r`` on the boundary-solved displacement."""
    if s.geometry is not Geometry.PIPE:
        raise DomainError("pipe_stress needs a pipe scenario")
    _check_r(s, r)
    return radial_stress(s, r)


def _robin(s, R, p):
    lam, mu = s.material.lam, s.material.mu
    return BoundaryCondition.robin(lam * s.coefficient / R, 2.0 * mu + lam, -p)


def solve_displacement_bvp(s: ElasticScenario, n_nodes) -> SolutionProfile:
    """Finite-difference displacement with Robin stress conditions at both radii."""
    if s.geometry is Geometry.CAVITY_INFINITE:
        raise DomainError("the cavity is only available in closed form")
    c = s.coefficient
    grid = RadialGrid(s.R1, s.R2, n_nodes)
    return solve_linear_bvp(c, -c, 0.0, grid, _robin(s, s.R1, s.p1), _robin(s, s.R2, s.p2),
                            meta={"scenario": s.geometry.value, "D": s.D, "field": "u_r"})


def validate_against_bvp(s: ElasticScenario, n_nodes=2000):
    """Max-norm relative deviation of the BVP displacement from the closed form."""
    if n_nodes < 100:
        raise DomainError("validation needs at least 100 nodes")
    prof = solve_displacement_bvp(s, n_nodes)
    u = displacement_field(s)
    exact = np.array([u(x) for x in prof.r])
    return float(np.max(np.abs(prof.values - exact)) / np.max(np.abs(exact)))
