"""Steady and transient heat distribution in fractal media.

The steady temperature solves ``phi'' + (c/r) phi' + q/(c_p rho) = 0`` with
``c = D - 1`` (ball) or ``c = D - 2`` (cylinder). Its general solution is
``C1 + C2 h(r) + phi_p(r)`` where ``h = (r^(1-c) - 1)/(1 - c)`` (``ln r`` when ``c = 1``)
and the particular part is built from antiderivatives taken from ``r_min``;
``C1, C2`` come from the two boundary conditions. A domain starting at
``r = 0`` keeps only the regular solution (``C2 = 0``) and uses the right
boundary condition alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import DomainError, SingularSystemError
from .elasticity import MaterialParams
from .fields import RadialScalarField
from .geometry import DimensionSpec, Symmetry
from .quadrature import QuadratureConfig, integrate
from .radial_solver import (
    BoundaryCondition,
    RadialGrid,
    SolutionProfile,
    solve_heat_steady,
    solve_heat_transient,
)

__all__ = [
    "HeatScenario",
    "steady_solution",
    "steady_constant_source",
    "steady_general_source",
    "steady_profile",
    "transient",
]


@dataclass(frozen=True)
class HeatScenario:
    symmetry: Symmetry
    D: float
    r_min: float
    r_max: float
    source: Union[float, Callable[[float], float]] = 0.0
    material: MaterialParams = field(default_factory=MaterialParams)
    bc_left: BoundaryCondition = field(default_factory=lambda: BoundaryCondition.neumann(0.0))
    bc_right: BoundaryCondition = field(default_factory=lambda: BoundaryCondition.dirichlet(0.0))

    def __post_init__(self):
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
        D = float(self.D)
        lo = 1.0 if self.symmetry is Symmetry.CYLINDRICAL else 0.0
        if not (math.isfinite(D) and lo < D <= 3.0):
            raise DomainError(f"D must lie in ({lo:g}, 3] for {self.symmetry.value} symmetry, got {self.D!r}")
        if not (0.0 <= self.r_min < self.r_max and math.isfinite(self.r_max)):
            raise DomainError(f"invalid domain [{self.r_min}, {self.r_max}]")
        m = self.material
        if not (m.c_p > 0 and m.rho > 0 and m.k > 0):
            raise DomainError("c_p, rho and k must be positive")
        if self.r_min == 0.0 and not self.coefficient > 0:
            raise DomainError("a domain reaching r = 0 needs a positive radial coefficient")

    @property
    def coefficient(self):
        return self.D - 1.0 if self.symmetry is Symmetry.SPHERICAL else self.D - 2.0

    @property
    def constant_source(self):
        return isinstance(self.source, (int, float))

    @property
    def spec(self):
        # DimensionSpec only carries D and symmetry here; d is irrelevant
        d = self.D - 1.0 if self.D > 1.0 else 0.5 * self.D
        return DimensionSpec(self.D, d, self.symmetry)

    def g(self, r):
        """Source divided by ``c_p rho``."""
        q = self.source(r) if callable(self.source) else self.source
        return q / (self.material.c_p * self.material.rho)


def _homogeneous(c):
    """Non-constant homogeneous solution ``(r^(1-c) - 1)/(1 - c)``.

    The normalization keeps the boundary system well conditioned as ``c``
    approaches 1, where the function tends to ``ln r``.
    """
    k = 1.0 - c
    if k == 0.0:
        return math.log, lambda r: 1.0 / r, lambda r: -1.0 / (r * r)

    def h(r):
        return math.expm1(k * math.log(r)) / k

    return h, lambda r: r ** (-c), lambda r: -c * r ** (-c - 1.0)


def _particular_constant(s):
    g0 = s.g(0.0)
    w = g0 / (2.0 * (s.coefficient + 1.0))
    return (lambda r: -w * r * r, lambda r: -2.0 * w * r, lambda r: -2.0 * w)


def _particular_general(s, cfg):
    # phi_p(r) = -int_a^r g(x) x^c (H(r) - H(x)) dx, with H the normalized
    # homogeneous solution; valid for every c including the logarithmic case
    c = s.coefficient
    a = s.r_min
    H = _homogeneous(c)[0]

    def anti(weight, r):
        if r == a:
            return 0.0
        return integrate(lambda x: s.g(x) * weight(x), a, r, cfg).value

    def i1(r):
        return anti(lambda x: x ** c, r)

    def value(r):
        if r == a:
            return 0.0
        return anti(lambda x: x ** c * H(x), r) - H(r) * i1(r)

    def d1(r):
        if r == 0.0:
            return 0.0
        return -r ** (-c) * i1(r)

    def d2(r):
        if r == 0.0:
            # limit of c r^(-c-1) I1(r) is c g(0) / (c + 1)
            return -s.g(0.0) / (c + 1.0)
        return c * r ** (-c - 1.0) * i1(r) - s.g(r)

    return value, d1, d2


def steady_solution(s: HeatScenario, cfg=None) -> RadialScalarField:
    """Boundary-fixed steady temperature with analytic derivatives."""
    cfg = cfg or QuadratureConfig()
    if s.constant_source:
        p, dp, ddp = _particular_constant(s)
    else:
        p, dp, ddp = _particular_general(s, cfg)
    h, dh, ddh = _homogeneous(s.coefficient)

    def row(bc, R):
        return bc.a, bc.a * h(R) + bc.b * dh(R), bc.c - bc.a * p(R) - bc.b * dp(R)

    if s.r_min == 0.0:
        a1, _, rhs = row(s.bc_right, s.r_max)
        if a1 == 0:
            raise SingularSystemError("a solid domain needs a non-Neumann condition at r_max")
        c1, c2 = rhs / a1, 0.0
    else:
        a1, b1, r1 = row(s.bc_left, s.r_min)
        a2, b2, r2 = row(s.bc_right, s.r_max)
        det = a1 * b2 - a2 * b1
        if abs(det) <= 1e-13 * max(abs(a1), abs(a2), 1e-300) * max(abs(b1), abs(b2), 1e-300):
            raise SingularSystemError("steady boundary system is singular")
        c1 = (r1 * b2 - b1 * r2) / det
        c2 = (a1 * r2 - a2 * r1) / det

    return RadialScalarField(
        lambda r: c1 + c2 * (h(r) if c2 else 0.0) + p(r),
        lambda r: c2 * (dh(r) if c2 else 0.0) + dp(r),
        lambda r: c2 * (ddh(r) if c2 else 0.0) + ddp(r),
    )


def _check_r(s, r):
    if not (s.r_min <= r <= s.r_max) or r <= 0.0:
        raise DomainError(f"r={r!r} outside ({s.r_min}, {s.r_max}]")


def steady_constant_source(s: HeatScenario, r):
    """Steady temperature for a constant source ``q0``.

    ``C1 + C2 r^(2-D) - q0 r^2 / (2 D c_p rho)`` for the ball.
    """
    if not s.constant_source:
        raise DomainError("scenario source is not constant")
    _check_r(s, r)
    return steady_solution(s)(r)


def steady_general_source(s: HeatScenario, r, cfg=None):
    """Steady temperature for an arbitrary integrable source via quadrature antiderivatives."""
    _check_r(s, r)
    cfg = cfg or QuadratureConfig()
    if s.constant_source:
        s = HeatScenario(s.symmetry, s.D, s.r_min, s.r_max, (lambda x, q0=float(s.source): q0),
                         s.material, s.bc_left, s.bc_right)
    return steady_solution(s, cfg)(r)


def steady_profile(s: HeatScenario, n_nodes, cfg=None) -> SolutionProfile:
    """Closed-form steady temperature sampled on a uniform grid."""
    grid = RadialGrid(s.r_min, s.r_max, n_nodes)
    phi = steady_solution(s, cfg)
    r = grid.nodes
    vals = np.array([phi(x) for x in r])
    return SolutionProfile(grid, vals, {"scenario": "heat_steady", "D": s.D, "field": "phi"})


def transient(s: HeatScenario, t_end, n_steps, init, n_nodes=201, save_every=1, startup_steps=2):
    """Crank-Nicolson run of the scenario; returns snapshot profiles.

    ``startup_steps`` implicit start-up steps damp stiff components of a
    rough initial state; pass 0 for smooth data compatible with the
    boundary conditions.
    """
    grid = RadialGrid(s.r_min, s.r_max, n_nodes)
    if s.constant_source:
        q = s.g(0.0)
    else:
        q = lambda r, t: s.g(r)  # noqa: E731
    return solve_heat_transient(
        s.spec, s.material.diffusivity, q, grid, s.bc_left, s.bc_right, t_end, n_steps, init,
        save_every=save_every, meta={"scenario": "heat_transient", "field": "phi"},
        startup_steps=startup_steps,
    )


def discrete_steady(s: HeatScenario, n_nodes=201) -> SolutionProfile:
    """Fixed point of :func:`transient` on the same grid."""
    grid = RadialGrid(s.r_min, s.r_max, n_nodes)
    g = s.g(0.0) if s.constant_source else s.g
    return solve_heat_steady(s.spec, g, grid, s.bc_left, s.bc_right,
                             meta={"scenario": "heat_steady", "D": s.D, "field": "phi"})
