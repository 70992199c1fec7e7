"""Finite-difference solvers for radial boundary-value and heat problems.

``solve_linear_bvp`` discretizes ``u'' + (A/r) u' + (B/r^2) u = f(r)`` with
second-order central differences; Robin conditions ``a u + b u' = c`` are
folded in by eliminating a ghost node. ``solve_heat_transient`` advances
``phi_t = a (phi'' + (c/r) phi' + g)`` with Crank-Nicolson on a
node-centred finite-volume grid, so the D-weighted content
``sum V_i phi_i`` is conserved exactly under insulated boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InstabilityError, NumericalError, SingularSystemError
from .geometry import DimensionSpec, Symmetry, surface_area
from .fields import as_scalar_field

__all__ = [
    "RadialGrid",
    "BoundaryCondition",
    "TridiagonalSystem",
    "SolutionProfile",
    "thomas_solve",
    "solve_linear_bvp",
    "heat_operator",
    "solve_heat_steady",
    "solve_heat_transient",
    "fd_derivative",
    "weighted_content",
]

INSTABILITY_SENTINEL = 1e12


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    n_nodes: int

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and self.r_min >= 0.0):
            raise DomainError(f"r_min must be finite and >= 0, got {self.r_min!r}")
        if not (math.isfinite(self.r_max) and self.r_max > self.r_min):
            raise DomainError(f"r_max must be finite and > r_min, got {self.r_max!r}")
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 3:
            raise DomainError(f"n_nodes must be an integer >= 3, got {self.n_nodes!r}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))

    @property
    def h(self):
        return (self.r_max - self.r_min) / (self.n_nodes - 1)

    @property
    def nodes(self):
        return np.linspace(self.r_min, self.r_max, self.n_nodes)


@dataclass(frozen=True)
class BoundaryCondition:
    """``a u + b u' = c`` at one end of the grid."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DomainError("boundary condition needs (a, b) != (0, 0)")

    @classmethod
    def dirichlet(cls, value):
        return cls(1.0, 0.0, value)

    @classmethod
    def neumann(cls, slope):
        return cls(0.0, 1.0, slope)

    @classmethod
    def robin(cls, a, b, c):
        return cls(a, b, c)

    @property
    def kind(self):
        if self.b == 0:
            return "dirichlet"
        if self.a == 0:
            return "neumann"
        return "robin"


@dataclass
class TridiagonalSystem:
    """Rows ``sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]``.

    ``sub[0]`` and ``sup[-1]`` are ignored.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if not (len(self.sub) == len(self.sup) == len(self.rhs) == n):
            raise DomainError("tridiagonal arrays must have equal length")

    def solve(self):
        return thomas_solve(self.sub, self.diag, self.sup, self.rhs)

    def matvec(self, x):
        y = self.diag * x
        y[1:] += self.sub[1:] * x[:-1]
        y[:-1] += self.sup[:-1] * x[1:]
        return y


def thomas_solve(sub, diag, sup, rhs):
    """Thomas algorithm; raises :class:`SingularSystemError` on a vanishing pivot."""
    n = len(diag)
    cp = np.empty(n)
    dp = np.empty(n)
    scale = max(float(np.max(np.abs(diag))), 1e-300)
    piv = diag[0]
    if abs(piv) <= 1e-13 * scale:
        raise SingularSystemError("zero pivot in row 0")
    cp[0] = sup[0] / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - sub[i] * cp[i - 1]
        if abs(piv) <= 1e-13 * scale:
            raise SingularSystemError(f"zero pivot in row {i}")
        cp[i] = sup[i] / piv if i < n - 1 else 0.0
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / piv
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@dataclass(frozen=True)
class SolutionProfile:
    grid: RadialGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_nodes,):
            raise DomainError(f"profile needs {self.grid.n_nodes} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise NumericalError("profile contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def r(self):
        return self.grid.nodes

    @property
    def name(self):
        return self.meta.get("field", "value")


def _sample(f, r):
    if isinstance(f, (int, float)):
        return np.full(len(r), float(f))
    f = as_scalar_field(f)
    with np.errstate(all="ignore"):
        vals = np.array([f(float(x)) for x in r], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("right-hand side is not finite on the grid")
    return vals


def solve_linear_bvp(A_coeff, B_coeff, f, grid: RadialGrid, bc_left: BoundaryCondition,
                     bc_right: BoundaryCondition, meta=None) -> SolutionProfile:
    """Solve ``u'' + (A/r) u' + (B/r^2) u = f(r)`` on a uniform grid with ``r_min > 0``."""
    if not grid.r_min > 0:
        raise DomainError("solve_linear_bvp needs r_min > 0")
    if B_coeff == 0 and bc_left.a == 0 and bc_right.a == 0:
        raise SingularSystemError("pure Neumann problem with B = 0 has no unique solution")
    r = grid.nodes
    h = grid.h
    rhs = _sample(f, r)
    lo = 1.0 / h ** 2 - A_coeff / (2.0 * h * r)
    di = -2.0 / h ** 2 + B_coeff / r ** 2
    up = 1.0 / h ** 2 + A_coeff / (2.0 * h * r)
    lo, di, up = lo.copy(), di.copy(), up.copy()

    if bc_left.b == 0:
        lo[0], di[0], up[0], rhs[0] = 0.0, 1.0, 0.0, bc_left.c / bc_left.a
    else:
        # ghost node: u_{-1} = u_1 - 2h (c - a u_0) / b
        a, b, c = bc_left.a, bc_left.b, bc_left.c
        di[0] += lo[0] * 2.0 * h * a / b
        up[0] += lo[0]
        rhs[0] += lo[0] * 2.0 * h * c / b
        lo[0] = 0.0
    if bc_right.b == 0:
        lo[-1], di[-1], up[-1], rhs[-1] = 0.0, 1.0, 0.0, bc_right.c / bc_right.a
    else:
        # ghost node: u_N = u_{N-2} + 2h (c - a u_{N-1}) / b
        a, b, c = bc_right.a, bc_right.b, bc_right.c
        lo[-1] += up[-1]
        di[-1] -= up[-1] * 2.0 * h * a / b
        rhs[-1] -= up[-1] * 2.0 * h * c / b
        up[-1] = 0.0
    u = thomas_solve(lo, di, up, rhs)
    if not np.all(np.isfinite(u)):
        raise NumericalError("BVP solution is not finite")
    return SolutionProfile(grid, u, dict(meta or {}))


def _cell_volumes(r, c):
    """Integral of ``s^c`` over each node's control volume."""
    h = r[1] - r[0]
    edges = np.concatenate([[r[0]], 0.5 * (r[:-1] + r[1:]), [r[-1]]])
    if abs(c + 1.0) < 1e-14:
        prim = np.log(edges)
    else:
        prim = edges ** (c + 1.0) / (c + 1.0)
    vol = np.diff(prim)
    if not np.all(vol > 0):
        raise NumericalError("degenerate control volume")
    return vol, edges[1:-1] ** c / h


def heat_operator(c, grid: RadialGrid, bc_left: BoundaryCondition, bc_right: BoundaryCondition):
    """Assemble ``L phi + s0`` approximating ``phi'' + (c/r) phi'`` with boundary terms.

    Returns ``(sub, diag, sup, s0, dirichlet_mask, volumes)``. Rows of
    Dirichlet nodes are zero in ``L`` and flagged in the mask. A grid
    starting at ``r = 0`` imposes the symmetry condition there; the zero-radius
    cell then reproduces the L'Hopital row ``(1 + c) phi''``.
    """
    r = grid.nodes
    n = grid.n_nodes
    if grid.r_min == 0.0 and not c > 0:
        raise DomainError("r_min = 0 requires a positive radial coefficient")
    vol, w = _cell_volumes(r, c)  # w[i]: face weight between node i and i+1
    sub = np.zeros(n)
    sup = np.zeros(n)
    diag = np.zeros(n)
    s0 = np.zeros(n)
    sup[:-1] += w
    diag[:-1] -= w
    sub[1:] += w
    diag[1:] -= w
    mask = np.zeros(n, dtype=bool)

    # boundary flux r^c phi' with phi' = (c_bc - a phi) / b
    if grid.r_min > 0.0:
        a, b, cc = bc_left.a, bc_left.b, bc_left.c
        if b == 0:
            mask[0] = True
        else:
            wl = r[0] ** c
            # left face flux enters with a minus sign
            diag[0] += wl * a / b
            s0[0] -= wl * cc / b
    a, b, cc = bc_right.a, bc_right.b, bc_right.c
    if b == 0:
        mask[-1] = True
    else:
        wr = r[-1] ** c
        diag[-1] -= wr * a / b
        s0[-1] += wr * cc / b

    sub /= vol
    diag /= vol
    sup /= vol
    s0 /= vol
    sub[mask] = diag[mask] = sup[mask] = s0[mask] = 0.0
    return sub, diag, sup, s0, mask, vol


def _dirichlet_values(grid, bc_left, bc_right, mask):
    vals = np.zeros(grid.n_nodes)
    if mask[0]:
        vals[0] = bc_left.c / bc_left.a
    if mask[-1]:
        vals[-1] = bc_right.c / bc_right.a
    return vals


def _coefficient(spec):
    if spec.symmetry is Symmetry.CYLINDRICAL:
        return spec.D - 2.0
    return spec.D - 1.0


def _source_vector(q, r, t):
    if q is None:
        return np.zeros(len(r))
    if isinstance(q, (int, float)):
        return np.full(len(r), float(q))
    with np.errstate(all="ignore"):
        vals = np.array([q(float(x), t) for x in r], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalError(f"source not finite at t={t}")
    return vals


def solve_heat_steady(spec: DimensionSpec, g, grid: RadialGrid, bc_left, bc_right,
                      meta=None) -> SolutionProfile:
    """Discrete steady state ``phi'' + (c/r) phi' + g(r) = 0`` of the transient scheme.

    This is the exact fixed point of :func:`solve_heat_transient` for a
    time-independent source.
    """
    c = _coefficient(spec)
    sub, diag, sup, s0, mask, _ = heat_operator(c, grid, bc_left, bc_right)
    r = grid.nodes
    if g is not None and not isinstance(g, (int, float)):
        g_static = g
        g = lambda x, t: g_static(x)
    gv = _source_vector(g, r, 0.0)
    rhs = -(s0 + gv)
    rhs[mask] = _dirichlet_values(grid, bc_left, bc_right, mask)[mask]
    diag = diag.copy()
    diag[mask] = 1.0
    phi = thomas_solve(sub, diag, sup, rhs)
    return SolutionProfile(grid, phi, dict(meta or {}))


def solve_heat_transient(spec: DimensionSpec, a_diff, q, grid: RadialGrid, bc_left, bc_right,
                         t_end, n_steps, init, save_every=1, meta=None, startup_steps=2):
    """Crank-Nicolson integration of ``phi_t = a (phi'' + (c/r) phi' + q(r, t))``.

    ``q`` is the source already divided by ``c_p rho`` (``None``, a constant,
    or a callable ``q(r, t)``); ``c = D - 1`` for spherical and ``D - 2`` for
    cylindrical symmetry. The first ``startup_steps`` steps are each taken
    as two backward-Euler half steps (Rannacher start-up), which damps the
    stiff modes excited by initial data that disagree with the boundary
    values; plain Crank-Nicolson would carry them with amplification near -1.
    Returns the list of snapshots (every ``save_every`` steps plus the initial
    and final states), each tagged with ``meta['t']``.
    """
    if not (a_diff > 0 and math.isfinite(a_diff)):
        raise DomainError(f"diffusivity must be > 0, got {a_diff!r}")
    if int(n_steps) < 1:
        raise DomainError("n_steps must be >= 1")
    if not t_end > 0:
        raise DomainError("t_end must be > 0")
    n_steps = int(n_steps)
    c = _coefficient(spec)
    r = grid.nodes
    sub, diag, sup, s0, mask, _ = heat_operator(c, grid, bc_left, bc_right)
    dt = t_end / n_steps
    k = 0.5 * dt * a_diff
    # left: I - k L ; right: I + k L
    l_sub, l_diag, l_sup = -k * sub, 1.0 - k * diag, -k * sup
    l_diag[mask] = 1.0
    fixed = _dirichlet_values(grid, bc_left, bc_right, mask)

    if isinstance(init, SolutionProfile):
        phi = np.array(init.values, dtype=float)
    elif callable(init):
        phi = np.array([init(float(x)) for x in r], dtype=float)
    else:
        phi = np.full(grid.n_nodes, float(init))
    if phi.shape != (grid.n_nodes,):
        raise DomainError("initial profile does not match the grid")
    phi[mask] = fixed[mask]

    base_meta = dict(meta or {})
    base_meta.setdefault("D", spec.D)
    snaps = [SolutionProfile(grid, phi.copy(), {**base_meta, "t": 0.0})]
    static = q is None or isinstance(q, (int, float))
    q_old = _source_vector(q, r, 0.0)
    for step in range(1, n_steps + 1):
        t_new = step * dt
        q_new = q_old if static else _source_vector(q, r, t_new)
        if step <= startup_steps:
            # two implicit Euler half steps of size dt/2 share the CN matrix
            for t_half in (t_new - 0.5 * dt, t_new):
                q_half = q_old if static else _source_vector(q, r, t_half)
                rhs = phi + k * (s0 + q_half)
                rhs[mask] = fixed[mask]
                phi = thomas_solve(l_sub, l_diag, l_sup, rhs)
        else:
            lphi = diag * phi
            lphi[1:] += sub[1:] * phi[:-1]
            lphi[:-1] += sup[:-1] * phi[1:]
            rhs = phi + k * lphi + dt * a_diff * s0 + k * (q_old + q_new)
            rhs[mask] = fixed[mask]
            phi = thomas_solve(l_sub, l_diag, l_sup, rhs)
        if not np.all(np.isfinite(phi)) or np.max(np.abs(phi)) > INSTABILITY_SENTINEL:
            raise InstabilityError(f"solution exceeded {INSTABILITY_SENTINEL:g} at step {step}")
        q_old = q_new
        if step % save_every == 0 or step == n_steps:
            snaps.append(SolutionProfile(grid, phi.copy(), {**base_meta, "t": t_new}))
    return snaps


def weighted_content(profile: SolutionProfile, spec: DimensionSpec):
    """Finite-volume value of the D-weighted integral ``S * sum V_i phi_i``.

    This is the quantity conserved exactly by the transient scheme under
    insulated boundaries.
    """
    c = _coefficient(spec)
    vol, _ = _cell_volumes(profile.grid.nodes, c)
    return surface_area(c) * math.fsum(vol * profile.values)


def fd_derivative(profile: SolutionProfile, order=1) -> SolutionProfile:
    """First or second derivative of a sampled profile.

    Central differences in the interior and second-order one-sided stencils
    at both edges.
    """
    v = profile.values
    h = profile.grid.h
    n = profile.grid.n_nodes
    if order == 1:
        out = np.gradient(v, h, edge_order=2)
    elif order == 2:
        if n < 5:
            raise DomainError("second derivative needs at least 5 nodes")
        out = np.empty(n)
        out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h ** 2
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h ** 2
        out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h ** 2
    else:
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    meta = dict(profile.meta)
    meta["field"] = f"d{order}_{profile.name}"
    return SolutionProfile(profile.grid, out, meta)
