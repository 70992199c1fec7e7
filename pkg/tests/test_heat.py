import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracvec.elasticity import MaterialParams
from fracvec.errors import DomainError, SingularSystemError
from fracvec.geometry import DimensionSpec
from fracvec.heat import (
    HeatScenario,
    discrete_steady,
    steady_constant_source,
    steady_general_source,
    steady_profile,
    steady_solution,
    transient,
)
from fracvec.operators import laplacian_scalar
from fracvec.radial_solver import BoundaryCondition, RadialGrid, solve_linear_bvp

BC = BoundaryCondition


def residual(s, phi, r):
    spec = DimensionSpec(s.D, symmetry=s.symmetry) if s.D > 1 else DimensionSpec(s.D, s.D / 2)
    return laplacian_scalar(phi, spec, r).value + s.g(r)


scenarios = st.builds(
    lambda sym, D, r0, width, q, lo_kind, lo_val, hi_val, cp, rho: HeatScenario(
        sym, D if sym == "spherical" else max(D, 1.1), r0, r0 + width, q,
        MaterialParams(c_p=cp, rho=rho),
        BC.dirichlet(lo_val) if lo_kind else BC.neumann(lo_val), BC.dirichlet(hi_val)),
    st.sampled_from(["spherical", "cylindrical"]),
    st.floats(0.5, 3.0),
    st.floats(0.2, 2.0),
    st.floats(0.3, 3.0),
    st.floats(-5.0, 5.0),
    st.booleans(),
    st.floats(-2.0, 2.0),
    st.floats(-2.0, 2.0),
    st.floats(0.5, 2.0),
    st.floats(0.5, 2.0),
)


@given(scenarios)
def test_defining_equation_residual(s):
    phi = steady_solution(s)
    for r in np.linspace(s.r_min, s.r_max, 22)[1:-1]:
        assert abs(residual(s, phi, r)) <= 1e-9


@given(scenarios)
def test_bc_exactness(s):
    phi = steady_solution(s)
    for bc, r in ((s.bc_left, s.r_min), (s.bc_right, s.r_max)):
        assert abs(bc.a * phi(r) + bc.b * phi.d1(r) - bc.c) <= 1e-10 * max(1.0, abs(bc.c))


def test_constant_source_closed_form():
    D, q0 = 2.5, 3.0
    mat = MaterialParams(c_p=2.0, rho=0.5)
    s = HeatScenario("spherical", D, 1.0, 2.0, q0, mat, BC.dirichlet(1.0), BC.dirichlet(0.0))
    # C1 + C2 r^(2-D) - q0 r^2 / (2 D c_p rho), constants from the two conditions
    g = q0 / (2 * D * 1.0)
    m = np.array([[1.0, 1.0 ** (2 - D)], [1.0, 2.0 ** (2 - D)]])
    c1, c2 = np.linalg.solve(m, [1.0 + g * 1.0, 0.0 + g * 4.0])
    for r in (1.0, 1.3, 1.8, 2.0):
        assert steady_constant_source(s, r) == pytest.approx(c1 + c2 * r ** (2 - D) - g * r * r, rel=1e-12,
                                                             abs=1e-14)


def test_classical_particular_term():
    s = HeatScenario("spherical", 3.0, 0.0, 1.0, 6.0, bc_right=BC.dirichlet(0.0))
    # -q0 r^2 / (6 c_p rho) + C1, with phi(1) = 0
    for r in (0.0, 0.3, 1.0):
        assert steady_solution(s)(r) == pytest.approx(1.0 - r * r, rel=1e-14, abs=1e-15)


def test_homogeneous_matches_bvp():
    D = 2.5
    s = HeatScenario("spherical", D, 1.0, 2.0, 0.0, bc_left=BC.dirichlet(1.0), bc_right=BC.dirichlet(0.0))
    prof = solve_linear_bvp(D - 1, 0.0, 0.0, RadialGrid(1.0, 2.0, 2001), s.bc_left, s.bc_right)
    exact = np.array([steady_constant_source(s, r) for r in prof.r])
    assert np.max(np.abs(prof.values - exact)) <= 1e-6
    # homogeneous only: C1 + C2 r^(2-D)
    c2 = 1.0 / (1.0 - 2.0 ** (2 - D))
    assert steady_constant_source(s, 1.5) == pytest.approx(c2 * (1.5 ** (2 - D) - 2.0 ** (2 - D)), rel=1e-13)


def test_general_source_reduces_to_constant():
    s = HeatScenario("spherical", 2.3, 0.5, 2.0, 1.7, bc_left=BC.neumann(0.2), bc_right=BC.dirichlet(0.4))
    for r in (0.5, 0.9, 1.6, 2.0):
        assert steady_general_source(s, r) == pytest.approx(steady_constant_source(s, r), abs=1e-9)


def test_general_source_matches_bvp():
    D = 2.5
    s = HeatScenario("spherical", D, 1.0, 2.0, lambda r: r, bc_left=BC.dirichlet(0.5),
                     bc_right=BC.dirichlet(-0.2))
    prof = solve_linear_bvp(D - 1, 0.0, lambda r: -r, RadialGrid(1.0, 2.0, 2001), s.bc_left, s.bc_right)
    exact = np.array([steady_general_source(s, r) for r in prof.r])
    assert np.max(np.abs(prof.values - exact)) <= 1e-6


@pytest.mark.parametrize("sym, D", [("spherical", 2.0), ("cylindrical", 3.0)])
def test_logarithmic_branch(sym, D):
    s = HeatScenario(sym, D, 0.5, 2.0, lambda r: math.cos(r), bc_left=BC.dirichlet(1.0),
                     bc_right=BC.neumann(0.3))
    phi = steady_solution(s)
    for r in np.linspace(0.6, 1.9, 8):
        assert abs(residual(s, phi, r)) <= 1e-9
    assert phi(0.5) == pytest.approx(1.0, abs=1e-12)
    assert phi.d1(2.0) == pytest.approx(0.3, abs=1e-12)


def test_solid_domain_general_source():
    s = HeatScenario("spherical", 2.5, 0.0, 1.0, lambda r: math.exp(-r), bc_right=BC.dirichlet(0.0))
    phi = steady_solution(s)
    assert phi.d1(0.0) == 0.0
    assert laplacian_scalar(phi, DimensionSpec(2.5), 1e-3).value + s.g(1e-3) == pytest.approx(0, abs=1e-8)
    assert phi(1.0) == pytest.approx(0.0, abs=1e-13)


def test_homogeneous_term_annihilated():
    for D in (1.5, 2.5, 3.0):
        h = lambda r, D=D: r ** (2 - D)  # noqa: E731
        from fracvec.fields import power_field

        for r in (0.5, 1.0, 2.0):
            assert abs(laplacian_scalar(power_field(2 - D), DimensionSpec(D), r).value) <= 1e-12
            assert h(r) > 0


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(1.2, 3.0))
def test_superposition(q1, q2, D):
    zero = dict(bc_left=BC.dirichlet(0.0), bc_right=BC.dirichlet(0.0))
    f1 = lambda r: q1 * r  # noqa: E731
    f2 = lambda r: q2 * math.exp(-r)  # noqa: E731
    s1 = HeatScenario("spherical", D, 0.5, 1.5, f1, **zero)
    s2 = HeatScenario("spherical", D, 0.5, 1.5, f2, **zero)
    s12 = HeatScenario("spherical", D, 0.5, 1.5, lambda r: f1(r) + f2(r), **zero)
    for r in (0.7, 1.0, 1.3):
        lhs = steady_solution(s12)(r)
        assert lhs == pytest.approx(steady_solution(s1)(r) + steady_solution(s2)(r), abs=1e-9)


def test_steady_profile():
    s = HeatScenario("spherical", 2.5, 0.0, 1.0, 1.0)
    prof = steady_profile(s, 11)
    assert prof.name == "phi" and prof.values[-1] == pytest.approx(0.0, abs=1e-15)
    assert prof.values[0] == pytest.approx(1.0 / (2 * 2.5), rel=1e-14)


def test_scenario_validation():
    with pytest.raises(DomainError):
        HeatScenario("cylindrical", 1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        HeatScenario("spherical", 0.8, 0.0, 1.0)  # c < 0 cannot include r = 0
    with pytest.raises(DomainError):
        HeatScenario("spherical", 2.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        HeatScenario("spherical", 2.0, 0.0, 1.0, material=MaterialParams(k=0.0))
    s = HeatScenario("spherical", 2.5, 0.5, 1.0, lambda r: r)
    with pytest.raises(DomainError):
        steady_constant_source(s, 0.7)
    with pytest.raises(DomainError):
        steady_general_source(s, 1.5)
    with pytest.raises(SingularSystemError):
        steady_solution(HeatScenario("spherical", 2.5, 0.0, 1.0, 1.0, bc_right=BC.neumann(0.0)))
    with pytest.raises(SingularSystemError):
        steady_solution(HeatScenario("spherical", 2.5, 0.5, 1.0, 0.0, bc_left=BC.neumann(0.0),
                                     bc_right=BC.neumann(0.0)))


# ---------------------------------------------------------------- transient


def test_transient_reaches_steady():
    s = HeatScenario("spherical", 2.5, 0.0, 1.0, 2.0, MaterialParams(k=0.5))
    a = s.material.diffusivity
    snaps = transient(s, 50 / a, 400, 0.0, n_nodes=401, save_every=400)
    phi = steady_solution(s)
    assert np.max(np.abs(snaps[-1].values - np.array([phi(x) for x in snaps[-1].r]))) <= 1e-5


def test_transient_fixed_point():
    s = HeatScenario("cylindrical", 2.4, 0.2, 1.0, lambda r: 1 + r, bc_left=BC.neumann(0.0),
                     bc_right=BC.dirichlet(0.5))
    eq = discrete_steady(s, 81)
    steps = 40
    snaps = transient(s, 2.0, steps, eq, n_nodes=81)
    for p in snaps:
        assert np.max(np.abs(p.values - eq.values)) <= 1e-10 * steps


def _series(r, t):
    out = np.zeros_like(r)
    for n, amp in ((1, 1.0), (2, 0.5)):
        k = n * math.pi
        safe = np.where(r > 0, r, 1.0)
        out += amp * math.exp(-k * k * t) * np.where(r > 0, np.sin(k * r) / safe, k)
    return out


def test_classical_series_benchmark():
    # unit ball, zero boundary temperature: phi = sum A_n exp(-(n pi)^2 t) sin(n pi r)/r
    s = HeatScenario("spherical", 3.0, 0.0, 1.0, 0.0)
    init = lambda r: float(_series(np.array([r]), 0.0)[0])  # noqa: E731
    snaps = transient(s, 0.09, 540, init, n_nodes=1201, save_every=180, startup_steps=0)
    assert len(snaps) == 4
    for p in snaps[1:]:
        assert np.max(np.abs(p.values - _series(p.r, p.meta["t"]))) <= 1e-6


def test_transient_snapshots_metadata():
    s = HeatScenario("spherical", 2.5, 0.0, 1.0, 1.0)
    snaps = transient(s, 1.0, 10, 0.0, n_nodes=11, save_every=5)
    assert [p.meta["t"] for p in snaps] == pytest.approx([0.0, 0.5, 1.0])
    assert all(p.meta["scenario"] == "heat_transient" for p in snaps)


@pytest.mark.parametrize("source", [1.5, lambda r: 1 + r * r])
def test_continuous_across_logarithmic_branch(source):
    def solve(D):
        s = HeatScenario("spherical", D, 1.25, 1.75, source, bc_left=BC.dirichlet(0.0),
                         bc_right=BC.dirichlet(2.0))
        return steady_solution(s)

    exact = solve(2.0)
    for D in (2.0 - 1e-9, 2.0 + 1e-7, 2.00001):
        phi = solve(D)
        for r in (1.25, 1.4, 1.6, 1.75):
            assert phi(r) == pytest.approx(exact(r), abs=2e-5 * abs(D - 2.0) / 1e-5 + 1e-12)
