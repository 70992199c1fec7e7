"""Command-line front end.

A run reads one JSON scenario document (file or stdin), applies flag
overrides, validates every key, computes all outputs and only then writes
files. Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .elasticity import (
    ElasticScenario,
    Geometry,
    MaterialParams,
    displacement_field,
    radial_stress,
    validate_against_bvp,
)
from .electrostatics import (
    CylinderChargeScenario,
    charge_per_length,
    effective_permittivities,
    field as electric_field,
    potential,
)
from .errors import DomainError, FracvecError, NumericalError
from .expr import axial_field, parse_expression
from .geometry import DimensionSpec, RadialInterval, Symmetry, gauss_residual, integrate_radial
from .heat import HeatScenario, steady_solution, transient
from .operators import (
    curl_radial,
    curl_rz,
    div_generalized,
    div_radial,
    grad_generalized,
    grad_radial,
    laplacian_scalar,
    laplacian_scalar_generalized,
    laplacian_vector,
    laplacian_vector_generalized,
    stillinger_laplacian_radial,
)
from .quadrature import QuadratureConfig
from .radial_solver import BoundaryCondition, RadialGrid, SolutionProfile

__all__ = ["ConfigError", "ScenarioConfig", "RunResult", "load_config", "execute", "run",
           "emit_csv", "emit_json", "main", "KINDS"]

log = logging.getLogger("fracvec")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

KINDS = ("elasticity_ball", "elasticity_pipe", "heat_steady", "heat_transient",
         "electro_cylinder", "ops_eval", "integrate", "verify")

DEFAULT_NODES = 200


class ConfigError(DomainError):
    """Missing or malformed scenario key."""


@dataclass
class ScenarioConfig:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")

    # typed accessors -------------------------------------------------------

    def has(self, key):
        return self.params.get(key) is not None

    def number(self, key, default=None, *, positive=False, finite=True):
        v = self.params.get(key, default)
        if v is None:
            raise ConfigError(f"{self.kind}: missing required key {key!r}")
        if isinstance(v, str) and v.lower() in ("inf", "infinity"):
            v = math.inf
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{self.kind}: {key!r} must be a number, got {v!r}")
        v = float(v)
        if math.isnan(v) or (finite and not math.isfinite(v)):
            raise ConfigError(f"{self.kind}: {key!r} must be finite, got {v!r}")
        if positive and not v > 0:
            raise ConfigError(f"{self.kind}: {key!r} must be > 0, got {v!r}")
        return v

    def integer(self, key, default=None, minimum=1):
        v = self.params.get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
            raise ConfigError(f"{self.kind}: {key!r} must be an integer, got {v!r}")
        if v < minimum:
            raise ConfigError(f"{self.kind}: {key!r} must be >= {minimum}, got {v!r}")
        return int(v)

    def pair(self, key, *, allow_inf=False):
        v = self.params.get(key)
        if not isinstance(v, (list, tuple)) or len(v) != 2:
            raise ConfigError(f"{self.kind}: {key!r} must be a two-element list, got {v!r}")
        out = []
        for i, x in enumerate(v):
            if isinstance(x, str) and x.lower() in ("inf", "infinity") and allow_inf:
                x = math.inf
            if isinstance(x, bool) or not isinstance(x, (int, float)) or math.isnan(x):
                raise ConfigError(f"{self.kind}: {key}[{i}] must be a number, got {x!r}")
            if math.isinf(x) and not (allow_inf and i == 1):
                raise ConfigError(f"{self.kind}: {key}[{i}] must be finite")
            out.append(float(x))
        return tuple(out)

    def text(self, key, default=None, choices=None):
        v = self.params.get(key, default)
        if not isinstance(v, str):
            raise ConfigError(f"{self.kind}: {key!r} must be a string, got {v!r}")
        if choices is not None and v not in choices:
            raise ConfigError(f"{self.kind}: {key!r} must be one of {', '.join(choices)}, got {v!r}")
        return v

    def expression(self, key):
        return parse_expression(self.text(key))

    def symmetry(self):
        return Symmetry(self.text("symmetry", "spherical", ("spherical", "cylindrical")))

    def material(self):
        m = self.params.get("material", {})
        if not isinstance(m, dict):
            raise ConfigError(f"{self.kind}: 'material' must be an object")
        known = MaterialParams.__dataclass_fields__
        bad = sorted(set(m) - set(known))
        if bad:
            raise ConfigError(f"{self.kind}: unknown material keys {bad}")
        for k, v in m.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{self.kind}: material.{k} must be a finite number")
        return MaterialParams(**{k: float(v) for k, v in m.items()})

    def boundary(self, key, default):
        v = self.params.get(key)
        if v is None:
            return default
        if not isinstance(v, dict):
            raise ConfigError(f"{self.kind}: {key!r} must be an object")
        kind = v.get("type", "robin")
        try:
            if kind == "dirichlet":
                return BoundaryCondition.dirichlet(float(v["value"]))
            if kind == "neumann":
                return BoundaryCondition.neumann(float(v["value"]))
            if kind == "robin":
                return BoundaryCondition.robin(float(v["a"]), float(v["b"]), float(v["c"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{self.kind}: malformed boundary condition {key!r}: {exc}") from None
        raise ConfigError(f"{self.kind}: boundary type must be dirichlet, neumann or robin")


@dataclass
class RunResult:
    """Profiles grouped into output tables plus lines for standard output."""

    tables: list = field(default_factory=list)  # (stem, [SolutionProfile, ...])
    lines: list = field(default_factory=list)
    status: int = EXIT_OK


# ---------------------------------------------------------------- emission


def _check_table(profiles):
    if isinstance(profiles, SolutionProfile):
        profiles = [profiles]
    if not profiles:
        raise DomainError("nothing to emit")
    r = profiles[0].r
    for p in profiles[1:]:
        if p.grid != profiles[0].grid:
            raise DomainError("profiles in one table must share a grid")
    return list(profiles), r


def emit_csv(profiles, path):
    """Write ``r,<field>...`` rows with 17 significant digits."""
    profiles, r = _check_table(profiles)
    cols = [r] + [p.values for p in profiles]
    lines = [",".join(["r"] + [p.name for p in profiles])]
    for row in zip(*cols):
        lines.append(",".join("%.17g" % x for x in row))
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_json(profiles, path):
    profiles, r = _check_table(profiles)
    meta = profiles[0].meta
    sym = meta.get("symmetry")
    doc = {
        "meta": {"scenario": meta.get("scenario"), "D": meta.get("D"), "d": meta.get("d"),
                 "symmetry": sym.value if isinstance(sym, Symmetry) else sym},
        "columns": ["r"] + [p.name for p in profiles],
        "rows": [[float(x) for x in row] for row in zip(r, *[p.values for p in profiles])],
    }
    if "t" in meta:
        doc["meta"]["t"] = meta["t"]
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


# ---------------------------------------------------------------- kinds


def _profile(grid, values, name, meta):
    m = dict(meta)
    m["field"] = name
    return SolutionProfile(grid, np.asarray(values, dtype=float), m)


def _elastic(cfg: ScenarioConfig, pipe):
    D = cfg.number("D")
    mat = cfg.material()
    p1, p2 = cfg.pair("p") if cfg.has("p") else (cfg.number("p1", 0.0), cfg.number("p2", 0.0))
    geometry = Geometry.PIPE if pipe else Geometry(cfg.text("geometry", "hollow_ball",
                                                            ("hollow_ball", "cavity_infinite")))
    if geometry is Geometry.CAVITY_INFINITE:
        R1 = cfg.number("R1", positive=True)
        s = ElasticScenario(geometry, D, R1, math.inf, p1, p2, mat)
        r_hi = cfg.number("r_max", positive=True)
        if not r_hi > R1:
            raise ConfigError("cavity output needs r_max > R1")
        grid = RadialGrid(R1, r_hi, cfg.integer("nodes", DEFAULT_NODES, 3))
    else:
        R1, R2 = cfg.pair("R") if cfg.has("R") else (cfg.number("R1"), cfg.number("R2"))
        s = ElasticScenario(geometry, D, R1, R2, p1, p2, mat)
        grid = RadialGrid(R1, R2, cfg.integer("nodes", DEFAULT_NODES, 3))
    res = RunResult()
    u = displacement_field(s)
    r = grid.nodes
    meta = {"scenario": cfg.kind, "D": D, "d": D - 1.0,
            "symmetry": "cylindrical" if pipe else "spherical"}
    res.tables.append((cfg.kind, [
        _profile(grid, [u(x) for x in r], "u_r", meta),
        _profile(grid, [radial_stress(s, x) for x in r], "sigma_rr", meta),
    ]))
    if cfg.params.get("validate") and geometry is not Geometry.CAVITY_INFINITE:
        err = validate_against_bvp(s, cfg.integer("validate_nodes", 2000, 100))
        res.lines.append(f"bvp_relative_error {err:.3e}")
    return res


def _heat_scenario(cfg: ScenarioConfig):
    D = cfg.number("D")
    sym = cfg.symmetry()
    r_min, r_max = cfg.pair("domain")
    src = cfg.params.get("source", 0.0)
    if isinstance(src, str):
        e = parse_expression(src)
        source = lambda r: e(r)  # noqa: E731
    elif isinstance(src, (int, float)) and not isinstance(src, bool) and math.isfinite(src):
        source = float(src)
    else:
        raise ConfigError(f"{cfg.kind}: 'source' must be a number or expression")
    bl = cfg.boundary("bc_left", BoundaryCondition.neumann(0.0))
    br = cfg.boundary("bc_right", BoundaryCondition.dirichlet(0.0))
    return HeatScenario(sym, D, r_min, r_max, source, cfg.material(), bl, br)


def _heat_meta(cfg, s):
    return {"scenario": cfg.kind, "D": s.D, "d": s.spec.d, "symmetry": s.symmetry.value}


def _heat_steady(cfg: ScenarioConfig):
    s = _heat_scenario(cfg)
    tol = cfg.number("tolerance", 1e-12, positive=True)
    phi = steady_solution(s, QuadratureConfig(abs_tol=tol * 1e-2, rel_tol=tol))
    grid = RadialGrid(s.r_min, s.r_max, cfg.integer("nodes", DEFAULT_NODES, 3))
    vals = [phi(x) for x in grid.nodes]
    res = RunResult()
    res.tables.append((cfg.kind, [_profile(grid, vals, "phi", _heat_meta(cfg, s))]))
    return res


def _heat_transient(cfg: ScenarioConfig):
    s = _heat_scenario(cfg)
    t_end = cfg.number("t_end", positive=True)
    steps = cfg.integer("steps", 100, 1)
    save_every = cfg.integer("save_every", steps, 1)
    init = cfg.params.get("init", 0.0)
    if isinstance(init, str):
        e = parse_expression(init)
        init = lambda r: e(r)  # noqa: E731
    elif isinstance(init, bool) or not isinstance(init, (int, float)):
        raise ConfigError(f"{cfg.kind}: 'init' must be a number or expression")
    snaps = transient(s, t_end, steps, init, n_nodes=cfg.integer("nodes", DEFAULT_NODES, 3),
                      save_every=save_every)
    res = RunResult()
    meta = _heat_meta(cfg, s)
    for p in snaps:
        m = dict(p.meta)
        m.update(meta)
        stem = f"{cfg.kind}_t={p.meta['t']:.17g}"
        res.tables.append((stem, [SolutionProfile(p.grid, p.values, m)]))
    return res


def _electro(cfg: ScenarioConfig):
    mat = cfg.material()
    D = cfg.number("D")
    s = CylinderChargeScenario(cfg.number("R", positive=True), mat.rho_q, mat.eps0, D)
    r_max = cfg.number("r_max", 3.0 * s.R, positive=True)
    grid = RadialGrid(0.0, r_max, cfg.integer("nodes", DEFAULT_NODES, 3))
    r = grid.nodes
    meta = {"scenario": cfg.kind, "D": D, "d": D - 1.0, "symmetry": "cylindrical"}
    res = RunResult()
    res.tables.append((cfg.kind, [
        _profile(grid, [potential(s, x) for x in r], "phi", meta),
        _profile(grid, [electric_field(s, x) for x in r], "E_r", meta),
    ]))
    eps_in, eps_out = effective_permittivities(s)
    res.lines.append(f"charge_per_length {charge_per_length(s):.17g}")
    res.lines.append(f"eps_in {eps_in:.17g}")
    res.lines.append(f"eps_out {eps_out:.17g}")
    return res


_SIMPLE = {
    "div": div_radial,
    "grad": grad_radial,
    "laplacian_scalar": laplacian_scalar,
    "laplacian_vector": laplacian_vector,
}
_GENERAL = {
    "div_generalized": div_generalized,
    "grad_generalized": grad_generalized,
    "laplacian_scalar_generalized": laplacian_scalar_generalized,
    "laplacian_vector_generalized": laplacian_vector_generalized,
}
OPERATORS = tuple(_SIMPLE) + tuple(_GENERAL) + ("stillinger", "curl", "curl_rz")


def _spec(cfg: ScenarioConfig):
    D = cfg.number("D")
    d = cfg.number("d") if cfg.has("d") else None
    return DimensionSpec(D, d, cfg.symmetry())


def _radii(cfg: ScenarioConfig):
    """Either a single ``r`` (or list of radii) or a grid over ``domain``."""
    if cfg.has("r"):
        v = cfg.params["r"]
        vals = v if isinstance(v, list) else [v]
        for x in vals:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0 or math.isinf(x):
                raise ConfigError(f"{cfg.kind}: radii must be finite and > 0, got {x!r}")
        return None, [float(x) for x in vals]
    lo, hi = cfg.pair("domain")
    if not lo > 0:
        raise ConfigError(f"{cfg.kind}: operator domain must start above r = 0")
    grid = RadialGrid(lo, hi, cfg.integer("nodes", DEFAULT_NODES, 3))
    return grid, list(grid.nodes)


def _ops_eval(cfg: ScenarioConfig):
    op = cfg.text("operator", choices=OPERATORS)
    grid, radii = _radii(cfg)
    if op == "curl":
        vals = [curl_radial().value for _ in radii]
        spec = None
    elif op == "curl_rz":
        u = axial_field(cfg.expression("u_r"), cfg.expression("u_z"))
        z = cfg.number("z", 0.0)
        vals = [curl_rz(u, x, z).value for x in radii]
        spec = None
    else:
        f = cfg.expression("field").to_field()
        spec = _spec(cfg)
        if op == "stillinger":
            vals = [stillinger_laplacian_radial(f, spec.D, x).value for x in radii]
        else:
            fn = _SIMPLE.get(op) or _GENERAL[op]
            vals = [fn(f, spec, x).value for x in radii]
    bad = [x for x, v in zip(radii, vals) if not math.isfinite(v)]
    if bad:
        raise NumericalError(f"operator {op} is not finite at r={bad[0]!r}")
    res = RunResult()
    if grid is None:
        res.lines.extend(f"{x:.17g} {v:.17g}" for x, v in zip(radii, vals))
    else:
        meta = {"scenario": cfg.kind, "D": spec.D if spec else None,
                "d": spec.d if spec else None,
                "symmetry": spec.symmetry.value if spec else cfg.symmetry().value}
        res.tables.append((f"{cfg.kind}_{op}", [_profile(grid, vals, op, meta)]))
    return res


def _quad_cfg(cfg: ScenarioConfig):
    tol = cfg.number("tolerance", 1e-12, positive=True)
    return QuadratureConfig(abs_tol=min(tol, 1e-10) * 1e-2, rel_tol=tol)


def _integrate(cfg: ScenarioConfig):
    D = cfg.number("D")
    e = cfg.expression("integrand")
    lo, hi = cfg.pair("interval", allow_inf=True)
    val = integrate_radial(lambda r: e(r), D, RadialInterval(lo, hi), _quad_cfg(cfg))
    res = RunResult()
    res.lines.append(f"integral {val:.17g}")
    return res


def _verify(cfg: ScenarioConfig):
    check = cfg.text("check", choices=("gauss", "elasticity_bvp"))
    res = RunResult()
    if check == "gauss":
        spec = _spec(cfg)
        R1, R2 = cfg.pair("shell")
        u = cfg.expression("field").to_field()
        resid = gauss_residual(u, spec, R1, R2, _quad_cfg(cfg))
        limit = cfg.number("threshold", 1e-8, positive=True)
        res.lines.append(f"gauss_residual {resid:.3e}")
    else:
        sub = ScenarioConfig("elasticity_pipe" if cfg.params.get("geometry") == "pipe"
                             else "elasticity_ball",
                             {k: v for k, v in cfg.params.items() if k != "geometry"})
        D = sub.number("D")
        R1, R2 = sub.pair("R")
        p1, p2 = sub.pair("p") if sub.has("p") else (0.0, 0.0)
        geo = Geometry.PIPE if sub.kind == "elasticity_pipe" else Geometry.HOLLOW_BALL
        s = ElasticScenario(geo, D, R1, R2, p1, p2, sub.material())
        resid = validate_against_bvp(s, cfg.integer("nodes", 2000, 100))
        limit = cfg.number("threshold", 5e-5, positive=True)
        res.lines.append(f"bvp_relative_error {resid:.3e}")
    ok = resid <= limit
    res.lines.append("PASS" if ok else "FAIL")
    res.status = EXIT_OK if ok else EXIT_NUMERIC
    return res


_DISPATCH = {
    "elasticity_ball": lambda c: _elastic(c, pipe=False),
    "elasticity_pipe": lambda c: _elastic(c, pipe=True),
    "heat_steady": _heat_steady,
    "heat_transient": _heat_transient,
    "electro_cylinder": _electro,
    "ops_eval": _ops_eval,
    "integrate": _integrate,
    "verify": _verify,
}


# ---------------------------------------------------------------- driver


def load_config(doc, overrides=None) -> ScenarioConfig:
    """Build a config from a parsed JSON object, applying flag overrides."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a JSON object")
    params = dict(doc)
    kind = params.pop("kind", None)
    if not isinstance(kind, str):
        raise ConfigError("scenario document needs a string 'kind'")
    for k, v in (overrides or {}).items():
        if v is not None:
            params[k] = v
    return ScenarioConfig(kind, params)


def execute(config: ScenarioConfig) -> RunResult:
    """Validate and compute everything for ``config`` without touching the filesystem."""
    return _DISPATCH[config.kind](config)


def run(config: ScenarioConfig, out_dir=None, fmt="csv", stdout=None, stderr=None):
    """Execute ``config`` and write its tables; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        result = execute(config)
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    for line in result.lines:
        print(line, file=stdout)
    if result.tables:
        out_dir = out_dir or "."
        emit = emit_json if fmt == "json" else emit_csv
        try:
            os.makedirs(out_dir, exist_ok=True)
            for stem, profiles in result.tables:
                path = os.path.join(out_dir, f"{stem}.{fmt}")
                emit(profiles, path)
                log.info("wrote %s", path)
        except OSError as exc:
            print(f"error: {exc}", file=stderr)
            return EXIT_INVALID
    return result.status


def build_parser():
    p = argparse.ArgumentParser(prog="fracvec", description="Radial vector calculus in non-integer dimension.")
    p.add_argument("--scenario", default="-", help="scenario JSON file, or '-' for stdin")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dimension", type=float, help="override D")
    p.add_argument("--boundary-dimension", type=float, help="override d")
    p.add_argument("--nodes", type=int, help="override grid node count")
    p.add_argument("--tolerance", type=float, help="override quadrature tolerance")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.scenario == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.scenario) as fh:
                doc = json.load(fh)
        config = load_config(doc, {
            "D": args.dimension, "d": args.boundary_dimension,
            "nodes": args.nodes, "tolerance": args.tolerance,
        })
    except (OSError, json.JSONDecodeError, FracvecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(config, args.out, args.format)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
