"""Declarative run configuration (JSON documents).

Top-level keys::

    algebra       {"kind": "real"|"complex"|"matrix"|"grid", "dim": 2, "grid_size": 101}
    equation      {"shape": ..., shape parameters..., "root": optional candidate}
    nonlinearity  {"family": ..., "sigma": ..., "phi": "sin",
                   "sequence": {"rule": "constant"|"periodic"|"random",
                                "values": [...], "seed": int, "bound": float}}
    initial       {"values": [x_{-k}, ..., x_0]} or {"seed": int, "scale": 1.0}
    horizon       number of steps N (default 100)
    seed          default seed for random initial values, sequences, axiom sampling
    tolerances    {"root": float|null, "criteria": 1e-9, "envelope": 1e-9}
    scan          {"b": ..., "sigma": ..., "a_min": ..., "a_max": ..., "steps": ...}
    axioms        {"samples": 1000, "tol": 1e-12}

Equation shapes and their parameters:

    general  a: [a_0..a_k], b: [b_0..b_k]
    gla0     a, b: [b_0..b_k]  (or b_head: [b_0..b_{k-1}], b_k solved from the root condition)
    gla1     a: [a_0..a_k] (or a_head, a_k solved), b
    gla2     a0, b, a1 (default b^2 - a0 b)
    dham     a, k                 (tanh family, sigma from the nonlinearity section)
    c01      alpha, beta, phi     (grid algebra; sigma from the nonlinearity section)
    th       a, b                 (tanh family, constant sigma)

Element values: a number is the constant ``value * 1``; complex elements
may be ``[re, im]``; matrices are nested row lists; grid elements are lists
of samples.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import scenarios
from .algebra import Algebra, make_algebra
from .equations import CoefficientSequence, LinearArgEquation, NonlinearitySpec
from .errors import ConfigError, ShapeError

TOP_KEYS = {"algebra", "equation", "nonlinearity", "initial", "horizon", "seed",
            "tolerances", "scan", "axioms"}
SHAPE_KEYS = {
    "general": {"a", "b"},
    "gla0": {"a", "b", "b_head"},
    "gla1": {"a", "a_head", "b"},
    "gla2": {"a0", "a1", "b"},
    "dham": {"a", "k"},
    "c01": {"alpha", "beta", "phi"},
    "th": {"a", "b"},
}
FIXED_FAMILY = {"dham": "pointwise_tanh", "c01": "cumulative_integral", "th": "pointwise_tanh"}


@dataclass
class RunConfig:
    algebra: Algebra
    equation: LinearArgEquation | None
    root: Any
    init: list | None
    horizon: int
    seed: int
    root_tol: float | None
    criteria_tol: float
    envelope_tol: float
    scan: dict | None
    axiom_samples: int
    axiom_tol: float
    raw: dict = field(default_factory=dict)


def _unknown(section: str, got: dict, allowed: set) -> None:
    extra = sorted(set(got) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(extra)}")


def _require(d: dict, key: str, section: str) -> Any:
    if key not in d:
        raise ConfigError(f"missing key {section}.{key}")
    return d[key]


def _elements(alg: Algebra, values: Any, what: str) -> list:
    if not isinstance(values, list):
        raise ConfigError(f"{what} must be a list")
    try:
        return [alg.element(v) for v in values]
    except ShapeError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _element(alg: Algebra, value: Any, what: str) -> Any:
    try:
        return alg.element(value)
    except ShapeError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _sequence(spec: dict | None, default_seed: int, sigma: float) -> CoefficientSequence | None:
    if spec is None:
        return None
    _unknown("nonlinearity.sequence", spec, {"rule", "values", "seed", "bound"})
    rule = spec.get("rule", "constant")
    bound = spec.get("bound", sigma if rule == "random" else None)
    return CoefficientSequence(rule, tuple(spec.get("values", ())), int(spec.get("seed", default_seed)),
                               None if bound is None else float(bound))


def _nonlinearity(d: dict, shape: str, seed: int) -> NonlinearitySpec:
    _unknown("nonlinearity", d, {"family", "sigma", "phi", "sequence"})
    sigma = float(_require(d, "sigma", "nonlinearity"))
    family = d.get("family", FIXED_FAMILY.get(shape))
    if family is None:
        raise ConfigError("missing key nonlinearity.family")
    if shape in FIXED_FAMILY and family != FIXED_FAMILY[shape]:
        raise ConfigError(f"shape {shape} uses the {FIXED_FAMILY[shape]} family, got {family}")
    seq = _sequence(d.get("sequence"), seed, sigma)
    if shape == "th" and seq is not None:
        raise ConfigError("shape th uses a constant sigma; drop nonlinearity.sequence")
    return NonlinearitySpec(family, sigma, seq, phi=d.get("phi", "sin"))


def _equation(alg: Algebra, d: dict, g_spec: dict, seed: int) -> LinearArgEquation:
    shape = _require(d, "shape", "equation")
    if shape not in SHAPE_KEYS:
        raise ConfigError(f"unknown equation shape {shape!r}")
    _unknown("equation", d, SHAPE_KEYS[shape] | {"shape", "root"})
    g = _nonlinearity(g_spec, shape, seed)

    if shape in ("dham", "th") and alg.kind != "real":
        raise ConfigError(f"shape {shape} lives on the real algebra")
    if shape == "c01" and alg.kind != "grid":
        raise ConfigError("shape c01 lives on the grid algebra")

    if shape == "general":
        a = _elements(alg, _require(d, "a", "equation"), "equation.a")
        b = _elements(alg, _require(d, "b", "equation"), "equation.b")
        eq = LinearArgEquation(alg, tuple(a), tuple(b), g)
        eq.require_nondegenerate()
        return eq
    if shape == "gla0":
        a = _element(alg, _require(d, "a", "equation"), "equation.a")
        if "b_head" in d:
            return scenarios.make_gla0(alg, a, _elements(alg, d["b_head"], "equation.b_head"), g)
        b = _elements(alg, _require(d, "b", "equation"), "equation.b")
        eq = LinearArgEquation(alg, (a,) + (alg.zero(),) * (len(b) - 1), tuple(b), g,
                               known_root=a, name="gla0")
        eq.require_nondegenerate()
        return eq
    if shape == "gla1":
        b = _element(alg, _require(d, "b", "equation"), "equation.b")
        if "a_head" in d:
            return scenarios.make_gla1(alg, _elements(alg, d["a_head"], "equation.a_head"), b, g)
        a = _elements(alg, _require(d, "a", "equation"), "equation.a")
        if len(a) < 2:
            raise ConfigError("equation.a needs at least two coefficients")
        return scenarios.make_gla1(alg, a[:-1], b, g, a_last=a[-1])
    if shape == "gla2":
        a0 = _element(alg, _require(d, "a0", "equation"), "equation.a0")
        b = _element(alg, _require(d, "b", "equation"), "equation.b")
        a1 = _element(alg, d["a1"], "equation.a1") if "a1" in d else None
        return scenarios.make_gla2(a0, b, g, a1=a1, alg=alg)
    if shape == "dham":
        return scenarios.make_dham(float(_require(d, "a", "equation")),
                                   int(_require(d, "k", "equation")), g.sigma, g.sequence)
    if shape == "c01":
        phi = d.get("phi", g.phi)
        return scenarios.make_c01(float(_require(d, "alpha", "equation")),
                                  float(_require(d, "beta", "equation")),
                                  g.sigma, alg.size, phi, g.sequence)
    return scenarios.make_th(float(_require(d, "a", "equation")),
                             float(_require(d, "b", "equation")), g.sigma)


def _algebra(d: dict) -> Algebra:
    _unknown("algebra", d, {"kind", "dim", "grid_size"})
    try:
        return make_algebra(d.get("kind", "real"), int(d.get("dim", 2)), int(d.get("grid_size", 101)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_from_dict(raw: dict, seed: int | None = None) -> RunConfig:
    """Validate a decoded document; ``seed`` overrides the document's seed."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    _unknown("configuration", raw, TOP_KEYS)
    run_seed = int(raw.get("seed", 0)) if seed is None else int(seed)
    alg_spec = dict(raw.get("algebra", {}))
    eq_spec = raw.get("equation")
    if eq_spec is not None and eq_spec.get("shape") in ("dham", "th"):
        alg_spec.setdefault("kind", "real")
    if eq_spec is not None and eq_spec.get("shape") == "c01":
        alg_spec.setdefault("kind", "grid")
    alg = _algebra(alg_spec)

    eq = None
    root = None
    if eq_spec is not None:
        eq = _equation(alg, eq_spec, raw.get("nonlinearity", {}), run_seed)
        root = _element(alg, eq_spec["root"], "equation.root") if "root" in eq_spec else eq.known_root

    tols = raw.get("tolerances", {})
    _unknown("tolerances", tols, {"root", "criteria", "envelope"})
    horizon = int(raw.get("horizon", 100))
    if horizon < 0:
        raise ConfigError(f"horizon must be nonnegative, got {horizon}")

    init = None
    init_spec = raw.get("initial", {})
    _unknown("initial", init_spec, {"values", "seed", "scale"})
    if eq is not None:
        if "values" in init_spec:
            init = _elements(alg, init_spec["values"], "initial.values")
            if len(init) != eq.order:
                raise ConfigError(f"initial.values needs {eq.order} states (x_-k .. x_0), got {len(init)}")
        else:
            rng = np.random.default_rng(int(init_spec.get("seed", run_seed)))
            init = scenarios.random_init(alg, eq.order, rng, float(init_spec.get("scale", 1.0)))

    scan = raw.get("scan")
    if scan is not None:
        _unknown("scan", scan, {"b", "sigma", "a_min", "a_max", "steps"})
        for key in ("b", "sigma", "a_min", "a_max", "steps"):
            _require(scan, key, "scan")
        if int(scan["steps"]) < 2:
            raise ConfigError("scan.steps must be at least 2")
    ax = raw.get("axioms", {})
    _unknown("axioms", ax, {"samples", "tol"})

    return RunConfig(
        algebra=alg,
        equation=eq,
        root=root,
        init=init,
        horizon=horizon,
        seed=run_seed,
        root_tol=tols.get("root"),
        criteria_tol=float(tols.get("criteria", 1e-9)),
        envelope_tol=float(tols.get("envelope", 1e-9)),
        scan=scan,
        axiom_samples=int(ax.get("samples", 1000)),
        axiom_tol=float(ax.get("tol", 1e-10 if alg.kind == "matrix" else 1e-12)),
        raw=raw,
    )


def parse_config(text: str, seed: int | None = None) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
    return config_from_dict(raw, seed)


def load_config(path: str, seed: int | None = None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), seed)
