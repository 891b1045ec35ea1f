"""Acceptance suite: one test per acceptance criterion.

Each test records a PASS/FAIL line; ``conftest.py`` prints them at the end
of the pytest run. Running this file directly prints the same lines.
"""
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from banachdiff.algebra import ComplexAlgebra, GridAlgebra, MatrixAlgebra, RealAlgebra, check_axioms
from banachdiff.cli import main
from banachdiff.equations import NonlinearitySpec, envelope_check, iterate
from banachdiff.reduction import split_consistency_check
from banachdiff.scenarios import (
    GLOBAL,
    LOCAL,
    REPELLING,
    basin_probe,
    bifurcation_scan,
    classify_regime,
    find_tau,
    h_map,
    make_c01,
    make_dham,
    make_gla1,
    make_gla2,
    make_th,
    random_contractive,
    random_init,
)
from banachdiff.stability import alpha_direct, check, check_corollary2, check_theorem1

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_algebra_axioms():
    t0 = time.perf_counter()
    worst = {}
    ok = True
    for alg, tol in [(RealAlgebra(), 1e-12), (ComplexAlgebra(), 1e-12),
                     (MatrixAlgebra(3), 1e-10), (GridAlgebra(101), 1e-12)]:
        rep = check_axioms(alg, 1000, seed=0, tol=tol)
        worst[alg.kind] = max(rep.violations.values())
        ok &= rep.passed
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f"; {elapsed:.2f}s"
    record(1, "algebra axioms", ok and elapsed < 5, detail)


def test_criterion_2_envelope():
    t0 = time.perf_counter()
    algebras = [RealAlgebra(), ComplexAlgebra(), MatrixAlgebra(2), MatrixAlgebra(3), GridAlgebra(51)]
    violations = 0
    worst = np.inf
    for i in range(100):
        alg = algebras[i % len(algebras)]
        rng = np.random.default_rng(1000 + i)
        eq = random_contractive(alg, rng)
        alpha = alpha_direct(eq)
        assert alpha < 1
        traj = iterate(eq, random_init(alg, eq.order, rng, scale=5.0), 300)
        rep = envelope_check(traj, alpha, tol=1e-9)
        violations += not rep.holds
        worst = min(worst, rep.worst_margin)
    elapsed = time.perf_counter() - t0
    record(2, "norm envelope", violations == 0 and elapsed < 30,
           f"{violations} violations in 100 equations, smallest margin {worst:.2e}; {elapsed:.2f}s")


def _matrix_gla1():
    alg = MatrixAlgebra(2)
    rng = np.random.default_rng(42)
    g = NonlinearitySpec("norm_saturated", 0.3)
    head = [alg.scale(0.3, alg.random_element(rng)) for _ in range(2)]
    b = alg.add(alg.constant(0.3), alg.scale(0.2, alg.random_element(rng)))
    return make_gla1(alg, head, b, g)


def test_criterion_3_factorization_two_paths():
    cases = {
        "dham": make_dham(0.5, 2, 0.6),
        "gla2": make_gla2(0.5, 0.4, NonlinearitySpec("pointwise_sin", 0.3)),
        "c01": make_c01(1.5, 0.5, 0.4),
        "matrix gla1": _matrix_gla1(),
    }
    worst = {}
    for name, eq in cases.items():
        rng = np.random.default_rng(7)
        worst[name] = max(
            split_consistency_check(eq, eq.known_root, random_init(eq.alg, eq.order, rng, 2.0), 100)
            for _ in range(10)
        )
    m = cases["matrix gla1"]
    noncommutative = m.alg.distance(m.alg.mul(m.a[0], m.known_root), m.alg.mul(m.known_root, m.a[0])) > 1e-3
    ok = all(v <= 1e-8 for v in worst.values()) and noncommutative
    record(3, "direct vs factor+cofactor", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_4_range_extension():
    eq = make_dham(0.5, 2, 0.6)
    rep = check_theorem1(eq)
    bounds_ok = (abs(rep.alpha_direct - 1.25) < 1e-12 and not rep.direct_holds
                 and abs(rep.alpha_factored - 0.9) < 1e-12 and rep.factored_holds)
    rng = np.random.default_rng(4)
    worst_steps = 0
    converged = 0
    for _ in range(20):
        traj = iterate(eq, random_init(eq.alg, eq.order, rng, scale=5.0), 500)
        below = np.nonzero(traj.norms[eq.order:] < 1e-6)[0]
        if below.size and np.all(traj.norms[eq.order + below[0]:] < 1e-6):
            converged += 1
            worst_steps = max(worst_steps, int(below[0]) + 1)
    record(4, "range extension (delayed tanh)", bounds_ok and converged == 20,
           f"direct {rep.alpha_direct:.4g}, factored {rep.alpha_factored:.4g}, "
           f"{converged}/20 below 1e-6, slowest at step {worst_steps}")


def _smooth_pair(alg, rng):
    r = alg.points
    out = []
    for _ in range(2):
        c = rng.uniform(-2, 2, size=3)
        w = rng.uniform(0.5, 3.0)
        out.append(c[0] + c[1] * np.sin(np.pi * w * r) + c[2] * r**2)
    return out


def test_criterion_5_integral_example():
    t0 = time.perf_counter()
    eq = make_c01(1.5, 0.5, 0.4, m=101)
    c2 = check_corollary2(eq)
    rep = check(eq)
    verdict_ok = c2.holds and abs(c2.p_sum - 0.5) < 1e-12 and "Corollary2" in rep.verdicts
    rng = np.random.default_rng(5)
    converged = 0
    for _ in range(10):
        traj = iterate(eq, _smooth_pair(eq.alg, rng), 500)
        converged += bool(traj.norms[-1] < 1e-6)
    elapsed = time.perf_counter() - t0
    record(5, "C[0,1] integral example", verdict_ok and converged == 10 and elapsed < 10,
           f"|a_0-b| = {c2.p_sum:.6g} < 1-sigma = 0.6, {converged}/10 converged; {elapsed:.2f}s")


def _sign_scan_tau(a, b, sigma):
    t = np.linspace(1e-6, 50.0, 5_000_001)
    f = (a - b) * t + sigma * np.tanh(t) + t
    i = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0][0]
    return t[i] - f[i] * (t[i + 1] - t[i]) / (f[i + 1] - f[i])


def test_criterion_6_bifurcation():
    b, sigma = 0.5, 1.2
    eps = 1e-9
    boundaries = (
        classify_regime(-0.5, b, sigma) == GLOBAL
        and classify_regime(-0.5 - eps, b, sigma) == LOCAL
        and classify_regime(-1.7 + eps, b, sigma) == LOCAL
        and classify_regime(-1.7, b, sigma) == REPELLING
    )
    tau = find_tau(-1.0, b, sigma)
    cycle = abs(h_map(-1.0, b, sigma, h_map(-1.0, b, sigma, tau)) - tau)
    oracle = abs(tau - _sign_scan_tau(-1.0, b, sigma))
    probes = all(basin_probe(-1.0, b, sigma, s * tau / 2) == "converged" for s in (1, -1)) and all(
        basin_probe(-1.0, b, sigma, s * 2 * tau) == "diverged" for s in (1, -1))
    scan = bifurcation_scan(b, sigma, -2.0, 0.29, 100)
    taus = [r.tau for r in scan.records if r.regime == LOCAL]
    monotone = all(x <= y for x, y in zip(taus, taus[1:]))
    bands = [r for r, _, _ in scan.bands()]
    ok = boundaries and cycle <= 1e-5 and oracle <= 1e-4 and probes and monotone and bands == [REPELLING, LOCAL, GLOBAL]
    record(6, "bifurcation scenario", ok,
           f"tau = {tau:.10f}, |h(h(tau))-tau| = {cycle:.1e}, oracle gap {oracle:.1e}, bands {len(bands)}")


def test_criterion_7_non_contraction():
    a, b, sigma = -0.3, 0.5, 1.1
    eq = make_th(a, b, sigma)
    rng = np.random.default_rng(7)
    converged = 0
    for _ in range(10):
        traj = iterate(eq, list(rng.uniform(-5, 5, size=2)), 2000)
        converged += bool(not traj.diverged and traj.norms[-1] < 1e-6)
    record(7, "convergence with sigma >= 1", converged == 10 and sigma < 1 - a + b,
           f"{converged}/10 converged, sigma = {sigma} < 1-a+b = {1 - a + b:.2g}")


def test_criterion_8_determinism(tmp_path):
    runs = [("simulate", "dham.json"), ("simulate", "c01.json"), ("simulate", "general.json"),
            ("reduce", "matrix_gla1.json"), ("check", "gla0.json"), ("scan", "scan.json"),
            ("axioms", "axioms_matrix.json")]
    same = 0
    for command, config in runs:
        blobs = []
        for i in range(2):
            out = tmp_path / f"{command}-{config}-{i}"
            assert main([command, "--config", str(CONFIGS / config), "--out", str(out), "--seed", "3"]) == 0
            blobs.append(out.read_bytes())
        same += blobs[0] == blobs[1]
    # one run in a fresh interpreter, against an in-process run
    sub = tmp_path / "sub.csv"
    proc = subprocess.run([sys.executable, "-m", "banachdiff.cli", "simulate", "--config",
                           str(CONFIGS / "dham.json"), "--out", str(sub), "--seed", "3"],
                          capture_output=True, check=False)
    fresh = proc.returncode == 0 and sub.read_bytes() == (tmp_path / "simulate-dham.json-0").read_bytes()
    record(8, "byte-identical reruns", same == len(runs) and fresh,
           f"{same}/{len(runs)} commands identical, fresh process identical: {fresh}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
