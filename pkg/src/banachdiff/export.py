"""CSV and JSON encodings of trajectories, reductions, reports and scans.

Floats are written with ``repr`` so every artifact parses back bit-exactly.

Trajectory CSV columns: ``n, norm`` followed by the payload components
(``x`` for reals; ``re, im`` for complex; ``m{i}{j}`` row-major for
matrices; ``s0..s{m-1}`` in grid order). Scan CSV columns:
``a, sig_ok, regime, tau`` with an empty ``tau`` outside the basin regime.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Any

from .algebra import Algebra, AxiomReport
from .equations import LinearArgEquation, Trajectory
from .reduction import ReductionResult
from .scenarios import BifurcationScan
from .stability import StabilityReport


def fmt(x: float) -> str:
    return repr(float(x))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _rows_to_csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trajectory_csv(traj: Trajectory) -> str:
    alg = traj.alg
    rows = [
        [str(int(n)), fmt(nrm)] + [fmt(c) for c in alg.components(x)]
        for n, nrm, x in zip(traj.times, traj.norms, traj.values)
    ]
    return _rows_to_csv(["n", "norm"] + alg.component_names(), rows)


def trajectory_json(traj: Trajectory) -> dict:
    return {
        "algebra": traj.alg.describe(),
        "k": traj.k,
        "start": traj.start,
        "diverged": traj.diverged,
        "mu": traj.mu,
        "n": [int(n) for n in traj.times],
        "norms": [float(v) for v in traj.norms],
        "values": [traj.alg.to_json(x) for x in traj.values],
        "meta": traj.meta,
    }


def equation_json(eq: LinearArgEquation) -> dict:
    alg = eq.alg
    g = eq.g
    seq = None
    if g.sequence is not None:
        seq = {"rule": g.sequence.rule, "values": list(g.sequence.values),
               "seed": g.sequence.seed, "bound": g.sequence.bound}
    return {
        "name": eq.name,
        "k": eq.k,
        "a": [alg.to_json(x) for x in eq.a],
        "b": [alg.to_json(x) for x in eq.b],
        "nonlinearity": {"family": g.family, "sigma": g.sigma, "phi": g.phi, "sequence": seq},
    }


def reduction_json(red: ReductionResult, deviation: float | None = None) -> dict:
    alg = red.factor.alg
    out = {
        "status": "ok",
        "rho": alg.to_json(red.rho),
        "residual_P": red.residual_P,
        "residual_Q": red.residual_Q,
        "root_tol": red.root_tol,
        "p": [alg.to_json(x) for x in red.p],
        "q": [alg.to_json(x) for x in red.q],
        "factor": equation_json(red.factor),
    }
    if deviation is not None:
        out["split_consistency"] = deviation
    return out


def _bound(b) -> dict:
    return {"sup": b.value, "valid": b.valid}


def report_json(report: StabilityReport, alg: Algebra) -> dict:
    cors = {}
    for name, c in report.corollary_checks.items():
        d = dict(vars(c))
        d["root_ok"] = c.root_ok
        d["holds"] = c.holds
        cors[name] = d
    return {
        "verdict": report.verdict,
        "verdicts": list(report.verdicts),
        "concluded": report.concluded,
        "sigma": report.sigma,
        "alpha_direct": report.alpha_direct,
        "direct_holds": report.direct_holds,
        "rho": None if report.rho_used is None else alg.to_json(report.rho_used),
        "rho_norm": report.rho_norm,
        "alpha_factored": report.alpha_factored,
        "factored_holds": report.factored_holds,
        "corollaries": cors,
        "sigma_bounds": {k: _bound(v) for k, v in report.sigma_bounds.items()},
    }


def report_table(report: StabilityReport) -> str:
    def num(v):
        return "-" if v is None else f"{v:.6g}"

    def flag(v):
        return "-" if v is None else ("holds" if v else "fails")

    lines = [
        f"{'criterion':<28}{'value':>14}  status",
        f"{'direct sum (a)':<28}{num(report.alpha_direct):>14}  {flag(report.direct_holds)}",
        f"{'|rho|':<28}{num(report.rho_norm):>14}",
        f"{'factored sum (b)':<28}{num(report.alpha_factored):>14}  {flag(report.factored_holds)}",
    ]
    if "corollary1" in report.corollary_checks:
        c = report.corollary_checks["corollary1"]
        lines.append(f"{'Q(a) residual':<28}{num(c.residual):>14}  {flag(c.root_ok)}")
        lines.append(f"{'q-sum vs 1/sigma':<28}{num(c.q_sum):>14}  {flag(c.holds)}")
    if "corollary2" in report.corollary_checks:
        c = report.corollary_checks["corollary2"]
        lines.append(f"{'P(b) residual':<28}{num(c.residual):>14}  {flag(c.root_ok)}")
        lines.append(f"{'p-sum vs 1-sigma':<28}{num(c.p_sum):>14}  {flag(c.holds)}")
    for name, b in report.sigma_bounds.items():
        lines.append(f"{'sigma sup [' + name + ']':<28}{num(b.value):>14}  {'ok' if b.valid else 'none'}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines) + "\n"


def scan_csv(scan: BifurcationScan) -> str:
    rows = [
        [fmt(r.a), "true" if r.sig_ok else "false", r.regime, "" if r.tau is None else fmt(r.tau)]
        for r in scan.records
    ]
    return _rows_to_csv(["a", "sig_ok", "regime", "tau"], rows)


def scan_json(scan: BifurcationScan) -> dict:
    return {
        "b": scan.b,
        "sigma": scan.sigma,
        "records": [
            {"a": r.a, "sig_ok": r.sig_ok, "regime": r.regime, "tau": r.tau} for r in scan.records
        ],
    }


def read_scan_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        {
            "a": float(row["a"]),
            "sig_ok": row["sig_ok"] == "true",
            "regime": row["regime"],
            "tau": float(row["tau"]) if row["tau"] else None,
        }
        for row in reader
    ]


def read_trajectory_csv(text: str) -> tuple[list[int], list[float], list[list[float]]]:
    reader = csv.reader(io.StringIO(text))
    next(reader)
    ns, norms, comps = [], [], []
    for row in reader:
        ns.append(int(row[0]))
        norms.append(float(row[1]))
        comps.append([float(v) for v in row[2:]])
    return ns, norms, comps


def axioms_json(report: AxiomReport) -> dict:
    return {
        "kind": report.kind,
        "samples": report.samples,
        "tol": report.tol,
        "passed": report.passed,
        "violations": dict(report.violations),
    }


def axioms_table(report: AxiomReport) -> str:
    lines = [f"{'axiom':<24}{'worst violation':>18}  status"]
    for name, v in report.violations.items():
        status = "ok" if v <= report.tol else "FAIL"
        lines.append(f"{name:<24}{v:>18.3e}  {status}")
    lines.append(f"{report.kind}: {'passed' if report.passed else 'failed'} (tol {report.tol:g}, {report.samples} samples)")
    return "\n".join(lines) + "\n"
