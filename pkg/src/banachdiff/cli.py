"""Command-line entry point.

Usage::

    banachdiff simulate --config run.json [--out traj.csv] [--format csv|json] [--seed N]
    banachdiff reduce   --config run.json [--out reduction.json]
    banachdiff check    --config run.json [--out report.json]
    banachdiff scan     --config scan.json [--out scan.csv]
    banachdiff axioms   --config alg.json [--out axioms.json]

The artifact goes to ``--out`` (or stdout when absent); the human-readable
summary goes to stdout when ``--out`` is given and to stderr otherwise.
Exit status: 0 on success, 1 for a rejected configuration, 2 for an
internal numeric failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import export
from .algebra import check_axioms
from .config import RunConfig, load_config
from .equations import envelope_check, iterate
from .errors import ConfigError, NotAUnit, RootRejected, ShapeError
from .reduction import reduce_order, split_consistency_check
from .scenarios import bifurcation_scan
from .stability import alpha_direct, check

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


def _need_equation(cfg: RunConfig):
    if cfg.equation is None:
        raise ConfigError("this subcommand needs an equation section")
    return cfg.equation


def cmd_simulate(cfg: RunConfig, fmt: str) -> tuple[str, str]:
    eq = _need_equation(cfg)
    traj = iterate(eq, cfg.init, cfg.horizon)
    alpha = alpha_direct(eq)
    lines = [f"steps: {traj.steps}  diverged: {str(traj.diverged).lower()}  mu: {traj.mu!r}",
             f"final norm: {float(traj.norms[-1])!r}", f"direct sum: {alpha!r}"]
    if 0 < alpha < 1:
        env = envelope_check(traj, alpha, tol=cfg.envelope_tol)
        lines.append(f"envelope: {'holds' if env.holds else 'violated'}  "
                     f"worst margin: {env.worst_margin!r}  first violation: {env.first_violation}")
    else:
        lines.append("envelope: not applicable (direct sum >= 1)")
    artifact = export.trajectory_csv(traj) if fmt == "csv" else export.dumps(export.trajectory_json(traj))
    return artifact, "\n".join(lines) + "\n"


def cmd_reduce(cfg: RunConfig, fmt: str) -> tuple[str, str]:
    eq = _need_equation(cfg)
    if cfg.root is None:
        raise ConfigError("reduce needs equation.root or a shape with a known root")
    try:
        red = reduce_order(eq, cfg.root, cfg.root_tol)
    except RootRejected as exc:
        doc = {"status": "RootRejected", "residual_P": exc.residual_P,
               "residual_Q": exc.residual_Q, "root_tol": exc.tol}
        return export.dumps(doc), f"root rejected: {exc}\n"
    except NotAUnit as exc:
        return export.dumps({"status": "NotAUnit", "message": str(exc)}), f"{exc}\n"
    deviation = split_consistency_check(eq, red.rho, cfg.init, cfg.horizon, cfg.root_tol)
    summary = (f"residuals: P={red.residual_P!r} Q={red.residual_Q!r}\n"
               f"factor order: {red.k}\nsplit consistency over {cfg.horizon} steps: {deviation!r}\n")
    return export.dumps(export.reduction_json(red, deviation)), summary


def cmd_check(cfg: RunConfig, fmt: str) -> tuple[str, str]:
    eq = _need_equation(cfg)
    try:
        report = check(eq, cfg.root, cfg.root_tol, cfg.criteria_tol)
    except (RootRejected, NotAUnit) as exc:
        # branch (b) unavailable; report the remaining criteria
        report = check(eq.__class__(eq.alg, eq.a, eq.b, eq.g, name=eq.name), None, None, cfg.criteria_tol)
        doc = export.report_json(report, eq.alg)
        doc["root_error"] = str(exc)
        return export.dumps(doc), export.report_table(report) + f"root: {exc}\n"
    return export.dumps(export.report_json(report, eq.alg)), export.report_table(report)


def cmd_scan(cfg: RunConfig, fmt: str) -> tuple[str, str]:
    if cfg.scan is None:
        raise ConfigError("scan needs a scan section")
    s = cfg.scan
    scan = bifurcation_scan(float(s["b"]), float(s["sigma"]), float(s["a_min"]),
                            float(s["a_max"]), int(s["steps"]))
    bands = "\n".join(f"{r:<20} a in [{lo:.6g}, {hi:.6g}]" for r, lo, hi in scan.bands())
    artifact = export.scan_csv(scan) if fmt == "csv" else export.dumps(export.scan_json(scan))
    return artifact, bands + "\n"


def cmd_axioms(cfg: RunConfig, fmt: str) -> tuple[str, str]:
    report = check_axioms(cfg.algebra, cfg.axiom_samples, cfg.seed, cfg.axiom_tol)
    return export.dumps(export.axioms_json(report)), export.axioms_table(report)


COMMANDS = {
    "simulate": cmd_simulate,
    "reduce": cmd_reduce,
    "check": cmd_check,
    "scan": cmd_scan,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="banachdiff", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="artifact path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="artifact format for simulate and scan")
    parser.add_argument("--seed", type=int, help="override the configuration seed")
    return parser


def run(command: str, cfg: RunConfig, fmt: str = "csv", out: str | None = None) -> int:
    try:
        with np.errstate(over="raise", invalid="raise", divide="raise"):
            artifact, summary = COMMANDS[command](cfg, fmt)
    except (ConfigError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(artifact)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(artifact)
        sys.stderr.write(summary)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed)
    except (ConfigError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(args.command, cfg, args.format, args.out)


if __name__ == "__main__":
    sys.exit(main())
