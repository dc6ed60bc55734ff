"""Command-line front end. Every subcommand prints one JSON report to stdout.

Exit codes: 0 when every check passed, 1 when a check failed, 2 on usage or
input errors. ``--pretty`` adds a human-readable table on stderr.
``POLARIZE_THREADS`` caps the number of worker processes for trial batches.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .csb import FINAL_TOL, INEQ_TOL, verify_csb_proof
from .errors import PolarizeError
from .explorer import explore_conjecture, max_abs_product
from .norms import FAMILIES, NormDescriptor, as_cvector, families_for_dim, from_json, random_norm
from .product import polarization_product
from .reproduce import reproduce_rows
from .rng import child_seed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSB_TOL = 1e-7


class UsageError(Exception):
    pass


def _load_json(value: str) -> Any:
    path = Path(value)
    try:
        if path.suffix == ".json" and path.exists():
            return json.loads(path.read_text(encoding="utf-8"))
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc


def _load_norm(value: str) -> NormDescriptor:
    d = from_json(_load_json(value))
    d.check()
    return d


def _worker_count() -> int:
    cap = os.environ.get("POLARIZE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError as exc:
            raise UsageError(f"POLARIZE_THREADS must be an integer, got {cap!r}") from exc
    return n


def _map_ordered(fn: Callable[..., Any], jobs: Sequence[tuple]) -> list[Any]:
    workers = _worker_count()
    if workers <= 1 or len(jobs) < 2:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs), chunksize=max(1, len(jobs) // (4 * workers))))


def _report(command: str, inputs: dict[str, Any], results: Any, checks: list[dict[str, Any]]) -> dict[str, Any]:
    status = EXIT_OK if all(c["passed"] for c in checks) else EXIT_FAIL
    return {
        "tool": "polarize",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
        "checks": checks,
        "exit_status": status,
    }


def _family_cycle(family: str, dim: int) -> tuple[str, ...]:
    if family == "all":
        return families_for_dim(dim)
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)} or 'all'")
    if family == "induced_c2" and dim != 2:
        raise UsageError("induced_c2 norms exist only for --dim 2")
    return (family,)


# --------------------------------------------------------------------------
# subcommands


def cmd_product(args: argparse.Namespace) -> dict[str, Any]:
    norm = _load_norm(args.norm)
    x = as_cvector(_load_json(args.x), norm.dim)
    y = as_cvector(_load_json(args.y), norm.dim)
    pv = polarization_product(norm, x, y)
    checks = [{"name": "csb_ratio_at_most_1", "passed": pv.ratio <= 1.0 + args.tol, "margin": 1.0 - pv.ratio}]
    inputs = {"norm": norm.to_json(), "x": [[z.real, z.imag] for z in x], "y": [[z.real, z.imag] for z in y],
              "tol": args.tol}
    return _report("product", inputs, pv.to_json(), checks)


def _verify_trial(family: str, seed: int, tol: float, final_tol: float) -> dict[str, Any]:
    norm = random_norm(family, 2, seed)
    out = verify_csb_proof(norm, tol, final_tol).to_json()
    out.update({"family": family, "seed": seed, "norm": norm.to_json()})
    return out


def _summarize_traces(traces: list[dict[str, Any]]) -> list[dict[str, Any]]:
    worst: dict[str, dict[str, Any]] = {}
    for tr in traces:
        for c in tr["checks"]:
            # check names carrying a sample value are grouped by their stem
            name = c["name"].split("[", 1)[0]
            cur = worst.setdefault(name, {"name": name, "passed": True, "margin": math.inf, "count": 0})
            cur["passed"] = cur["passed"] and c["passed"]
            cur["margin"] = min(cur["margin"], c["margin"])
            cur["count"] += 1
    return sorted(worst.values(), key=lambda r: r["name"])


def cmd_verify_csb(args: argparse.Namespace) -> dict[str, Any]:
    if args.norm is not None:
        norm = _load_norm(args.norm)
        trace = verify_csb_proof(norm, args.tol, args.final_tol).to_json()
        trace["norm"] = norm.to_json()
        traces = [trace]
        inputs: dict[str, Any] = {"norm": norm.to_json()}
    else:
        if args.family is None:
            raise UsageError("verify-csb needs --norm or --family")
        fams = _family_cycle(args.family, 2)
        jobs = [(fams[i % len(fams)], child_seed(args.seed, "verify", i), args.tol, args.final_tol)
                for i in range(args.trials)]
        traces = _map_ordered(_verify_trial, jobs)
        for i, tr in enumerate(traces):
            tr["trial"] = i
        inputs = {"family": args.family, "trials": args.trials, "seed": args.seed}
    inputs.update({"tol": args.tol, "final_tol": args.final_tol})

    checks = _summarize_traces(traces)
    passed = sum(tr["passed"] for tr in traces)
    cases = {k: sum(tr["case"] == k for tr in traces) for k in "abc"}
    results = {"passed": passed, "failed": len(traces) - passed, "cases": cases,
               "traces": [] if args.summary_only else traces}
    return _report("verify-csb", inputs, results, checks)


def cmd_reproduce_paper(args: argparse.Namespace) -> dict[str, Any]:
    rows = reproduce_rows(args.tol)
    checks = [{"name": r.name, "passed": r.passed, "margin": r.tol - r.error if r.kind == "abs_error"
               else float(r.computed) - float(r.reference)} for r in rows]
    return _report("reproduce-paper", {"tol": args.tol}, [r.to_json() for r in rows], checks)


def _stress_trial(family: str, dim: int, seed: int, restarts: int, iters: int) -> dict[str, Any]:
    norm = random_norm(family, dim, seed)
    return max_abs_product(norm, restarts, iters, seed).to_json()


def cmd_stress(args: argparse.Namespace) -> dict[str, Any]:
    fams = _family_cycle(args.family, args.dim)
    jobs = [(fams[i % len(fams)], args.dim, child_seed(args.seed, "stress", i), args.restarts, args.iters)
            for i in range(args.trials)]
    reports = _map_ordered(_stress_trial, jobs)
    worst = max(r["best_value"] for r in reports)
    checks = [{"name": "max_ratio_at_most_1", "passed": worst <= 1.0 + args.tol, "margin": 1.0 + args.tol - worst}]
    inputs = {"family": args.family, "dim": args.dim, "trials": args.trials, "restarts": args.restarts,
              "iters": args.iters, "seed": args.seed, "tol": args.tol}
    results = {"max_ratio": worst, "reports": [] if args.summary_only else reports}
    return _report("stress", inputs, results, checks)


def cmd_explore_conjecture(args: argparse.Namespace) -> dict[str, Any]:
    families = args.families.split(",") if args.families else None
    if families:
        for f in families:
            _family_cycle(f, 2)
    report = explore_conjecture(families, args.trials, args.seed, args.restarts, args.iters)
    inputs = {"families": families or list(FAMILIES), "trials": args.trials, "seed": args.seed,
              "restarts": args.restarts, "iters": args.iters}
    # flags are findings about an open question, never failures
    checks = [{"name": "exploration_completed", "passed": True, "margin": 0.0}]
    return _report("explore-conjecture", inputs, report.to_json(), checks)


# --------------------------------------------------------------------------
# pretty printing


def _pretty(report: dict[str, Any]) -> str:
    lines = [f"polarize {report['version']} :: {report['command']}"]
    if report["command"] == "reproduce-paper":
        lines.append(f"{'quantity':52s} {'reference':>26s} {'computed':>26s} {'|error|':>10s}")
        for row in report["results"]:
            def fmt(v: Any) -> str:
                return f"{v[0]:.10f}{v[1]:+.10f}i" if isinstance(v, list) else f"{v:.12f}"
            lines.append(f"{row['name'][:52]:52s} {fmt(row['reference']):>26s} {fmt(row['computed']):>26s} "
                         f"{row['error']:10.2e} {'ok' if row['passed'] else 'FAIL'}")
    else:
        for c in report["checks"]:
            lines.append(f"  {'ok  ' if c['passed'] else 'FAIL'} {c['name']:48s} margin {c['margin']:.3e}")
    lines.append("PASS" if report["exit_status"] == EXIT_OK else "FAIL")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarize", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"polarize {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print a table to stderr")
    common.add_argument("--deterministic", action="store_true",
                        help="accepted for compatibility; reports never contain timestamps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", parents=[common], help="evaluate <x|y> under a norm")
    p.add_argument("--norm", required=True, help="norm descriptor as JSON or a path to a .json file")
    p.add_argument("--x", required=True, help="JSON list of [re, im] pairs")
    p.add_argument("--y", required=True, help="JSON list of [re, im] pairs")
    p.add_argument("--tol", type=float, default=CSB_TOL)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify-csb", parents=[common], help="replay the reduced Cauchy-Schwarz proof on C^2 norms")
    p.add_argument("--norm", default=None)
    p.add_argument("--family", default=None, help=f"one of {', '.join(FAMILIES)} or 'all'")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=INEQ_TOL)
    p.add_argument("--final-tol", type=float, default=FINAL_TOL)
    p.add_argument("--summary-only", action="store_true")
    p.set_defaults(func=cmd_verify_csb)

    p = sub.add_parser("reproduce-paper", parents=[common], help="recompute the closed-form reference values")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_reproduce_paper)

    p = sub.add_parser("stress", parents=[common], help="search for Cauchy-Schwarz violations")
    p.add_argument("--family", default="all")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--restarts", type=int, default=6)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=CSB_TOL)
    p.add_argument("--summary-only", action="store_true")
    p.set_defaults(func=cmd_stress)

    p = sub.add_parser("explore-conjecture", parents=[common],
                       help="compare phase-homogeneity and parallelogram defects")
    p.add_argument("--families", default=None, help="comma-separated family names")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--iters", type=int, default=300)
    p.set_defaults(func=cmd_explore_conjecture)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("trials", "restarts", "iters", "dim"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name} must be >= 1")
    try:
        report = args.func(args)
    except (UsageError, PolarizeError) as exc:
        print(f"polarize {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, sort_keys=True))
    if args.pretty:
        print(_pretty(report), file=sys.stderr)
    return report["exit_status"]


if __name__ == "__main__":
    sys.exit(main())
