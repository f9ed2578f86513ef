"""Command-line interface: estimation, validation, rate studies, planning.

Commands
--------
estimate        Monte Carlo estimate plus error budget, JSON manifest.
validate        Brownian-case check of the corrected estimate vs closed form.
rate            Nested-grid Brownian rate study, CSV table.
plan            Error budget for (alpha, delta) without simulating, JSON.
check-manifest  Parse and sanity-check a manifest or CSV produced above.

Exit codes: 0 success, 1 numerical failure, 2 usage error.  Single results
are JSON manifests (floats serialized via repr, which round-trips
bit-exactly); study tables are CSV with a mandatory header.  Reruns with
identical flags reproduce the results fields exactly (timestamps differ).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .budget import (
    BudgetReport,
    discretization_bound,
    plan_horizon,
    total_budget,
    truncation_bound,
)
from .closed_form import piterbarg_bm_full, piterbarg_bm_half, rate_constant
from .estimator import Domain, EstimateResult, EstimatorConfig, estimate_constant
from .rate_study import RATE_CSV_HEADER, rate_points_csv, run_rate_study_bm

__all__ = ["main"]

# Relative tolerance on the corrected Brownian-case estimate that `validate`
# treats as a decisive pass/fail margin (1.5% of the exact constant).
_VALIDATE_REL_TOL = 0.015


def _domain(text: str) -> Domain:
    try:
        return Domain(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"domain must be 'half' or 'full', got {text!r}"
        ) from None


def _delta_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad spacing list {text!r}") from None


def _default_threads() -> int:
    env = os.environ.get("PITERBARG_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _config_dict(config: EstimatorConfig) -> dict:
    return {
        "alpha": config.alpha,
        "d": config.d,
        "domain": config.domain.value,
        "delta": config.delta,
        "horizon": config.horizon,
        "replications": config.replications,
        "seed": config.seed,
    }


def _estimate_dict(result: EstimateResult) -> dict:
    return {
        "estimate": result.estimate,
        "stderr": result.stderr,
        "ci_low": result.ci_low,
        "ci_high": result.ci_high,
        "method": result.method,
        "replications": result.replications,
    }


def _manifest(command: str, config: dict | None, started: str, results: dict) -> dict:
    return {
        "command": command,
        "tool_version": __version__,
        "started_at": started,
        "finished_at": _now(),
        "config": config,
        "results": results,
    }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_estimate(args: argparse.Namespace) -> int:
    started = _now()
    horizon = args.horizon
    if horizon is None:
        horizon = plan_horizon(args.delta, args.alpha)
    config = EstimatorConfig(
        alpha=args.alpha,
        d=args.d,
        domain=args.domain,
        delta=args.delta,
        horizon=horizon,
        replications=args.reps,
        seed=args.seed,
    )
    result = estimate_constant(config, threads=args.threads)
    budget = total_budget(config, result, c_disc=args.c_disc, c_trunc=args.c_trunc)
    manifest = _manifest(
        "estimate",
        _config_dict(config),
        started,
        {"estimate": _estimate_dict(result), "budget": budget.to_dict()},
    )
    _emit(json.dumps(manifest, indent=2), args.out)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    started = _now()
    horizon = plan_horizon(args.delta, 1.0)
    config = EstimatorConfig(
        alpha=1.0,
        d=args.d,
        domain=args.domain,
        delta=args.delta,
        horizon=horizon,
        replications=args.reps,
        seed=args.seed,
    )
    result = estimate_constant(config, threads=args.threads)
    exact = (
        piterbarg_bm_half(args.d)
        if args.domain is Domain.HALF_LINE
        else piterbarg_bm_full(args.d)
    )
    correction = 1.0 + rate_constant().value * math.sqrt(args.delta)
    corrected = result.estimate * correction
    # 3 sigma for the CLT method; the median-of-means interval half-width is
    # already a conservative ~2-sigma quantity, so it is used as-is.
    stat = result.stat_error()
    if result.stderr is not None:
        stat_width = 3.0 * result.stderr
    else:
        stat_width = stat if stat is not None else math.inf
    model_tol = _VALIDATE_REL_TOL * exact
    error = abs(corrected - exact)
    if stat_width > model_tol:
        status = "inconclusive"
        print(
            f"warning: statistical error ({stat_width:.4g}) dominates the "
            f"model tolerance ({model_tol:.4g}); increase --reps",
            file=sys.stderr,
        )
    else:
        status = "pass" if error <= model_tol + stat_width else "fail"
    manifest = _manifest(
        "validate",
        _config_dict(config),
        started,
        {
            "estimate": _estimate_dict(result),
            "validation": {
                "exact": exact,
                "correction_factor": correction,
                "corrected_estimate": corrected,
                "abs_error": error,
                "model_tolerance": model_tol,
                "stat_tolerance": None if stat is None else stat_width,
                "status": status,
            },
        },
    )
    _emit(json.dumps(manifest, indent=2), args.out)
    print(
        f"validate [{status}] corrected={corrected:.6f} exact={exact:.6f}",
        file=sys.stderr,
    )
    return 1 if status == "fail" else 0


def _cmd_rate(args: argparse.Namespace) -> int:
    points = run_rate_study_bm(
        d=args.d,
        domain=args.domain,
        deltas=args.deltas,
        replications=args.reps,
        seed=args.seed,
        threads=args.threads,
    )
    for p in points:
        # a gap below -3 sigma is suspicious but not a hard failure
        if p.gap < -3.0 * p.gap_stderr:
            print(
                f"warning: gap at delta={p.delta} is {p.gap:.3e}, more than "
                f"3 standard errors below zero",
                file=sys.stderr,
            )
    _emit(rate_points_csv(points), args.out)
    return 0


def _cmd_plan(args: argparse.Namespace) -> int:
    horizon = args.horizon
    if horizon is None:
        horizon = plan_horizon(args.delta, args.alpha)
    up_to_constant = args.c_disc is None or args.c_trunc is None
    cd = 1.0 if args.c_disc is None else args.c_disc
    ct = 1.0 if args.c_trunc is None else args.c_trunc
    report = BudgetReport(
        delta=args.delta,
        horizon=horizon,
        disc_bound=discretization_bound(args.delta, args.alpha, cd),
        trunc_bound=truncation_bound(horizon, args.alpha, ct),
        stat_error=None,
        constants={"c_disc": cd, "c_trunc": ct},
        total=discretization_bound(args.delta, args.alpha, cd)
        + truncation_bound(horizon, args.alpha, ct),
        up_to_constant=up_to_constant,
        horizon_below_comfort=horizon < 1.0,
    )
    started = _now()
    manifest = _manifest(
        "plan",
        {"alpha": args.alpha, "delta": args.delta},
        started,
        {"budget": report.to_dict()},
    )
    _emit(json.dumps(manifest, indent=2), args.out)
    return 0


def _check_json_manifest(text: str) -> list[str]:
    problems = []
    obj = json.loads(text)
    for key in ("command", "tool_version", "started_at", "finished_at", "results"):
        if key not in obj:
            problems.append(f"missing manifest key {key!r}")
    def walk(node, path):
        if isinstance(node, dict):
            for k, v in node.items():
                walk(v, f"{path}.{k}")
        elif isinstance(node, list):
            for i, v in enumerate(node):
                walk(v, f"{path}[{i}]")
        elif isinstance(node, float) and not math.isfinite(node):
            problems.append(f"non-finite number at {path}")
    walk(obj, "$")
    return problems


def _check_csv_table(text: str) -> list[str]:
    problems = []
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return ["empty CSV"]
    header = ",".join(rows[0])
    if header != RATE_CSV_HEADER:
        problems.append(f"unexpected CSV header {header!r}")
    width = len(rows[0])
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            problems.append(f"row {i} has {len(row)} fields, expected {width}")
            continue
        for cell in row:
            try:
                value = float(cell)
            except ValueError:
                problems.append(f"row {i}: non-numeric cell {cell!r}")
                break
            if not math.isfinite(value):
                problems.append(f"row {i}: non-finite value {cell}")
                break
    return problems


def _cmd_check_manifest(args: argparse.Namespace) -> int:
    with open(args.path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    try:
        if stripped.startswith("{"):
            problems = _check_json_manifest(text)
        else:
            problems = _check_csv_table(text)
    except (json.JSONDecodeError, csv.Error) as exc:
        problems = [f"unparseable: {exc}"]
    for p in problems:
        print(f"{args.path}: {p}", file=sys.stderr)
    print(f"check-manifest [{'ok' if not problems else 'invalid'}] {args.path}")
    return 0 if not problems else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, required=True, help="64-bit RNG seed")
    parser.add_argument("--reps", type=int, required=True, help="replication count")
    parser.add_argument("--out", help="write the result to this file instead of stdout")
    parser.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker threads (default: $PITERBARG_THREADS or 1); results do not depend on this",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="piterbarg",
        description="Monte Carlo approximation of Piterbarg constants with an explicit error budget.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate one constant plus its error budget")
    p.add_argument("--alpha", type=float, required=True, help="roughness exponent in (0,2)")
    p.add_argument("--d", type=float, required=True, help="drift-penalty parameter > 0")
    p.add_argument("--domain", type=_domain, required=True, help="half or full")
    p.add_argument("--delta", type=float, required=True, help="grid spacing")
    p.add_argument(
        "--horizon",
        type=float,
        default=None,
        help="truncation horizon T (default: (-ln delta)^(2/alpha))",
    )
    p.add_argument("--c-disc", type=float, default=None, help="calibrated discretization constant")
    p.add_argument("--c-trunc", type=float, default=None, help="calibrated truncation constant")
    _add_common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("validate", help="check the corrected estimate against the Brownian closed form")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--domain", type=_domain, required=True)
    p.add_argument("--delta", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("rate", help="nested-grid Brownian convergence-rate study (CSV)")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--domain", type=_domain, required=True)
    p.add_argument(
        "--deltas",
        type=_delta_list,
        required=True,
        help="comma-separated descending spacings, each the finest times a power of two",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("plan", help="error budget for (alpha, delta) without simulating")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--c-disc", type=float, default=None)
    p.add_argument("--c-trunc", type=float, default=None)
    p.add_argument("--out", help="write the result to this file instead of stdout")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("check-manifest", help="validate a manifest JSON or study CSV")
    p.add_argument("path")
    p.set_defaults(func=_cmd_check_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
