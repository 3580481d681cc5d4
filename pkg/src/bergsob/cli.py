"""Batch front end: evaluations, scans, certificates, verification.

Subcommands
-----------
threshold   sharp exponent for (mu, p), or the mu realizing a target r
lambda      one moment: closed form, independent quadrature, verdict
scan        continuity certificates over an s grid (CSV or JSON rows)
verify      run the invariant suites; exit 0 only if all pass

Exit codes: 0 success, 1 property failure, 2 usage error.  JSON output
is deterministic for a fixed seed and configuration (keys sorted, floats
via repr); wall-clock timings go to stderr only.

CSV columns of ``scan``: s, status, sup_ratio, bound, argmax_j, argmax_k.
Rows with s at or above the threshold carry status DIVERGENT and empty
numeric fields.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Optional

import numpy as np

from . import measure, regularity, suites
from .config import SCHEMA_VERSION, Config, apply_overrides, load_config
from .errors import DomainError
from .geometry import DomainParams

__all__ = ["main", "build_parser"]


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_kv(pairs: list[str], cast) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise DomainError(f"expected key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        out[key.strip()] = cast(value)
    return out


def _load_cfg(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    tol = _parse_kv(getattr(args, "tol", None), float)
    grids = _parse_kv(getattr(args, "grid", None), json.loads)
    return apply_overrides(cfg, tol, grids)


def cmd_threshold(args) -> int:
    if args.invert is not None:
        mu = regularity.mu_for_threshold(args.invert, args.p)
        report = regularity.threshold(DomainParams(mu), args.p)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "threshold",
            "inverted_from_r": args.invert,
            "mu": mu,
            "p": args.p,
            "r": report.r,
            "binding": report.binding,
            "clause_value": report.clause_value,
        }
    else:
        if args.mu is None:
            raise DomainError("one of --mu or --invert is required")
        report = regularity.threshold(DomainParams(args.mu), args.p)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "threshold",
            "mu": report.mu,
            "p": report.p,
            "r": report.r,
            "binding": report.binding,
            "clause_value": report.clause_value,
        }
    _emit(_json(payload), args.output)
    return 0


def cmd_lambda(args) -> int:
    params = DomainParams(args.mu)
    m = measure.MomentArgs(args.x, args.y, args.s, params)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "lambda",
        "mu": args.mu,
        "x": args.x,
        "y": args.y,
        "s": args.s,
        "integrable": measure.is_integrable(m),
    }
    if measure.is_integrable(m):
        closed = measure.lambda_closed(m)
        quad = measure.lambda_quadrature(m, tol=args.tol)
        payload.update(
            {
                "closed": closed.value,
                "quadrature": quad.value,
                "quadrature_err_estimate": quad.err_estimate,
                "rel_difference": abs(closed.value - quad.value) / closed.value,
                "verdict": "finite",
            }
        )
    else:
        closed = measure.lambda_closed(m)
        payload.update(
            {"verdict": "divergent", "violated_condition": closed.violated_condition}
        )
        if args.truncate_fit:
            fit = measure.truncation_growth_fit(m)
            payload["growth_fit"] = {
                "kind": fit.kind,
                "exponent": fit.exponent,
                "residual": fit.residual,
            }
    _emit(_json(payload), args.output)
    return 0


def _parse_s_grid(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise DomainError(f"s grid must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise DomainError(f"empty s grid {spec!r}")
        values = [float(v) for v in np.arange(start, stop + 0.5 * step, step)]
    else:
        values = [float(p) for p in spec.split(",") if p.strip()]
    if not values:
        raise DomainError("empty s grid")
    return values


def cmd_scan(args) -> int:
    params = DomainParams(args.mu)
    jmax, kmax = args.lattice
    rows = []
    thr = regularity.threshold(params, args.p)
    for s in _parse_s_grid(args.s_grid):
        if 0.0 <= s < thr.r:
            cert = regularity.continuity_certificate(params, args.p, s, (jmax, kmax))
            rows.append(
                {
                    "s": s,
                    "status": "OK",
                    "sup_ratio": float(cert.sup_ratio),
                    "bound": float(cert.bound_used),
                    "argmax_j": cert.sup_attained_at.j,
                    "argmax_k": cert.sup_attained_at.k,
                }
            )
        else:
            rows.append(
                {
                    "s": s,
                    "status": "DIVERGENT",
                    "sup_ratio": None,
                    "bound": None,
                    "argmax_j": None,
                    "argmax_k": None,
                }
            )
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "scan",
            "mu": args.mu,
            "p": args.p,
            "threshold": thr.r,
            "lattice": [jmax, kmax],
            "rows": rows,
        }
        _emit(_json(payload), args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["s", "status", "sup_ratio", "bound", "argmax_j", "argmax_k"])
        for row in rows:
            writer.writerow(
                [
                    repr(row["s"]),
                    row["status"],
                    "" if row["sup_ratio"] is None else repr(row["sup_ratio"]),
                    "" if row["bound"] is None else repr(row["bound"]),
                    "" if row["argmax_j"] is None else row["argmax_j"],
                    "" if row["argmax_k"] is None else row["argmax_k"],
                ]
            )
        _emit(buf.getvalue(), args.output)
    return 0


def cmd_verify(args) -> int:
    cfg = _load_cfg(args)
    names = [args.suite] if args.suite else None
    started = time.perf_counter()
    results = []
    for result in suites.run_suites(cfg, args.seed, names, self_test=args.self_test):
        results.append(result)
        print(
            f"[verify] {result.name}: {'pass' if result.passed else 'FAIL'} "
            f"({result.checks} checks, {time.perf_counter() - started:.1f}s elapsed)",
            file=sys.stderr,
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "seed": args.seed,
        "self_test": args.self_test,
        "suites": [r.to_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    _emit(_json(payload), args.output)
    if not payload["all_passed"]:
        first = next(r for r in results if not r.passed)
        print(f"[verify] first failure: {first.failures[0]}", file=sys.stderr)
        return 1
    return 0


def _lattice(text: str) -> tuple[int, int]:
    try:
        j, k = (int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"lattice must be Jmax,Kmax: {exc}")
    return j, k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergsob",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_thr = sub.add_parser("threshold", help="sharp Sobolev exponent for (mu, p)")
    p_thr.add_argument("--mu", type=float, default=None)
    p_thr.add_argument("--p", type=int, choices=(0, 1, 2), required=True)
    p_thr.add_argument("--invert", type=float, default=None, metavar="R",
                       help="find mu whose threshold is R")
    p_thr.add_argument("--output", default=None)
    p_thr.set_defaults(func=cmd_threshold)

    p_lam = sub.add_parser("lambda", help="evaluate one weighted moment both ways")
    p_lam.add_argument("--mu", type=float, required=True)
    p_lam.add_argument("--x", type=float, required=True)
    p_lam.add_argument("--y", type=float, required=True)
    p_lam.add_argument("--s", type=float, required=True)
    p_lam.add_argument("--tol", type=float, default=None)
    p_lam.add_argument("--truncate-fit", action="store_true",
                       help="fit the truncation growth of a divergent moment")
    p_lam.add_argument("--output", default=None)
    p_lam.set_defaults(func=cmd_lambda)

    p_scan = sub.add_parser("scan", help="continuity certificates over an s grid")
    p_scan.add_argument("--mu", type=float, required=True)
    p_scan.add_argument("--p", type=int, choices=(0, 1, 2), required=True)
    p_scan.add_argument("--s-grid", required=True,
                        help="start:stop:step or comma-separated values")
    p_scan.add_argument("--lattice", type=_lattice, default=(40, 40), metavar="J,K")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--output", default=None)
    p_scan.set_defaults(func=cmd_scan)

    p_ver = sub.add_parser("verify", help="run the invariant suites")
    p_ver.add_argument("--suite", default=None, choices=sorted(suites.SUITES),
                       help="run a single suite instead of all")
    p_ver.add_argument("--seed", type=int, default=20240901)
    p_ver.add_argument("--self-test", action="store_true",
                       help="inject a wrong recursion constant; must exit 1")
    p_ver.add_argument("--config", default=None,
                       help="JSON config file (default: $BERGSOB_CONFIG)")
    p_ver.add_argument("--tol", action="append", metavar="KEY=VAL",
                       help="tolerance override (repeatable)")
    p_ver.add_argument("--grid", action="append", metavar="KEY=VAL",
                       help="grid override, JSON value (repeatable)")
    p_ver.add_argument("--output", default=None)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
