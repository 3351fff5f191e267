"""Command-line front end: exact counts, growth constants, certification,
and self-verification, with machine-readable output and a persistent cache.

Exit codes: 0 success, 1 failed verification check, 2 domain or resource
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import mpmath as mp

from . import bounds as tb
from . import counting as tc
from . import fredholm as tf
from . import series as ts
from .geometry import brute_force_count, rectangle

LONG_RUN_AREA = 64          # m*n above this needs --allow-long
LONG_RUN_DIGITS = 150       # c3 digits above this needs --allow-long


@dataclass
class RunConfig:
    """Validated per-invocation settings shared by every subcommand."""

    command: str
    output: str = "plain"
    threads: int = 1
    cache_dir: str | None = None
    allow_long: bool = False
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.threads < 1:
            raise ValueError("--threads must be >= 1")
        if args.output not in ("plain", "json", "csv"):
            raise ValueError(f"unknown output format {args.output!r}")
        extras = {k: v for k, v in vars(args).items()
                  if k not in ("command", "output", "threads", "cache_dir",
                               "allow_long", "func")}
        return cls(command=args.command, output=args.output,
                   threads=args.threads, cache_dir=args.cache_dir,
                   allow_long=args.allow_long, extras=extras)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, default=str))
    elif fmt == "csv":
        keys = list(report)
        print(",".join(keys))
        print(",".join(str(report[k]) for k in keys))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")


def _cache_from(cfg: RunConfig) -> tc.CountCache | None:
    directory = cfg.cache_dir or os.environ.get(tc.CACHE_ENV_VAR)
    return tc.CountCache(directory) if directory else None


def cmd_count(args, cfg: RunConfig) -> int:
    m, n = args.m, args.n
    if m * n > LONG_RUN_AREA and not cfg.allow_long:
        print(f"refusing m*n = {m * n} > {LONG_RUN_AREA} without --allow-long",
              file=sys.stderr)
        return 2
    cache = _cache_from(cfg)
    primes = [int(p) for p in args.primes.split(",")] if args.primes else None
    t0 = time.perf_counter()
    try:
        value = tc.count_rectangle(m, n, mode=args.mode, primes=primes,
                                   threads=cfg.threads, cache=cache)
    except (tc.CountingError, tc.StateBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    seconds = time.perf_counter() - t0
    report = {
        "command": "count",
        "inputs": {"m": m, "n": n, "mode": args.mode},
        "result": str(value),
        "seconds": round(seconds, 6),
    }
    if n >= 1:
        report["capacity"] = round(math.log2(value) / (m * n), 7)
    _emit(report, cfg.output)
    return 0


def cmd_c2(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    alpha, c2 = ts.alpha_c2(dps=args.digits)
    report = {
        "command": "c2",
        "inputs": {"digits": args.digits},
        "result": mp.nstr(c2, args.digits),
        "alpha": mp.nstr(alpha, args.digits),
        "digits": args.digits,
        "seconds": round(time.perf_counter() - t0, 6),
    }
    _emit(report, cfg.output)
    return 0


def cmd_c3(args, cfg: RunConfig) -> int:
    if args.digits > LONG_RUN_DIGITS and not cfg.allow_long:
        print(f"refusing digits > {LONG_RUN_DIGITS} without --allow-long",
              file=sys.stderr)
        return 2
    ctx = tf.PrecisionContext(digits=args.digits, nodes=args.nodes)
    bracket = tf.RootBracket()
    if args.bracket:
        from fractions import Fraction
        lo, hi = (Fraction(part) for part in args.bracket.split(","))
        bracket = tf.RootBracket(lo, hi)
    t0 = time.perf_counter()
    try:
        res = tf.solve_x0_c3(ctx, bracket=bracket)
    except tf.FredholmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    seconds = time.perf_counter() - t0
    certified = tb.audited_error_estimate(args.nodes)
    report = {
        "command": "c3",
        "inputs": {"nodes": args.nodes, "digits": args.digits},
        "result": mp.nstr(res.c3, args.digits),
        "limit": mp.nstr(res.limit, args.digits),
        "x0": mp.nstr(res.x0, args.digits),
        "residual": mp.nstr(res.residual, 3),
        "certified_error": mp.nstr(certified, 3),
        "digits": args.digits,
        "seconds": round(seconds, 6),
    }
    _emit(report, cfg.output)
    return 0


def cmd_bound_np(args, cfg: RunConfig) -> int:
    c = args.c if args.c is not None else 4 * math.log2((1 + math.sqrt(5)) / 2)
    t0 = time.perf_counter()
    bound, argmax = ts.np_upper_bound(c)
    report = {
        "command": "bound-np",
        "inputs": {"c": c},
        "result": repr(bound),
        "argmax": repr(argmax),
        "seconds": round(time.perf_counter() - t0, 6),
    }
    _emit(report, cfg.output)
    return 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

GOLDEN_TABLE = [
    (5, 1, 252), (5, 2, 182132), (6, 2, 2801708), (7, 2, 43936824),
    (5, 3, 182881520), (8, 2, 698607816), (9, 2, 11224598424),
    (6, 3, 12244184472), (5, 6, 341816489625522032),
]


def _suite_oracle(budget):
    checks = []
    for m, n in [(1, 1), (1, 2), (2, 2), (1, 3), (3, 1), (2, 3)]:
        if budget.exceeded():
            break
        ok = tc.count_rectangle(m, n) == brute_force_count(rectangle(m, n))
        checks.append((f"oracle f({m},{n})", ok, ""))
    return checks


def _suite_tables(budget):
    checks = []
    for m, n, expect in GOLDEN_TABLE:
        if budget.exceeded():
            break
        got = tc.count_rectangle(m, n)
        checks.append((f"table f({m},{n})", got == expect,
                       f"got {got}, expected {expect}"))
    return checks


def _suite_convexity(budget):
    checks = []
    for m, n_max in [(1, 8), (2, 6), (3, 5)]:
        if budget.exceeded():
            break
        flags = tc.convexity_check(m, n_max)
        checks.append((f"log-convexity width {m} up to {n_max}",
                       all(flags), str(flags)))
    return checks


def _suite_series(budget):
    checks = []
    _, c2 = ts.alpha_c2()
    checks.append(("c2 digits", abs(c2 - mp.mpf("2.05256897")) < 5e-9, mp.nstr(c2, 10)))
    hs = ts.Hstar_from_H((0, 1, 2, 14, 86))
    checks.append(("cut-series resummation", hs.coefficients == (1, 1, 3, 19, 125),
                   str(hs.coefficients)))
    checks.append(("width-2 weight-2 coefficient", ts.gstar_coeffs(2)[2] == 44, ""))
    h = tf.h_series(5)
    checks.append(("width-3 series start", h == (0, 1, 2, 14, 86, 712), str(h)))
    return checks


def _suite_bounds(budget):
    checks = []
    for n, expect in [(100, 6.95e-4), (200, 5.60e-15), (300, 3.39e-26)]:
        v = float(tb.audited_error_estimate(n))
        checks.append((f"error-estimate n={n}", abs(v - expect) / expect < 0.03,
                       f"{v:.3e}"))
    n2 = tb.kernel_l2_norm_sq(float(tf.X0_PLUS), 128)
    checks.append(("kernel L2 norm at bracket top", abs(n2 - 0.88525) < 1e-3,
                   f"{n2:.5f}"))
    return checks


def _suite_constants(budget):
    checks = []
    res = tf.solve_x0_c3(tf.PrecisionContext(digits=18, nodes=48))
    checks.append(("c3 to 5 digits", abs(res.c3 - mp.mpf("2.0838497")) < 1e-4,
                   mp.nstr(res.c3, 10)))
    psi = tf.eval_Psi(tf.X0_PLUS, 1.0, digits=20)
    checks.append(("Psi floor value", abs(psi.real - 0.44768) < 5e-5,
                   mp.nstr(psi.real, 8)))
    return checks


SUITES = {
    "oracle": _suite_oracle,
    "tables": _suite_tables,
    "convexity": _suite_convexity,
    "series": _suite_series,
    "bounds": _suite_bounds,
    "constants": _suite_constants,
}


class _Budget:
    def __init__(self, seconds):
        self.deadline = (time.perf_counter() + seconds
                         if seconds is not None else None)

    def exceeded(self):
        return self.deadline is not None and time.perf_counter() > self.deadline


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    budget = _Budget(args.max_seconds)
    rows = []
    failed = 0
    for name in names:
        for label, ok, detail in SUITES[name](budget):
            rows.append((name, label, ok, detail))
            if not ok:
                failed += 1
    width = max(len(r[1]) for r in rows) if rows else 10
    for suite, label, ok, detail in rows:
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {label.ljust(width)}  ({suite})"
        if detail and not ok:
            line += f"  {detail}"
        print(line)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tricount",
        description="Exact counts and growth constants for primitive lattice "
                    "triangulations of rectangles")
    parser.add_argument("--output", choices=("plain", "json", "csv"),
                        default="plain")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--cache-dir", default=None,
                        help=f"count cache directory (or ${tc.CACHE_ENV_VAR})")
    parser.add_argument("--allow-long", action="store_true",
                        help="permit long-running targets")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact rectangle count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("bigint", "modular"), default="bigint")
    p.add_argument("--primes", default=None,
                   help="comma-separated primes for modular mode")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("c2", help="width-2 growth constant")
    p.add_argument("--digits", type=int, default=30)
    p.set_defaults(func=cmd_c2)

    p = sub.add_parser("c3", help="width-3 growth constant")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--bracket", default=None,
                   help="root bracket override, e.g. 16/33,17/35")
    p.set_defaults(func=cmd_c3)

    p = sub.add_parser("bound-np", help="upper bound for all lattice triangulations")
    p.add_argument("--c", type=float, default=None,
                   help="exponent bound for the primitive count")
    p.set_defaults(func=cmd_bound_np)

    p = sub.add_parser("verify", help="run self-verification suites")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--max-seconds", type=float, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "c3" and args.digits is None:
        args.digits = tf.PrecisionContext.for_nodes(args.nodes).digits
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (tc.CountingError, tf.FredholmError, tb.BoundsError,
            ts.SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
