"""Batch front end: solve instances from CSV or JSON, generate instances,
cross-check against brute force, and benchmark.

Row indices are 1-based on this surface; everything below it is 0-based.
Exit codes: 0 ok, 1 cross-check mismatch, 2 input error, 3 enumeration
budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import statistics
import sys
import time

import numpy as np

from .core import InputError, RectList
from .oracle import (
    DEFAULT_MAX_SUBSETS,
    EnumerationBudgetError,
    oracle_report,
)
from .search import SolveResult, solve

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

_INT_RE = re.compile(r"[+-]?\d+")


def _parse_scalar(text: str):
    text = text.strip()
    if _INT_RE.fullmatch(text):
        return int(text)
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"cannot parse coordinate {text!r}") from None
    return value


def load_instance(path: str) -> RectList:
    """Read a headerless CSV of 2d columns, or JSON {"rects": [[...]]}.
    Integral decimal fields become ints, everything else floats."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON instance: {exc}") from None
        rows = payload.get("rects")
        if not isinstance(rows, list):
            raise InputError('JSON instance needs a "rects" list')
        return RectList(rows)
    rows = []
    for record in csv.reader(io.StringIO(text)):
        if not record or all(not field.strip() for field in record):
            continue
        rows.append(tuple(_parse_scalar(field) for field in record))
    if not rows:
        raise InputError(f"no rows found in {path}")
    return RectList(rows)


def generate_instance(
    n: int,
    d: int,
    *,
    lo: int = 0,
    hi: int = 100,
    dup_prob: float = 0.0,
    nested: bool = False,
    seed: int = 0,
) -> np.ndarray:
    """Deterministic instance as an (n, 2d) int matrix with lo <= hi per
    axis.  dup_prob is the chance each raw endpoint reuses a previously
    emitted value from its column, manufacturing coincident coordinates;
    nested ignores the range and emits concentric boxes instead."""
    if n < 1 or d < 1:
        raise InputError("need n >= 1 and d >= 1")
    if nested:
        return np.array([[-k, k] * d for k in range(1, n + 1)], dtype=np.int64)
    if not 0.0 <= dup_prob <= 1.0:
        raise InputError(f"dup_prob must be in [0, 1], got {dup_prob}")
    if lo > hi:
        raise InputError(f"empty coordinate range [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    if dup_prob == 0.0:
        raw = rng.integers(lo, hi + 1, size=(n, 2 * d))
        return np.sort(raw.reshape(n, d, 2), axis=2).reshape(n, 2 * d)
    pools: list[list[int]] = [[] for _ in range(2 * d)]
    out = np.empty((n, 2 * d), dtype=np.int64)
    for i in range(n):
        raw = []
        for c in range(2 * d):
            pool = pools[c]
            if pool and rng.random() < dup_prob:
                raw.append(pool[int(rng.integers(len(pool)))])
            else:
                raw.append(int(rng.integers(lo, hi + 1)))
        for t in range(d):
            a, b = raw[2 * t], raw[2 * t + 1]
            if a > b:
                a, b = b, a
            out[i, 2 * t] = a
            out[i, 2 * t + 1] = b
            pools[2 * t].append(a)
            pools[2 * t + 1].append(b)
    return out


def _one_based(indices) -> list[int]:
    return [j + 1 for j in indices]


def _report_dict(rects: RectList, budget: int, result: SolveResult) -> dict:
    answers = []
    for a in result.answers:
        answers.append(
            {
                "s": a.s,
                "dim": a.best.dim,
                "vol": a.best.vol,
                "achieved_with": a.achieved_with,
                "discard_minimal": _one_based(a.discard_minimal),
                "discard_exact": _one_based(a.discard_exact),
                "empty": a.empty,
            }
        )
    return {
        "n": rects.n,
        "d": rects.ndim,
        "r": budget,
        "answers": answers,
        "stats": {
            "nodes": result.stats.nodes,
            "calls": result.stats.calls,
            "call_bound": result.stats.call_bound,
            "elapsed": result.stats.elapsed,
        },
    }


def _emit_report(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(
        ["s", "dim", "vol", "achieved_with", "discard_minimal", "discard_exact", "empty"]
    )
    for a in report["answers"]:
        writer.writerow(
            [
                a["s"],
                a["dim"],
                a["vol"],
                a["achieved_with"],
                ",".join(map(str, a["discard_minimal"])) or "-",
                ",".join(map(str, a["discard_exact"])) or "-",
                int(a["empty"]),
            ]
        )


def _cross_check(rects: RectList, budget: int, result: SolveResult, limit: int):
    """(dim, vol) comparison per s against brute force; discard sets are
    tie-dependent and deliberately not compared."""
    truth = oracle_report(rects, budget, max_subsets=limit)
    mismatches = []
    for answer, entry in zip(result.answers, truth):
        if (answer.best.dim, answer.best.vol) != (entry.best.dim, entry.best.vol):
            mismatches.append(
                f"s={answer.s}: search ({answer.best.dim}, {answer.best.vol}) "
                f"!= brute force ({entry.best.dim}, {entry.best.vol})"
            )
    return mismatches


def _cmd_solve(args) -> int:
    rects = load_instance(args.input)
    if not 0 < args.r < rects.n:
        raise InputError(f"--r must satisfy 0 < r < {rects.n}, got {args.r}")
    result = solve(rects, args.r, selection=args.selection, seed=args.seed)
    report = _report_dict(rects, args.r, result)
    _emit_report(report, args.format, sys.stdout)
    if args.check:
        mismatches = _cross_check(rects, args.r, result, args.oracle_budget)
        if mismatches:
            for line in mismatches:
                print(f"check: {line}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"check: all {args.r + 1} answers match brute force", file=sys.stderr)
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.n < 2:
        raise InputError(f"--n must be at least 2, got {args.n}")
    rows = generate_instance(
        args.n,
        args.d,
        lo=args.lo,
        hi=args.hi,
        dup_prob=args.dup_prob,
        nested=args.nested,
        seed=args.seed,
    )
    if args.format == "json":
        json.dump({"rects": rows.tolist()}, sys.stdout)
        sys.stdout.write("\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerows(rows.tolist())
    return EXIT_OK


def _cmd_check(args) -> int:
    rects = load_instance(args.input)
    if not 0 < args.r < rects.n:
        raise InputError(f"--r must satisfy 0 < r < {rects.n}, got {args.r}")
    result = solve(rects, args.r, selection=args.selection, seed=args.seed)
    mismatches = _cross_check(rects, args.r, result, args.oracle_budget)
    for answer in result.answers:
        status = "MISMATCH" if any(f"s={answer.s}:" in m for m in mismatches) else "ok"
        print(f"s={answer.s}: dim={answer.best.dim} vol={answer.best.vol} {status}")
    if mismatches:
        for line in mismatches:
            print(f"check: {line}", file=sys.stderr)
        print("FAIL")
        return EXIT_MISMATCH
    print("PASS")
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        sizes = [int(part) for part in args.sizes.split(",") if part]
    except ValueError:
        raise InputError(f"bad --sizes list {args.sizes!r}") from None
    if not sizes:
        raise InputError("empty --sizes list")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "selection", "seconds", "nodes", "calls", "call_bound"])
    for n in sizes:
        if n <= args.r:
            raise InputError(f"size {n} not above budget {args.r}")
        rows = generate_instance(
            n, args.d, lo=0, hi=args.hi, dup_prob=args.dup_prob, seed=args.seed
        )
        rects = RectList(rows)
        backends = ["numpy", "python"] if rects.as_array() is not None else ["python"]
        for backend in backends:
            solve(rects, args.r, selection=backend)  # warm-up
            times = []
            result = None
            for _ in range(args.reps):
                t0 = time.perf_counter()
                result = solve(rects, args.r, selection=backend)
                times.append(time.perf_counter() - t0)
            writer.writerow(
                [
                    n,
                    backend,
                    f"{statistics.median(times):.6f}",
                    result.stats.nodes,
                    result.stats.calls,
                    result.stats.call_bound,
                ]
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxprune",
        description="Discard a few axis-aligned boxes so the rest overlap "
        "as much as possible (indices printed 1-based).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance file")
    p_solve.add_argument("--input", required=True, help="CSV or JSON instance file")
    p_solve.add_argument("--r", type=int, required=True, help="discard budget")
    p_solve.add_argument("--format", choices=("json", "tsv"), default="json")
    p_solve.add_argument(
        "--check", action="store_true", help="cross-check answers against brute force"
    )
    p_solve.add_argument("--seed", type=int, default=0, help="selection pivot seed")
    p_solve.add_argument(
        "--selection", choices=("auto", "numpy", "python"), default="auto"
    )
    p_solve.add_argument("--oracle-budget", type=int, default=DEFAULT_MAX_SUBSETS)
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="emit a deterministic random instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--d", type=int, required=True)
    p_gen.add_argument("--lo", type=int, default=0)
    p_gen.add_argument("--hi", type=int, default=100)
    p_gen.add_argument("--dup-prob", type=float, default=0.0)
    p_gen.add_argument("--nested", action="store_true")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--format", choices=("csv", "json"), default="csv")
    p_gen.set_defaults(func=_cmd_gen)

    p_check = sub.add_parser("check", help="compare search and brute force")
    p_check.add_argument("--input", required=True)
    p_check.add_argument("--r", type=int, required=True)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument(
        "--selection", choices=("auto", "numpy", "python"), default="auto"
    )
    p_check.add_argument("--oracle-budget", type=int, default=DEFAULT_MAX_SUBSETS)
    p_check.set_defaults(func=_cmd_check)

    p_bench = sub.add_parser("bench", help="time both selection backends")
    p_bench.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    p_bench.add_argument("--r", type=int, required=True)
    p_bench.add_argument("--d", type=int, required=True)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--hi", type=int, default=10**6)
    p_bench.add_argument("--dup-prob", type=float, default=0.0)
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationBudgetError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
