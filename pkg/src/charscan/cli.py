"""Command-line front end: scan drivers, report emission, results cache.

Exit codes: 0 success, 2 malformed arguments, 3 violated precondition or
hypothesis, 4 I/O failure (including a held cache lock). The conductor scan
keeps an append-only JSON-lines cache, one record per line, guarded by a
lock file against concurrent runs; reruns skip cached conductors unless
--force, which recomputes and rewrites the file atomically. Rows are
emitted as JSON or CSV with fixed column orders; summaries go to stderr.
For pv-scan, --out names the cache file, so its rows always go to stdout;
thm-a instead writes its report file and prints the chain audit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .arith import SearchExhaustedError, build_spf, sieve_primes
from .characters import legendre_character
from .experiments import (
    _select_ell,
    burgess_scan,
    counterexample_search,
    estimate_delta,
    least_nonresidue,
    lemma_b_report,
    theorem_a_pipeline,
)
from .sums import (
    CompletelyMultiplicativeFunction,
    character_log_sum,
    log_mean,
    max_partial_sum,
    mean,
    pv_ratios,
)

__all__ = ["entry", "main"]

CACHE_ENV = "CHARSCAN_CACHE"
DEFAULT_CACHE = "charscan-cache.jsonl"
DEFAULT_LIMIT = 10**8

SCAN_COLUMNS = [
    "conductor",
    "family",
    "max_abs",
    "argmax",
    "ratio_log",
    "ratio_loglog",
    "timestamp",
]

# 1/(4 sqrt e), the classical conditional barrier for least-nonresidue growth.
_NONRESIDUE_BARRIER = 1.0 / (4.0 * math.exp(0.5))


def _cache_path(args: argparse.Namespace) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE))


class _CacheLock:
    """Exclusive lock-file guard; concurrent runs against one cache fail fast."""

    def __init__(self, cache: Path):
        self.lock = cache.with_name(cache.name + ".lock")

    def __enter__(self) -> "_CacheLock":
        try:
            fd = os.open(self.lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise OSError(
                f"cache is locked by another run ({self.lock} exists)"
            ) from None
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        return self

    def __exit__(self, *exc_info) -> None:
        try:
            os.unlink(self.lock)
        except FileNotFoundError:
            pass


def _load_cache(cache: Path) -> list[dict]:
    if not cache.exists():
        return []
    records = []
    with cache.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                print("warning: skipping malformed cache line", file=sys.stderr)
    return records


def _append_cache(cache: Path, records: Sequence[dict]) -> None:
    with cache.open("a", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
            fh.flush()


def _rewrite_cache(cache: Path, records: Sequence[dict]) -> None:
    tmp = cache.with_name(cache.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    os.replace(tmp, cache)


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    return value


def _render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
        return buf.getvalue()
    return json.dumps(rows, indent=2) + "\n"


def _emit(rows: list[dict], columns: list[str], args: argparse.Namespace) -> None:
    """Write rows as JSON or CSV to --out, or stdout when no path was given."""
    text = _render(rows, columns, args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def _make_function(
    args: argparse.Namespace, limit: int
) -> tuple[str, CompletelyMultiplicativeFunction]:
    cmf = CompletelyMultiplicativeFunction
    if args.f == "ones":
        label, f = "ones", cmf.ones(limit)
    elif args.f == "liouville":
        label, f = "liouville", cmf.liouville(limit)
    else:
        f = cmf.random(limit, np.random.default_rng(args.seed))
        label = f"random(seed={args.seed})"
    if args.flip:
        f = f.flip(args.flip)
        label += "+flip[" + ",".join(str(p) for p in args.flip) + "]"
    return label, f


def _capacity(needed: int, args: argparse.Namespace) -> None:
    if needed > args.limit:
        raise ValueError(
            f"needed table size {needed} exceeds capacity {args.limit}; raise --limit"
        )


def _cmd_pv_scan(args: argparse.Namespace) -> int:
    _capacity(args.pmax, args)
    cache = _cache_path(args)
    with _CacheLock(cache):
        existing = _load_cache(cache)
        seen = {(r["conductor"], r["family"]) for r in existing}
        targets = [
            int(p)
            for p in sieve_primes(args.pmax)
            if p >= args.pmin and p % 4 == args.residue_class
        ]
        todo = [p for p in targets if args.force or (p, "legendre") not in seen]
        new_records: list[dict] = []
        if todo:
            table = build_spf(max(args.pmax, 2))

            def scan_one(p: int) -> dict:
                profile = max_partial_sum(legendre_character(p), table)
                ratios = pv_ratios(profile)
                record = {
                    "conductor": p,
                    "family": "legendre",
                    "max_abs": profile.max_abs,
                    "argmax": profile.argmax,
                    "ratio_log": ratios["ratio_log"],
                    "timestamp": int(time.time()),
                }
                if "ratio_loglog" in ratios:
                    record["ratio_loglog"] = ratios["ratio_loglog"]
                return record

            if args.workers > 1:
                with ThreadPoolExecutor(max_workers=args.workers) as pool:
                    new_records = list(pool.map(scan_one, todo))
            else:
                new_records = [scan_one(p) for p in todo]
            if args.force:
                merged = {(r["conductor"], r["family"]): r for r in existing}
                for record in new_records:
                    merged[(record["conductor"], record["family"])] = record
                _rewrite_cache(cache, [merged[k] for k in sorted(merged)])
            else:
                _append_cache(cache, new_records)

    by_key = {(r["conductor"], r["family"]): r for r in existing}
    for record in new_records:
        by_key[(record["conductor"], record["family"])] = record
    in_range = [
        by_key[(p, "legendre")] for p in targets if (p, "legendre") in by_key
    ]
    sys.stdout.write(_render(in_range, SCAN_COLUMNS, args.format))
    skipped = len(targets) - len(todo)
    if in_range:
        max_log = max(r["ratio_log"] for r in in_range)
        loglogs = [r["ratio_loglog"] for r in in_range if "ratio_loglog" in r]
        loglog_text = f"{max(loglogs):.6f}" if loglogs else "n/a"
        print(
            f"pv-scan: {len(new_records)} new, {skipped} cached; "
            f"max ratio_log={max_log:.6f}; max ratio_loglog={loglog_text}",
            file=sys.stderr,
        )
    else:
        print(
            f"pv-scan: 0 records in range [{args.pmin}, {args.pmax}]",
            file=sys.stderr,
        )
    return 0


def _cmd_burgess_scan(args: argparse.Namespace) -> int:
    _capacity(args.p, args)
    table = build_spf(max(args.p, 2))
    points = burgess_scan(args.p, args.thetas, table)
    rows = [point.to_json() for point in points]
    _emit(rows, ["theta", "t", "s", "ratio"], args)
    print(
        f"burgess-scan: p={args.p}, {len(rows)} points, "
        f"max ratio={max(r['ratio'] for r in rows):.6f}",
        file=sys.stderr,
    )
    return 0


def _cmd_means(args: argparse.Namespace) -> int:
    m = math.floor(args.x)
    _capacity(m, args)
    label, f = _make_function(args, m)
    table = build_spf(max(m, 2))
    rows = [
        {
            "f": label,
            "x": args.x,
            "mean": mean(f, args.x, table),
            "log_mean": log_mean(f, args.x, table),
        }
    ]
    _emit(rows, ["f", "x", "mean", "log_mean"], args)
    return 0


def _cmd_lemma_b(args: argparse.Namespace) -> int:
    m = math.floor(args.x)
    _capacity(m, args)
    if args.trials is not None:
        estimate = estimate_delta(args.c, args.x, args.trials, args.seed)
        rows = [estimate.to_json()]
        _emit(rows, ["delta_hat", "worst_f", "qualifying", "candidates"], args)
        return 0
    label, f = _make_function(args, m)
    table = build_spf(max(m, 2))
    report = lemma_b_report(f, args.x, table, min_x=args.min_x)
    rows = [{"f": label, **report.to_json()}]
    _emit(
        rows,
        [
            "f",
            "x",
            "mean",
            "log_mean",
            "u",
            "conv_mean",
            "gs_bound",
            "ht_envelope",
            "ht_constant",
            "flags",
        ],
        args,
    )
    return 0


def _cmd_thm_a(args: argparse.Namespace) -> int:
    xi = legendre_character(args.p)
    if args.p % 4 != 3:
        raise ValueError(
            f"p = {args.p} violates the parity hypothesis p = 3 mod 4; the "
            "base character must be odd"
        )
    t_p = args.p**args.epsilon
    delta = character_log_sum(xi, t_p) / math.log(t_p)
    ell, _ = _select_ell(delta, args.p)
    q = args.p * ell
    _capacity(q, args)
    table = build_spf(q)
    report = theorem_a_pipeline(args.p, args.epsilon, args.c, table)
    payload = report.to_json()
    payload["timestamp"] = int(time.time())
    out = Path(args.out) if args.out is not None else Path(f"thm-a-{args.p}.json")
    out.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    print(f"p={report.p} epsilon={report.epsilon} c={report.c}")
    print(
        f"t_p={report.t_p:.6g} mean={report.mean_xi:.6g} "
        f"log_mean={report.log_mean_xi:.6g}"
    )
    print(f"delta={report.delta:.6g} ell={report.ell} q={report.q}")
    for label, value in report.chain_lines:
        print(f"  {value:+.9f}  {label}")
    print(
        f"bound audit: lhs={report.lemma_bg_lhs:.9f} "
        f"rhs_main={report.lemma_bg_rhs_main:.9f}"
    )
    print(f"final ratio max|S|/(sqrt(q) log q) = {report.final_ratio:.9f}")
    if report.flags:
        print("flags: " + ", ".join(report.flags))
    print(f"report written to {out}")
    return 0


def _cmd_nonresidue(args: argparse.Namespace) -> int:
    rows = []
    for p in sieve_primes(args.pmax):
        p = int(p)
        if p == 2:
            continue
        n = least_nonresidue(p)
        rows.append(
            {"p": p, "least_nonresidue": n, "exponent": math.log(n) / math.log(p)}
        )
    _emit(rows, ["p", "least_nonresidue", "exponent"], args)
    worst = max(rows, key=lambda r: r["exponent"])
    print(
        f"nonresidue: {len(rows)} odd primes <= {args.pmax}; "
        f"max exponent={worst['exponent']:.6f} at p={worst['p']} "
        f"(1/(4 sqrt e) = {_NONRESIDUE_BARRIER:.6f})",
        file=sys.stderr,
    )
    return 0


def _cmd_counterexample(args: argparse.Namespace) -> int:
    m = math.floor(args.x_max)
    _capacity(m, args)
    records = counterexample_search(args.x_max, args.flip_budget, args.threshold)
    rows = []
    for record in records:
        row = record.to_json()
        row["ratio"] = abs(record.log_mean_at_N) / abs(record.mean_at_N)
        rows.append(row)
    _emit(
        rows,
        ["flipped_primes", "N", "mean_at_N", "log_mean_at_N", "ratio"],
        args,
    )
    print(f"counterexample: {len(rows)} hits", file=sys.stderr)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument(
        "--format", choices=["json", "csv"], default="json", help="output format"
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="worker threads for scans"
    )
    parser.add_argument(
        "--limit",
        type=int,
        default=DEFAULT_LIMIT,
        help="largest factor-table capacity allowed",
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--force", action="store_true", help="recompute cached conductors"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charscan",
        description=(
            "Quadratic character sum scans: partial-sum maxima, short-sum "
            "regimes, mean comparisons, and the conductor-pasting pipeline."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pv-scan", help="scan partial-sum maxima over a prime range")
    p.add_argument("pmin", type=int)
    p.add_argument("pmax", type=int)
    p.add_argument(
        "--residue-class",
        type=int,
        choices=[1, 3],
        default=3,
        help="keep primes in this class mod 4",
    )
    _add_common(p)
    p.set_defaults(handler=_cmd_pv_scan)

    p = sub.add_parser("burgess-scan", help="exact short sums S(p**theta)")
    p.add_argument("p", type=int)
    p.add_argument(
        "--thetas",
        type=float,
        nargs="+",
        default=[0.25, 0.3, 0.4, 0.5, 0.75, 1.0],
    )
    _add_common(p)
    p.set_defaults(handler=_cmd_burgess_scan)

    p = sub.add_parser("means", help="mean and log-mean of a chosen function")
    p.add_argument("x", type=float)
    p.add_argument("--f", choices=["ones", "liouville", "random"], default="liouville")
    p.add_argument("--flip", type=int, nargs="*", default=[])
    _add_common(p)
    p.set_defaults(handler=_cmd_means)

    p = sub.add_parser(
        "lemma-b", help="means report, or a delta estimate with --trials/--c"
    )
    p.add_argument("x", type=float)
    p.add_argument("--f", choices=["ones", "liouville", "random"], default="liouville")
    p.add_argument("--flip", type=int, nargs="*", default=[])
    p.add_argument("--min-x", type=float, default=100.0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--c", type=float, default=None)
    _add_common(p)
    p.set_defaults(handler=_cmd_lemma_b)

    p = sub.add_parser("thm-a", help="run and audit the conductor-pasting pipeline")
    p.add_argument("p", type=int)
    p.add_argument("epsilon", type=float)
    p.add_argument("c", type=float)
    _add_common(p)
    p.set_defaults(handler=_cmd_thm_a)

    p = sub.add_parser("nonresidue", help="least nonresidue for odd primes <= pmax")
    p.add_argument("pmax", type=int)
    _add_common(p)
    p.set_defaults(handler=_cmd_nonresidue)

    p = sub.add_parser(
        "counterexample", help="search flipped Liouville functions for inversions"
    )
    p.add_argument("--x-max", type=float, default=10000.0)
    p.add_argument("--flip-budget", type=int, default=2)
    p.add_argument("--threshold", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(handler=_cmd_counterexample)

    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Range checks on numeric arguments; violations exit 2 before dispatch."""
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    if args.limit < 2:
        parser.error("--limit must be at least 2")
    cmd = args.command
    if cmd == "pv-scan":
        if args.pmin < 2 or args.pmax < args.pmin:
            parser.error("need 2 <= pmin <= pmax")
    elif cmd == "burgess-scan":
        if args.p < 3:
            parser.error("p must be at least 3")
        for theta in args.thetas:
            if not 0 < theta <= 1:
                parser.error("each theta must lie in (0, 1]")
    elif cmd == "means":
        if args.x < 1:
            parser.error("x must be at least 1")
    elif cmd == "lemma-b":
        if args.x < 2:
            parser.error("x must be at least 2")
        if (args.trials is None) != (args.c is None):
            parser.error("--trials and --c must be given together")
        if args.trials is not None and args.trials < 1:
            parser.error("--trials must be positive")
        if args.c is not None and not 0 < args.c <= 1:
            parser.error("--c must lie in (0, 1]")
    elif cmd == "thm-a":
        if args.p < 3:
            parser.error("p must be at least 3")
        if not 0 < args.epsilon < 1:
            parser.error("epsilon must lie in (0, 1)")
        if not 0 < args.c <= 1:
            parser.error("c must lie in (0, 1]")
    elif cmd == "nonresidue":
        if args.pmax < 3:
            parser.error("pmax must be at least 3")
    elif cmd == "counterexample":
        if args.x_max < 100:
            parser.error("--x-max must be at least 100")
        if args.flip_budget < 0:
            parser.error("--flip-budget must be nonnegative")
        if args.threshold < 0:
            parser.error("--threshold must be nonnegative")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except (ValueError, SearchExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())
