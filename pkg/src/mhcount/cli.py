"""``mhcount`` command line: count, verify, scan-density, charsum.

Every subcommand writes a UTF-8 CSV whose first line is
``# schema=<subcommand>/v1``. Exit codes: 0 success, 1 budget or
verification failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

from .config import ConfigError, ExperimentConfig, load_config
from .counting import DEFAULT_BUDGET
from .errors import BudgetExceeded
from .experiments import (CHARSUM_COLUMNS, COUNT_COLUMNS, DENSITY_COLUMNS, VERIFY_COLUMNS, RunOptions,
                          charsum_rows, count_rows, density_rows, verify_rows)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        s = format(v, ".12g")
        return "0" if s == "-0" else s
    return str(v)


def render_csv(schema: str, columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={schema}/v1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON experiment config")
    common.add_argument("--workers", type=_positive, default=argparse.SUPPRESS,
                        help="worker processes (default: machine parallelism)")
    common.add_argument("--budget", type=_positive, default=argparse.SUPPRESS,
                        help=f"evaluation cap (default {DEFAULT_BUDGET})")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output CSV path (default stdout)")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="fill elapsed_s columns (makes output non-reproducible)")

    parser = _Parser(prog="mhcount", parents=[common],
                     description="Exact counts and character-sum checks for Markoff-Hurwitz type hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("count", parents=[common], help="integer points N* per box")
    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("--suite", action="append", dest="suites", default=None,
                   help="suite to run (repeatable); default from config or the standard set")
    v.add_argument("--perturb", action="append", default=[], help="inject a deliberate fault into a suite")
    sub.add_parser("scan-density", parents=[common], help="N* and T across an h grid")
    sub.add_parser("charsum", parents=[common], help="character and exponential sum reports")
    return parser


def _options(args, cfg: ExperimentConfig) -> RunOptions:
    workers = getattr(args, "workers", None) or cfg.workers or os.cpu_count() or 1
    budget = getattr(args, "budget", None) or cfg.budget or DEFAULT_BUDGET
    return RunOptions(workers=workers, budget=budget, timing=getattr(args, "timing", False))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if getattr(args, "config", None) else ExperimentConfig()
        opts = _options(args, cfg)
        status = EXIT_OK
        if args.command == "count":
            text = render_csv("count", COUNT_COLUMNS, count_rows(cfg, opts))
        elif args.command == "scan-density":
            text = render_csv("scan-density", DENSITY_COLUMNS, density_rows(cfg, opts))
        elif args.command == "charsum":
            text = render_csv("charsum", CHARSUM_COLUMNS, charsum_rows(cfg, opts))
        else:
            rows = verify_rows(cfg, args.suites, args.perturb)
            text = render_csv("verify", VERIFY_COLUMNS, rows)
            if any(r["status"] != "pass" for r in rows):
                status = EXIT_FAIL
    except ConfigError as exc:
        print(f"mhcount: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"mhcount: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, getattr(args, "out", None))
    return status


if __name__ == "__main__":
    sys.exit(main())
