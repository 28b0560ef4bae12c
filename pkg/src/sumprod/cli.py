"""Command line entry point: ``sumprod verify | experiment | transform``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import spectral
from .errors import SumprodError
from .explorer import ExperimentConfig, emit_report, format_report, run_suite, summarize
from .field import FieldSpec
from .setstats import read_subset
from .verification import results_csv, run_all


def cmd_verify(args) -> int:
    results = run_all()
    for r in results:
        print(r.line())
    if args.output:
        Path(args.output).write_text(results_csv(results), newline="\n")
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    out = dict(cfg.output or {})
    path = args.output or out.get("path")
    fmt = args.format or out.get("format") or "csv"
    rows = run_suite(cfg, workers=args.workers)
    if path:
        emit_report(rows, fmt, path)
    else:
        sys.stdout.write(format_report(rows, fmt))
    s = summarize(rows)
    print(f"rows={s['rows']} failed={s['failed']} errors={s['errors']} "
          f"min_ratio={s['min_ratio']} median_ratio={s['median_ratio']}", file=sys.stderr)
    return 1 if s["failed"] else 0


def cmd_transform(args) -> int:
    F_file, S = read_subset(args.set)
    F = FieldSpec.parse(args.field) if args.field else F_file
    if F != F_file:
        print(f"error: set file is over {F_file}, not {F}", file=sys.stderr)
        return 2
    transform = spectral.fourier_fast if args.fast else spectral.fourier_forward
    fhat = transform(F, S.bits.astype(np.float64))
    fhat = np.where(np.abs(fhat.real) < 1e-12, 0, fhat.real) + 1j * np.where(
        np.abs(fhat.imag) < 1e-12, 0, fhat.imag)
    print("m,re,im")
    for m, v in enumerate(fhat):
        print(f"{m},{v.real:.12g},{v.imag:.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumprod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the fixed verification suite")
    v.add_argument("--output", help="also write per-criterion results as CSV")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a sweep described by a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--output", help="report path (default: config output.path, else stdout)")
    e.add_argument("--format", choices=["csv", "json"])
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_experiment)

    t = sub.add_parser("transform", help="print the spectrum of a set indicator")
    t.add_argument("--field", help="p^l or p^l/modulus; must match the set file header")
    t.add_argument("--set", required=True)
    t.add_argument("--fast", action="store_true", help="use the FFT path")
    t.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SumprodError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
