"""Command-line entry point: ``run``, ``converge`` and ``list-cases``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .limiter import BoundViolationError
from .models import CASES
from .runner import ConfigError, converge, format_table, parse_config, run_case, write_convergence

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case", help="benchmark name (see list-cases)")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--scheme", choices=("hermite_linear", "hermite_weno"))
    p.add_argument("--limiter", choices=("on", "off"))
    p.add_argument("--cfl", type=float)
    p.add_argument("--tfinal", type=float)
    p.add_argument("--backend", choices=("numpy", "cython"))
    p.add_argument("--output", help="output directory or file")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mppflow", description="High-order MPP transport solver")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one case and write diagnostics")
    _add_common(run)
    run.add_argument("--nx", type=int)
    run.add_argument("--ny", type=int)
    run.add_argument("--diag-every", dest="diag_every", type=int)
    run.add_argument("--snapshot-times", dest="snapshot_times", help="comma separated output times")

    conv = sub.add_parser("converge", help="error/order table over doubled meshes")
    _add_common(conv)
    conv.add_argument("--meshes", required=True, help="comma separated N values, e.g. 32,64,128")

    sub.add_parser("list-cases", help="print the available benchmarks")
    return parser


def _flags(args, keys) -> dict:
    return {k: getattr(args, k, None) for k in keys}


def _cmd_run(args) -> int:
    keys = ("case", "scheme", "limiter", "cfl", "tfinal", "backend", "output", "nx", "ny", "diag_every",
            "snapshot_times")
    cfg = parse_config(_flags(args, keys), args.config)
    result = run_case(cfg)
    last = result.tracker.records[-1]
    print(f"{cfg.case}: {result.steps} steps to t = {result.time:.6g}; min {last.min:.6e} max {last.max:.6e}; "
          f"output in {cfg.output}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    try:
        meshes = [int(m) for m in args.meshes.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"meshes: cannot parse {args.meshes!r}") from None
    keys = ("case", "scheme", "limiter", "cfl", "tfinal", "backend")
    flags = _flags(args, keys)
    flags["nx"] = min(meshes) if meshes else None
    cfg = parse_config(flags, args.config)
    rows = converge(cfg, meshes)
    print(format_table(rows))
    if args.output:
        out = Path(args.output)
        if out.suffix != ".csv":
            out.mkdir(parents=True, exist_ok=True)
            out = out / "convergence.csv"
        else:
            out.parent.mkdir(parents=True, exist_ok=True)
        write_convergence(out, rows)
    return EXIT_OK


def _cmd_list(_args) -> int:
    for name, case in CASES.items():
        mark = " [long]" if case.long_run else ""
        print(f"{name:18s} {case.kind:22s} {case.n_x}x{case.n_y} t={case.t_final:g}{mark}  {case.description}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "converge": _cmd_converge, "list-cases": _cmd_list}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BoundViolationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
