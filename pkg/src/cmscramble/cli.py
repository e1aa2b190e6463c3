"""Command-line entry point: run figure presets or config files and export tables."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import DEFAULT_SEED, DEFAULT_STEPS, DEFAULT_XI, TMSV_CONVENTIONS
from .ensembles import DEFAULT_SAMPLES
from .errors import ConfigError, UnphysicalStateError
from .export import FORMATS, export, load_config, parse_overrides, run_sweep
from .interferometer import SEGMENT_ORDERS
from .presets import PRESETS

OUT_ENV = "CMSCRAMBLE_OUT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNPHYSICAL = 3
EXIT_IO = 4

log = logging.getLogger("cmscramble")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cmscramble",
        description="Collision-model scrambling of Gaussian states: run a figure preset or a "
                    "JSON config and write one table per series plus a metadata sidecar.",
        epilog=f"Defaults: xi={DEFAULT_XI}, steps={DEFAULT_STEPS}, seed={DEFAULT_SEED}, "
               f"{DEFAULT_SAMPLES} samples for disorder ensembles. Exit codes: 0 ok, "
               "2 config error, 3 physicality failure, 4 I/O error.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), help="figure preset to run")
    src.add_argument("--config", type=Path, help="JSON config, series list, or metadata sidecar")
    p.add_argument("--list-presets", action="store_true", help="print preset names and exit")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key in every series (repeatable); dotted keys reach "
                        "nested fields, e.g. squeeze.r=0.5 or eta=9*pi/20")
    p.add_argument("--samples", type=int, help="ensemble size for series with random disorder")
    p.add_argument("--seed", type=int, help="root seed for disorder draws")
    p.add_argument("--steps", type=int, help="number of collision steps")
    p.add_argument("--segment-order", choices=SEGMENT_ORDERS, help="collision order within a step")
    p.add_argument("--tmsv-convention", choices=TMSV_CONVENTIONS,
                   help="appendix: cosh(2 xi) marginals; charfn: cosh(xi)")
    p.add_argument("--format", choices=FORMATS, default="csv", help="series table format")
    p.add_argument("--out", type=Path, default=None,
                   help=f"output directory (default: ${OUT_ENV} or ./results)")
    p.add_argument("--workers", type=int, default=1, help="processes for ensemble samples")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.list_presets:
        for name in sorted(PRESETS):
            print(name)
        return EXIT_OK
    if args.preset is None and args.config is None:
        print("error: one of --preset or --config is required", file=sys.stderr)
        return EXIT_CONFIG

    try:
        overrides = parse_overrides(args.overrides)
        for key, value in (("seed", args.seed), ("steps", args.steps),
                           ("segment_order", args.segment_order),
                           ("tmsv_convention", args.tmsv_convention)):
            if value is not None:
                overrides.append((key, value))
        sweep = load_config(args.preset or args.config, overrides, args.samples)
        if not sweep.series:
            print("error: the sweep contains no series; nothing to run", file=sys.stderr)
            return EXIT_CONFIG
        results = run_sweep(sweep, workers=args.workers)
        out = args.out or Path(os.environ.get(OUT_ENV, "results"))
        paths = export(sweep, results, out, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnphysicalStateError as exc:
        print(f"physicality failure: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in paths:
        print(path)
    return EXIT_OK
