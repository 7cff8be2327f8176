"""Command line entry point: ``intelliad <subcommand> [options]``."""

import argparse
import logging
import sys

from . import pipeline
from .errors import IntelliAdError


def _common(parser):
    parser.add_argument("--config", help="workspace config JSON (default: $INTELLIAD_CONFIG)")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="seed for k-means and simulation")
    parser.add_argument("--k", type=int, help="number of phrase clusters (default 4)")
    parser.add_argument("--rating-cutoff", type=int,
                        help="only reviews rated below this count as complaints (default 3)")
    parser.add_argument("--runs", type=int, help="runs per configuration (default 4)")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="intelliad",
        description="Ad integration identification, ad cost profiling and review analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="identify ad networks, formats and ad counts")
    _common(p)
    p.add_argument("apps", nargs="*", help="decompiled app trees or .dex files "
                                           "(default: every entry of the config's apps dir)")

    p = sub.add_parser("simulate", help="generate synthetic measurement sessions")
    _common(p)

    p = sub.add_parser("profile", help="compute cost vectors, deltas and increase rates")
    _common(p)
    p.add_argument("manifests", nargs="*", help="session manifests (default: all under traces/)")
    p.add_argument("--baseline", action="append", default=[],
                   help="prototype-app session manifest (repeatable)")

    p = sub.add_parser("reviews", help="mine ad reviews and rate cost types per scheme")
    _common(p)

    p = sub.add_parser("correlate", help="correlate measured costs with review ratings")
    _common(p)
    p.add_argument("--observations", help="CSV of scheme,cost_type,measured,rating to "
                                          "correlate instead of the stage outputs")
    p.add_argument("--granularity", choices=("scheme", "app"))

    p = sub.add_parser("report", help="write final tables and summary")
    _common(p)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"out": args.out, "seed": args.seed, "k": args.k,
                 "rating_cutoff": args.rating_cutoff,
                 "granularity": getattr(args, "granularity", None)}
    if args.runs is not None and args.command != "simulate":
        overrides["runs_expected"] = args.runs
    try:
        cfg = pipeline.load_config(args.config, overrides)
        if args.command == "inspect":
            errors = pipeline.run_inspect(cfg, args.apps or None)
        elif args.command == "simulate":
            errors = pipeline.run_simulate(cfg, runs=args.runs)
        elif args.command == "profile":
            errors = pipeline.run_profile(cfg, args.manifests or None, args.baseline)
        elif args.command == "reviews":
            errors = pipeline.run_reviews(cfg)
        elif args.command == "correlate":
            errors = pipeline.run_correlate(cfg, args.observations)
        else:
            errors = pipeline.run_report(cfg)
    except IntelliAdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
