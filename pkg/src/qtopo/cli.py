"""Command-line entry point.

    qtopo <mode> --config <path> [--out <dir>] [--seed <n>] [--full-budget]

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure.
"""

import argparse
import sys

from .config import MODES, parse_config
from .errors import ConfigError, NumericsError
from .runner import run

# The full swarm budget reported for the reference computation.
FULL_BUDGET = dict(particles=2000, iters=5000, restarts=1000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtopo",
        description=(
            "Driven-dissipative entanglement toolkit: master-equation "
            "metrics, 2-D FDFD Green's functions, permittivity-map design "
            "and swarm optimisation."
        ),
    )
    parser.add_argument("mode", help=f"one of: {', '.join(MODES)}")
    parser.add_argument("--config", required=True, help="configuration file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override seed")
    parser.add_argument(
        "--full-budget",
        action="store_true",
        help="use the full published swarm budget (2000 x 5000 x 1000)",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0

    if args.mode not in MODES:
        print(
            f"error: unknown mode {args.mode!r}; choose from {', '.join(MODES)}",
            file=sys.stderr,
        )
        return 1

    try:
        cfg = parse_config(args.config)
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    cfg.mode = args.mode
    if args.seed is not None:
        cfg.seed = args.seed
    if args.full_budget:
        cfg.pso.particles = FULL_BUDGET["particles"]
        cfg.pso.iters = FULL_BUDGET["iters"]
        cfg.pso.restarts = FULL_BUDGET["restarts"]

    try:
        out = run(cfg, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericsError, ValueError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
