"""Command line entry point: ``python -m gohberg_bench {run,selftest,gallery}``."""

import argparse
import logging
import sys

from .config import LOG_LEVEL
from .errors import ConfigError
from .runner import run_config
from .selftest import CHECKS, passed, run_selftest
from .symbols.gallery import describe
from .utils import Colors, print_checks, print_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gohberg_bench",
        description="Numerical checks of Gohberg-type lower bounds for pseudodifferential operators.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the experiments of a JSON config")
    run.add_argument("config", help="path to the experiment config")
    run.add_argument("--out", default=None, help="output directory (default: the config's 'output')")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--verbose", action="store_true", help="log per-level numbers")

    selftest = commands.add_parser("selftest", help="exact-algebra checks on Z_8")
    selftest.add_argument("--inject-fault", choices=CHECKS, default=None, help="perturb the named check")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--verbose", action="store_true")

    gallery = commands.add_parser("gallery", help="named symbols available to configs")
    gallery.add_argument("--list", action="store_true", required=True, help="list the gallery")
    return parser


def _run(args) -> int:
    try:
        code, rows = run_config(args.config, args.out, args.seed)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        print(f"{Colors.RED}{e}{Colors.RESET}", file=sys.stderr)
        return EXIT_CONFIG
    print_summary(rows)
    return code


def _selftest(args) -> int:
    results = run_selftest(args.inject_fault, args.seed)
    print_checks(results)
    return EXIT_OK if passed(results) else EXIT_FAIL


def _gallery(args) -> int:
    for entry in describe():
        print(f"  {Colors.CYAN}{entry['name']:<16}{Colors.RESET} {entry['description']}")
    return EXIT_OK


def main(argv=None) -> int:
    """Parse arguments, configure logging and dispatch; returns the exit code."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if getattr(args, "verbose", False) else LOG_LEVEL
    logging.basicConfig(level=level)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "selftest":
            return _selftest(args)
        return _gallery(args)
    except Exception as e:
        logger.error(f"An error occurred: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
