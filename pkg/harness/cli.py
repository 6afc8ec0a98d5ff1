"""
Command-line interface.

    servo.py <experiment> --config PATH [--out DIR] [--seed N] [--quiet]

Exit codes: 0 success, 1 validation failure or aborted run, 2 configuration error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from errors import ConfigError, EvservoError
from harness.config import load_config
from harness.router import ExperimentRouter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
DEFAULT_OUTPUT_DIR = "results"


def build_parser(router: ExperimentRouter) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="servo.py", description="Event-based visual servoing simulator")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for experiment in router.experiments:
        p = sub.add_parser(experiment.EXPERIMENT_NAME, help=experiment.DESCRIPTION)
        p.add_argument("--config", required=True, type=Path, help="TOML configuration file")
        p.add_argument("--out", type=Path, default=None,
                       help=f"output directory (default: $EVSERVO_OUTPUT_DIR or {DEFAULT_OUTPUT_DIR})")
        p.add_argument("--seed", type=int, default=None, help="override sim.seed")
        p.add_argument("--quiet", action="store_true", help="only log errors")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one experiment and print its summary line.

    Returns:
        Process exit code
    """
    router = ExperimentRouter.discover()
    args = build_parser(router).parse_args(argv)
    if args.quiet:
        logging.getLogger().setLevel(logging.ERROR)

    out_dir = args.out or Path(os.getenv("EVSERVO_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))
    experiment = router.get(args.experiment)

    try:
        cfg = load_config(args.config, seed=args.seed)
    except ConfigError as e:
        logger.error(f"[CLI] ✗ Configuration error: {e}")
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    logger.info(f"[CLI] ========== {experiment.EXPERIMENT_NAME.upper()} START ==========")
    try:
        result = experiment.run(cfg, out_dir)
    except ConfigError as e:
        logger.error(f"[CLI] ✗ Configuration error: {e}")
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except EvservoError as e:
        logger.error(f"[CLI] ✗ {experiment.EXPERIMENT_NAME} aborted: {e}", exc_info=True)
        print(f"{experiment.EXPERIMENT_NAME} aborted: {e}", file=sys.stderr)
        return EXIT_FAILED

    print(experiment.summary(result))
    for name, path in sorted(result.files.items()):
        logger.info(f"[CLI]   {name}: {path}")
    logger.info(f"[CLI] ========== {experiment.EXPERIMENT_NAME.upper()} END ==========")
    return EXIT_OK if result.passed else EXIT_FAILED
