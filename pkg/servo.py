#!/usr/bin/env python3
"""
evservo - event-based visual servoing simulator

A camera on a one-axis robot watches a displayed intensity pattern. An event
camera model turns the motion into signed events, two pixel kernels turn the
events into state estimates, and a limit-cycle controller closes the loop.

Architecture:
  - Control loop: per-window stages (sensing, feedback, control, actuation, recording)
  - Auto-discovery: stages and experiments are detected at startup
  - Experiments: simulate, calibrate, bounds, stability, sweep (one sub-command each)
"""

import logging
import os
import sys

from dotenv import load_dotenv

# .env may set the level and the output directory
load_dotenv()

SIM_LOG_LEVEL = os.getenv('EVSERVO_LOG_LEVEL', 'WARNING').upper()
SIM_LEVELS = logging.getLevelNamesMapping()
logging.basicConfig(
    format='%(asctime)s %(levelname)-7s %(name)s: %(message)s',
    level=SIM_LEVELS.get(SIM_LOG_LEVEL, logging.WARNING)
)
logger = logging.getLogger("servo")

from harness.cli import main  # noqa: E402


if __name__ == '__main__':
    if SIM_LOG_LEVEL not in SIM_LEVELS:
        logger.warning(f"[SERVO] Unknown EVSERVO_LOG_LEVEL '{SIM_LOG_LEVEL}', using WARNING")
    sys.exit(main())
