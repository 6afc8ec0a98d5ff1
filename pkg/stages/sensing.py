"""Sensing stage: picks up the kernel counts the controller may use this window."""
import logging

from pipeline import LoopContext, LoopStage

logger = logging.getLogger(__name__)


class SensingStage(LoopStage):
    """
    Reads the counts of window n - latency_windows.

    Can be configured via environment variables:
    - SENSING_ENABLED=false to disable
    - SENSING_PRIORITY=<num> to override default priority
    """

    STAGE_NAME = "SENSING"
    DEFAULT_PRIORITY = 100

    def process(self, ctx: LoopContext) -> None:
        rig = ctx.rig
        ctx.data["start"] = rig.state
        ctx.data["offset"] = rig.offset(ctx.t_start)
        m1, m2 = rig.delayed_counts(ctx.window)
        ctx.data["m1"] = m1
        ctx.data["m2"] = m2
        if m1 is None and m2 is None:
            logger.debug(f"[LOOP] Window {ctx.window}: no elapsed counting window yet")
