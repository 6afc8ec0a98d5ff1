"""Actuation stage: holds the command over the window and advances plant and sensor."""
import logging

from pipeline import LoopContext, LoopStage

logger = logging.getLogger(__name__)


class ActuationStage(LoopStage):
    """
    Zero-order hold of u_cmd over dt with RK4 sub-steps and one DVS step each.

    Can be configured via environment variables:
    - ACTUATION_ENABLED=false to disable
    - ACTUATION_PRIORITY=<num> to override default priority
    """

    STAGE_NAME = "ACTUATION"
    DEFAULT_PRIORITY = 40

    def process(self, ctx: LoopContext) -> None:
        u = ctx.data.get("u_cmd", 0.0)
        ctx.data["measured"] = ctx.rig.advance(ctx.window, u)
