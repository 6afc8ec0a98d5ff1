"""Feedback stage: turns kernel counts into the x x_dot^2 estimate."""
import logging

from estimator.feedback import FeedbackEstimate, feedback_estimate, oracle_feedback
from pipeline import LoopContext, LoopStage

logger = logging.getLogger(__name__)

NO_FEEDBACK = FeedbackEstimate(est_x_xdot=0.0, est_xdot=0.0, fb=0.0)


class FeedbackStage(LoopStage):
    """
    Event feedback from the lumped constants, or ground truth in oracle mode.

    Can be configured via environment variables:
    - FEEDBACK_ENABLED=false to disable
    - FEEDBACK_PRIORITY=<num> to override default priority
    """

    STAGE_NAME = "FEEDBACK"
    DEFAULT_PRIORITY = 80

    def process(self, ctx: LoopContext) -> None:
        rig = ctx.rig
        if rig.feedback_mode == "oracle":
            start = ctx.data["start"]
            ctx.data["feedback"] = oracle_feedback(start.x, start.x_dot, ctx.data["offset"])
            return

        m1, m2 = ctx.data.get("m1"), ctx.data.get("m2")
        if m1 is None or m2 is None:
            ctx.data["feedback"] = NO_FEEDBACK
            return
        if rig.lumped1 is None or rig.lumped2 is None:
            raise ValueError("event feedback needs both lumped constants")
        estimate = feedback_estimate(m1, m2, rig.lumped1, rig.lumped2)
        ctx.data["feedback"] = estimate
        if rig.observer is not None:
            rig.observer.correct(ctx.window - rig.latency, estimate.est_xdot)
