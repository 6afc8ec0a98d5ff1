"""Control stage: evaluates the limit-cycle control law for the window."""
import logging

from controller.law import clamped_control
from pipeline import LoopContext, LoopStage

logger = logging.getLogger(__name__)


class ControlStage(LoopStage):
    """
    Duty cycle with parameters blended at the velocity estimate, clamped to the plant limits.

    Event feedback blends at the observer's estimate and then propagates the
    observer with the applied command; oracle feedback blends at the true velocity.

    Can be configured via environment variables:
    - CONTROL_ENABLED=false to disable
    - CONTROL_PRIORITY=<num> to override default priority
    """

    STAGE_NAME = "CONTROL"
    DEFAULT_PRIORITY = 60

    def process(self, ctx: LoopContext) -> None:
        rig = ctx.rig
        estimate = ctx.data["feedback"]
        observer = rig.observer
        xdot = observer.velocity if observer is not None else estimate.est_xdot
        u, clamped = clamped_control(rig.controller, rig.plant, ctx.t_start, estimate.fb, xdot)
        if observer is not None:
            observer.predict(ctx.window, u)
        ctx.data["u_cmd"] = u
        ctx.data["clamped"] = clamped
        if clamped:
            rig.clamped_windows += 1
