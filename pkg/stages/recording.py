"""Recording stage: appends the window's trajectory row and bound sample."""
import logging

from controller.law import reference
from estimator.counting import net_value
from harness.recorder import BoundSample, TrajectoryRecord
from pipeline import LoopContext, LoopStage

logger = logging.getLogger(__name__)


def _net(count) -> float:
    return net_value(count) if count is not None else 0.0


class RecordingStage(LoopStage):
    """
    Can be configured via environment variables:
    - RECORDING_ENABLED=false to disable
    - RECORDING_PRIORITY=<num> to override default priority
    """

    STAGE_NAME = "RECORDING"
    DEFAULT_PRIORITY = 20

    def process(self, ctx: LoopContext) -> None:
        rig = ctx.rig
        start = ctx.data["start"]
        offset = ctx.data["offset"]
        estimate = ctx.data["feedback"]
        ref = reference(rig.controller, ctx.t_start, offset)
        record = TrajectoryRecord(
            t=ctx.t_start,
            x=start.x,
            x_dot=start.x_dot,
            est_x_xdot=estimate.est_x_xdot,
            est_xdot=estimate.est_xdot,
            fb=estimate.fb,
            u_cmd=ctx.data.get("u_cmd", 0.0),
            n_net_k1=_net(ctx.data.get("m1")),
            n_net_k2=_net(ctx.data.get("m2")),
            x_star=ref.x_star,
            xdot_star=ref.xdot_star,
            target=offset,
        )
        sample = None
        measured = ctx.data.get("measured")
        if measured is not None:
            m1, m2 = measured
            t_end = ctx.t_start + rig.dt
            sample = BoundSample(
                t=ctx.t_start, x=start.x, x_dot=start.x_dot, offset=offset,
                n1=net_value(m1) if m1 is not None else None,
                n2=net_value(m2) if m2 is not None else None,
                switched=rig.offset(t_end - 1e-9) != offset,
            )
        rig.recorder.add_record(record, sample)
