"""
Simulation rig: the camera on the robot in front of the displayed pattern.

The rig owns everything that changes during a run (robot state, pixel latches,
measured counts, recorded rows) and the fixed objects built from the
configuration. Loop stages and the open-loop runners drive it window by window.
"""

import logging
from collections import deque
from typing import Optional, Sequence, Tuple, Union

from dvs.events import concat_events, empty_events
from dvs.latch import PixelLatchArray
from errors import DivergenceError
from estimator.calibration import LumpedConstant
from estimator.counting import NetCount, ReversalCredit, fractional_net_count, net_event_count
from estimator.kernels import default_kernels
from estimator.observer import VelocityObserver
from harness.config import ExperimentConfig
from harness.recorder import MotionExtrema, TrajectoryRecorder
from plant.dynamics import Policy, RobotState, dynamics_deriv, step_rk4
from scene.pattern import ScenePattern

logger = logging.getLogger(__name__)

Counts = Tuple[Optional[NetCount], Optional[NetCount]]


class Rig:
    """Mutable state of one simulated run."""

    def __init__(self, cfg: ExperimentConfig,
                 lumped: Tuple[Optional[LumpedConstant], Optional[LumpedConstant]] = (None, None),
                 pattern: Optional[ScenePattern] = None):
        """
        Args:
            cfg: Validated configuration
            lumped: (K1, K2) lumped constants for event feedback
            pattern: Pattern override (defaults to the configured one, with schedule)
        """
        self.cfg = cfg
        self.intr = cfg.intrinsics()
        self.pattern = pattern or cfg.pattern()
        self.k1, self.k2 = default_kernels(self.intr, self.pattern,
                                           n_u=cfg.estimator.kernel_width, n_v=cfg.estimator.kernel_height)
        self.dvs_config = cfg.dvs_config()
        roi = [k.rect for k in (self.k1, self.k2) if k is not None]
        self.latches = PixelLatchArray(self.intr, self.dvs_config, roi=roi)
        self.credits = tuple(ReversalCredit(k) if k is not None and self.dvs_config.latched else None
                             for k in (self.k1, self.k2))
        self.plant = cfg.plant_params()
        self.controller = cfg.controller_params()
        self.lumped1, self.lumped2 = lumped

        self.dt = cfg.sim.dt
        self.h = cfg.sim.h
        self.substeps = cfg.substeps
        self.dt_us = cfg.dt_us
        self.h_us = cfg.h_us
        self.n_windows = cfg.n_windows
        self.latency = cfg.controller.latency_windows
        self.feedback_mode = cfg.estimator.feedback
        self.extent = cfg.scene.extent
        self.record_events = cfg.sim.record_events and self.dvs_config.latched
        self.observer = (VelocityObserver(self.plant, self.dt, cfg.estimator.observer_gain)
                         if self.feedback_mode == "events" else None)

        self.state = RobotState(cfg.sim.x0, cfg.sim.xdot0, 0.0)
        self.recorder = TrajectoryRecorder()
        self.measured: deque = deque()
        self.event_chunks: list = []
        self.extrema = MotionExtrema()
        self.clamped_windows = 0

    @property
    def events(self):
        """All recorded events in canonical order."""
        return concat_events(self.event_chunks) if self.event_chunks else empty_events()

    def offset(self, t: float) -> float:
        return self.pattern.center_offset(t)

    def reset(self, x0: Optional[float] = None, xdot0: Optional[float] = None) -> None:
        """Put the robot at rest state (x0, xdot0) at t = 0 and latch every pixel."""
        x0 = self.cfg.sim.x0 if x0 is None else x0
        xdot0 = self.cfg.sim.xdot0 if xdot0 is None else xdot0
        self.state = RobotState(x0, xdot0, 0.0)
        self.latches.reset(self.pattern, x0, 0.0)
        for credit in self.credits:
            if credit is not None:
                credit.reset()
        if self.observer is not None:
            self.observer.reset()
        self.recorder.clear()
        self.measured.clear()
        self.event_chunks = []
        self.extrema = MotionExtrema()
        self.extrema.update(x0 - self.offset(0.0), xdot0, 0.0)
        self.clamped_windows = 0
        logger.debug(f"[RUNNER] Rig reset at x0={x0:.4f} m, xdot0={xdot0:.4f} m/s")

    def delayed_counts(self, window: int) -> Counts:
        """Counts of window n - latency, or (None, None) before any window has elapsed."""
        index = window - self.latency
        if index < 0 or index >= len(self.measured):
            return None, None
        return self.measured[index]

    def advance(self, window: int, u: Union[float, Policy], check_divergence: bool = True) -> Counts:
        """
        Hold u over one window: RK4 sub-steps at h, one DVS step per sub-step.

        Events of a sub-step are stamped at the sub-step midpoint, so window n
        owns exactly the events in [n dt, (n + 1) dt).

        Args:
            window: Window index n
            u: Duty cycle held over the window, or a policy (t, x, x_dot) -> u
            check_divergence: Abort when |x - target| exceeds scene.extent

        Returns:
            (K1, K2) counts measured over this window
        """
        t0_us = window * self.dt_us
        first_step = window * self.substeps
        chunks = []
        for j in range(self.substeps):
            nxt = step_rk4(self.state, u, self.plant, self.h)
            self.state = RobotState(nxt.x, nxt.x_dot, (first_step + j + 1) * self.h)
            stamp = t0_us + j * self.h_us + self.h_us // 2
            events = self.latches.step(self.pattern, self.state.x, stamp)
            if len(events):
                chunks.append(events)

            offset = self.offset(self.state.t)
            command = u(self.state.t, self.state.x, self.state.x_dot) if callable(u) else u
            _, x_ddot = dynamics_deriv(self.state, command, self.plant)
            self.extrema.update(self.state.x - offset, self.state.x_dot, x_ddot)
            if check_divergence and abs(self.state.x - offset) > self.extent:
                raise DivergenceError(
                    f"diverged at t={self.state.t:.4f}s: x={self.state.x:+.4f} m, "
                    f"target={offset:+.4f} m, |x - target| > {self.extent} m"
                )

        counts = measure_window(self.latches, (self.k1, self.k2), chunks, (t0_us, t0_us + self.dt_us),
                               self.credits)
        if self.record_events and chunks:
            self.event_chunks.extend(chunks)
        self.measured.append(counts)
        return counts


def measure_window(latches: PixelLatchArray, kernels, chunks: list, window: Tuple[int, int],
                   credits: Optional[Sequence[Optional[ReversalCredit]]] = None) -> Counts:
    """
    Net counts of each kernel over one window.

    Latched arrays are counted from the window's events, with the reversal
    credit when a polarity memory is given per kernel; ideal-fractional arrays
    from the fractional counts accumulated since the previous window.
    """
    if latches.config.latched:
        events = concat_events(chunks) if chunks else empty_events()
        credits = credits or (None,) * len(kernels)
        return tuple(net_event_count(events, k, window, credit) if k is not None else None
                     for k, credit in zip(kernels, credits))
    fractional = latches.take_fractional()
    return tuple(fractional_net_count(fractional, latches.u, latches.v, k, window) if k is not None else None
                 for k in kernels)
