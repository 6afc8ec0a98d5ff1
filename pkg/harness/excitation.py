"""
Open-loop excitation for calibration.

The robot travels between alternating random targets with half-sine velocity
segments. Its onboard speed loop tracks the reference with a model-inverse
feedforward plus ground-truth position and velocity feedback.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from plant.params import PlantParams, blended_params

logger = logging.getLogger(__name__)

VELOCITY_GAIN = 20.0
POSITION_GAIN = 100.0
MIN_TARGET_FRACTION = 0.3
MIN_PEAK_FRACTION = 0.3


@dataclass(frozen=True)
class Segment:
    t_start: float
    duration: float
    x_start: float
    distance: float
    v_peak: float


class ExcitationProfile:
    """Piecewise half-sine velocity reference covering [0, duration]."""

    def __init__(self, duration: float, span: float, v_max: float, seed: int = 0, x_start: float = 0.0):
        """
        Args:
            duration: Time to cover (s)
            span: Largest target distance from the origin (m)
            v_max: Largest segment peak speed (m/s)
            seed: Seed of the target and speed draws
            x_start: Starting position (m)
        """
        if duration <= 0 or span <= 0 or v_max <= 0:
            raise ValueError("duration, span and v_max must be positive")
        rng = np.random.default_rng(seed)
        self.segments: List[Segment] = []
        t, x, side = 0.0, x_start, 1.0
        while t < duration:
            target = side * span * rng.uniform(MIN_TARGET_FRACTION, 1.0)
            v_peak = v_max * rng.uniform(MIN_PEAK_FRACTION, 1.0)
            distance = target - x
            seg_duration = math.pi * abs(distance) / (2.0 * v_peak)
            self.segments.append(Segment(t, seg_duration, x, distance, v_peak))
            t += seg_duration
            x = target
            side = -side
        self._starts = [s.t_start for s in self.segments]
        logger.info(f"[RUNNER] Excitation: {len(self.segments)} segments over {duration:.1f}s, "
                    f"span={span} m, v_max={v_max} m/s")

    @property
    def peak_acceleration(self) -> float:
        """Largest reference acceleration pi v_peak / T_segment."""
        return max(math.pi * s.v_peak / s.duration for s in self.segments)

    def reference(self, t: float) -> Tuple[float, float, float]:
        """(x, x_dot, x_ddot) of the reference at time t."""
        i = max(0, bisect.bisect_right(self._starts, t) - 1)
        seg = self.segments[i]
        tau = min(max(t - seg.t_start, 0.0), seg.duration)
        phase = math.pi * tau / seg.duration
        sign = math.copysign(1.0, seg.distance)
        x = seg.x_start + sign * seg.v_peak * seg.duration / math.pi * (1.0 - math.cos(phase))
        x_dot = sign * seg.v_peak * math.sin(phase)
        x_ddot = sign * seg.v_peak * math.pi / seg.duration * math.cos(phase)
        return x, x_dot, x_ddot

    def policy(self, pp: PlantParams):
        """Duty-cycle policy (t, x, x_dot) -> u tracking the reference."""
        def track(t: float, x: float, x_dot: float) -> float:
            x_ref, v_ref, a_ref = self.reference(t)
            p1, p2, p3 = blended_params(pp, x_dot)
            accel = a_ref + VELOCITY_GAIN * (v_ref - x_dot) + POSITION_GAIN * (x_ref - x)
            return (accel + p1 * x_dot + p3) / p2

        return track
