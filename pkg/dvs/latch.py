"""
Per-pixel change detectors.

Every simulated pixel remembers a reference log intensity. In latched mode a
pixel fires floor(|d| / C) events whenever its log intensity has drifted by d
from the reference, and the reference advances by whole thresholds so the
residual is carried to the next step. In ideal-fractional mode no discrete
events are produced; the exact fractional count d / C is accumulated instead
and read out per counting window.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from dvs.events import EVENT_DTYPE, canonical_sort, empty_events
from errors import ConfigError, ContractViolation
from scene.camera import CameraIntrinsics
from scene.pattern import ScenePattern, shifted_coordinate

logger = logging.getLogger(__name__)

LATCHED = "latched"
IDEAL_FRACTIONAL = "ideal_fractional"
DVS_MODES = (LATCHED, IDEAL_FRACTIONAL)

# Jittered thresholds never fall below this fraction of C
MIN_THRESHOLD_FRACTION = 0.01

Rect = Tuple[int, int, int, int]


@dataclass(frozen=True)
class DvsConfig:
    """
    Sensor settings.

    Attributes:
        C: Contrast threshold (log-intensity units)
        mode: "latched" or "ideal_fractional"
        seed: Seed for threshold jitter
        threshold_jitter: Relative std-dev of the per-pixel, per-step threshold
    """
    C: float = 0.2
    mode: str = LATCHED
    seed: int = 0
    threshold_jitter: float = 0.0

    def __post_init__(self):
        if not self.C > 0:
            raise ConfigError(f"contrast threshold must be positive, got {self.C}", key="camera.C")
        if self.mode not in DVS_MODES:
            raise ConfigError(f"unknown DVS mode '{self.mode}', expected one of {DVS_MODES}", key="camera.mode")
        if self.threshold_jitter < 0:
            raise ConfigError(
                f"threshold_jitter must be >= 0, got {self.threshold_jitter}", key="camera.threshold_jitter"
            )

    @property
    def latched(self) -> bool:
        return self.mode == LATCHED


class PixelLatchArray:
    """
    Reference log intensities for a region of interest of the sensor.

    Only pixels inside the union of the given rectangles are simulated; with no
    rectangles the full sensor is. Pixels are stored flattened in row-major
    (v, u) order.
    """

    def __init__(self, intr: CameraIntrinsics, config: DvsConfig, roi: Optional[Sequence[Rect]] = None):
        """
        Args:
            intr: Camera intrinsics
            config: Sensor settings
            roi: Inclusive (u_min, u_max, v_min, v_max) rectangles to simulate
        """
        self.intr = intr
        self.config = config

        mask = np.zeros((intr.height, intr.width), dtype=bool)
        if roi:
            for u_min, u_max, v_min, v_max in roi:
                mask[v_min:v_max + 1, u_min:u_max + 1] = True
        else:
            mask[:, :] = True
        v_idx, u_idx = np.nonzero(mask)
        self.u = u_idx.astype(np.int32)
        self.v = v_idx.astype(np.int32)
        self._w = intr.centered_u(self.u)

        n = len(self.u)
        self.reference = np.zeros(n)
        self.current = np.zeros(n)
        self.start = np.zeros(n)
        self.fractional = np.zeros(n)
        self.fractional_total = np.zeros(n)
        self.events_since_reset = 0

        self._rng = np.random.default_rng(config.seed)
        self._ready = False
        self._last_t_us: Optional[int] = None
        self._last_x = 0.0
        self._last_offset = 0.0

        logger.info(f"[DVS] Latch array: {n} pixels, mode={config.mode}, C={config.C}, "
                    f"jitter={config.threshold_jitter}")

    @property
    def n_pixels(self) -> int:
        return len(self.u)

    def _scene(self, pattern: ScenePattern, x: float, t: float) -> np.ndarray:
        return pattern.evaluate(shifted_coordinate(pattern, self.intr, self._w, x, t), self.v)

    def _thresholds(self):
        C = self.config.C
        if self.config.threshold_jitter == 0:
            return C
        noise = self._rng.standard_normal(self.n_pixels)
        return np.maximum(C * (1.0 + self.config.threshold_jitter * noise), MIN_THRESHOLD_FRACTION * C)

    def reset(self, pattern: ScenePattern, x0: float, t: float = 0.0) -> None:
        """
        Latch every pixel to the scene seen from pose x0.

        Args:
            pattern: Displayed pattern
            x0: Camera position (m)
            t: Scene time (s) used for the pattern origin
        """
        self.current = self._scene(pattern, x0, t)
        self.reference = self.current.copy()
        self.start = self.current.copy()
        self.fractional = np.zeros(self.n_pixels)
        self.fractional_total = np.zeros(self.n_pixels)
        self.events_since_reset = 0
        self._last_t_us = None
        self._last_x = float(x0)
        self._last_offset = pattern.center_offset(t)
        self._ready = True
        logger.debug(f"[DVS] Reset latches at x0={x0:.6f} m, t={t:.6f} s")

    def _blank_origin_switch(self, pattern: ScenePattern, t: float, offset: float) -> None:
        # The display jump is not camera motion: shift references along with it
        switched = self._scene(pattern, self._last_x, t)
        jump = switched - self.current
        self.reference += jump
        self.start += jump
        self.current = switched
        self._last_offset = offset
        logger.info(f"[DVS] Pattern origin switched to {offset:+.4f} m at t={t:.6f} s, latches re-referenced")

    def step(self, pattern: ScenePattern, x_new: float, t_us: int) -> np.ndarray:
        """
        Advance every pixel to the scene seen from x_new at t_us.

        Args:
            pattern: Displayed pattern
            x_new: Camera position (m)
            t_us: Step timestamp (integer microseconds)

        Returns:
            Events of this step in canonical order (empty in ideal-fractional mode)
        """
        if not self._ready:
            raise ContractViolation("step() called before reset()")
        t_us = int(t_us)
        if self._last_t_us is not None and t_us <= self._last_t_us:
            raise ContractViolation(f"DVS timestamps must increase: {t_us} after {self._last_t_us}")
        self._last_t_us = t_us

        t = t_us * 1e-6
        offset = pattern.center_offset(t)
        if offset != self._last_offset:
            self._blank_origin_switch(pattern, t, offset)

        new = self._scene(pattern, x_new, t)
        d = new - self.reference
        thresholds = self._thresholds()
        self._last_x = float(x_new)
        self.current = new

        if not self.config.latched:
            counts = d / thresholds
            self.fractional += counts
            self.fractional_total += counts
            self.reference = new.copy()
            return empty_events()

        n = np.floor(np.abs(d) / thresholds).astype(np.int64)
        sign = np.sign(d).astype(np.int8)
        self.reference += n * sign * thresholds

        fired = np.nonzero(n)[0]
        if len(fired) == 0:
            return empty_events()
        repeats = n[fired]
        events = np.empty(int(repeats.sum()), dtype=EVENT_DTYPE)
        events["t_us"] = t_us
        events["u"] = np.repeat(self.u[fired], repeats)
        events["v"] = np.repeat(self.v[fired], repeats)
        events["p"] = np.repeat(sign[fired], repeats)
        self.events_since_reset += len(events)
        logger.debug(f"[DVS] t={t_us} us: {len(events)} events from {len(fired)} pixels")
        return canonical_sort(events)

    def take_fractional(self) -> np.ndarray:
        """Fractional counts accumulated since the last call; the accumulator is cleared."""
        counts = self.fractional
        self.fractional = np.zeros(self.n_pixels)
        return counts

    def residuals(self) -> np.ndarray:
        """Unreported log-intensity change per pixel (strictly inside (-C, C) without jitter)."""
        return self.current - self.reference

    def total_fractional(self) -> float:
        """Sum of all fractional counts since reset."""
        return float(self.fractional_total.sum())

    def telescoped_count(self) -> float:
        """Sum over pixels of (log I now - log I at reset) / C."""
        return float((self.current - self.start).sum() / self.config.C)
