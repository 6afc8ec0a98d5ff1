"""
Displayed pattern: one or two horizontal profiles plus a switched origin.

Coordinates: u is the horizontal image-plane coordinate measured from the
principal point column (pixels, continuous); v is the sensor row index. Rows
strictly above split_row (smaller v) show the quadratic part of a dual
pattern, rows at or below it show the linear part.
"""

import bisect
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import SceneDomainError
from scene.camera import CameraIntrinsics, image_shift
from scene.profiles import BaseProfile, LinearProfile, QuadraticProfile

logger = logging.getLogger(__name__)

PATTERN_KINDS = ("linear", "quadratic", "dual_split")


@dataclass(frozen=True)
class ScenePattern:
    """
    Pattern shown on the display.

    Attributes:
        kind: "linear", "quadratic" or "dual_split"
        quadratic: Quadratic sub-profile (quadratic and dual_split kinds)
        linear: Linear sub-profile (linear and dual_split kinds)
        split_row: First row of the linear half (dual_split only)
        schedule: (time s, offset m) steps of the pattern origin, sorted by time
    """
    kind: str
    quadratic: Optional[QuadraticProfile] = None
    linear: Optional[LinearProfile] = None
    split_row: Optional[int] = None
    schedule: Tuple[Tuple[float, float], ...] = field(default=((0.0, 0.0),))

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise SceneDomainError(f"unknown pattern kind '{self.kind}', expected one of {PATTERN_KINDS}")
        if self.kind in ("quadratic", "dual_split") and self.quadratic is None:
            raise SceneDomainError(f"{self.kind} pattern needs a quadratic profile")
        if self.kind in ("linear", "dual_split") and self.linear is None:
            raise SceneDomainError(f"{self.kind} pattern needs a linear profile")
        if self.kind == "dual_split" and (self.split_row is None or self.split_row < 1):
            raise SceneDomainError(f"dual_split pattern needs split_row >= 1, got {self.split_row}")
        if not self.schedule:
            raise SceneDomainError("pattern schedule must contain at least one (time, offset) step")
        times = [step[0] for step in self.schedule]
        if times != sorted(times):
            raise SceneDomainError(f"pattern schedule times must be non-decreasing, got {times}")

    @classmethod
    def linear_pattern(cls, k: float) -> "ScenePattern":
        return cls(kind="linear", linear=LinearProfile(k))

    @classmethod
    def quadratic_pattern(cls, sigma: float) -> "ScenePattern":
        return cls(kind="quadratic", quadratic=QuadraticProfile(sigma))

    @classmethod
    def dual_split(cls, sigma: float, k: float, split_row: int) -> "ScenePattern":
        return cls(kind="dual_split", quadratic=QuadraticProfile(sigma),
                   linear=LinearProfile(k), split_row=split_row)

    def with_schedule(self, schedule: Sequence[Tuple[float, float]]) -> "ScenePattern":
        """Copy of this pattern whose origin follows the given schedule."""
        steps = tuple((float(t), float(offset)) for t, offset in schedule) or ((0.0, 0.0),)
        return replace(self, schedule=steps)

    def check_against(self, intr: CameraIntrinsics) -> None:
        """Validate the split row against the sensor height."""
        if self.kind == "dual_split" and not (1 <= self.split_row <= intr.height - 1):
            raise SceneDomainError(
                f"split_row {self.split_row} outside [1, {intr.height - 1}] for a {intr.height}-row sensor"
            )

    def profile_for_row(self, v: int) -> BaseProfile:
        """Sub-profile governing sensor row v."""
        if self.kind == "linear":
            return self.linear
        if self.kind == "quadratic":
            return self.quadratic
        return self.quadratic if v < self.split_row else self.linear

    def evaluate(self, w, rows):
        """
        Vectorised log intensity for coordinates w on the given rows.

        Args:
            w: Horizontal image-plane coordinates (pixels from principal point)
            rows: Row indices (same shape as w, or scalar)

        Returns:
            Log intensity array
        """
        if self.kind == "linear":
            return self.linear.value(w)
        if self.kind == "quadratic":
            return self.quadratic.value(w)
        upper = np.asarray(rows) < self.split_row
        return np.where(upper, self.quadratic.value(w), self.linear.value(w))

    def center_offset(self, t: float) -> float:
        """Origin offset (m) active at time t; zero before the first step."""
        times = [step[0] for step in self.schedule]
        idx = bisect.bisect_right(times, t) - 1
        if idx < 0:
            return 0.0
        return self.schedule[idx][1]


def _check_extent(intr: CameraIntrinsics, u, v) -> None:
    column = np.asarray(u, dtype=float) + intr.o_x
    row = np.asarray(v, dtype=float)
    if np.any(column < 0) or np.any(column > intr.width - 1) or np.any(row < 0) or np.any(row > intr.height - 1):
        raise SceneDomainError(
            f"coordinates (u={u}, v={v}) outside the {intr.width}x{intr.height} sensor"
        )


def log_intensity(pattern: ScenePattern, intr: CameraIntrinsics, u, v):
    """
    Static log intensity f(u) of the sub-profile governing row v.

    Args:
        pattern: Displayed pattern
        intr: Camera intrinsics (defines the sensor extent)
        u: Horizontal coordinate from the principal point (pixels)
        v: Sensor row

    Returns:
        f(u); the intensity itself is exp(f(u))
    """
    _check_extent(intr, u, v)
    return pattern.evaluate(u, v)


def profile_derivative(pattern: ScenePattern, intr: CameraIntrinsics, u, v, order: int):
    """Exact derivative of order 1..3 of the row's sub-profile at u."""
    _check_extent(intr, u, v)
    if np.ndim(v) == 0:
        return pattern.profile_for_row(int(v)).derivative(u, order)
    rows = np.asarray(v)
    u = np.broadcast_to(np.asarray(u, dtype=float), rows.shape)
    result = np.empty(rows.shape, dtype=float)
    for row in np.unique(rows):
        mask = rows == row
        result[mask] = pattern.profile_for_row(int(row)).derivative(u[mask], order)
    return result


def shifted_coordinate(pattern: ScenePattern, intr: CameraIntrinsics, u, x, t: float):
    """Profile coordinate u + mu(x) - mu(offset(t)) seen by column u."""
    return np.asarray(u, dtype=float) + image_shift(intr, x) - image_shift(intr, pattern.center_offset(t))


def intensity_at_time(pattern: ScenePattern, intr: CameraIntrinsics, u, v, x: float, t: float):
    """
    Log intensity observed at (u, v) with the camera at x and time t.

    Profiles are globally defined, so u is not range-checked here.
    """
    return pattern.evaluate(shifted_coordinate(pattern, intr, u, x, t), v)
