"""Pinhole intrinsics and the image shift caused by horizontal camera motion."""

import logging
from dataclasses import dataclass

import numpy as np

from errors import SceneDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CameraIntrinsics:
    """
    Pinhole camera facing the display plane.

    Attributes:
        f_x: Horizontal focal length (pixels)
        f_y: Vertical focal length (pixels)
        o_x: Principal point column (pixels, may be fractional)
        o_y: Principal point row (pixels, may be fractional)
        width: Sensor width (pixels)
        height: Sensor height (pixels)
        Z: Camera-to-display distance (meters)
    """
    f_x: float = 1000.0
    f_y: float = 1000.0
    o_x: float = 639.5
    o_y: float = 359.5
    width: int = 1280
    height: int = 720
    Z: float = 1.0

    def __post_init__(self):
        if not (self.f_x > 0 and self.f_y > 0):
            raise SceneDomainError(f"focal lengths must be positive, got f_x={self.f_x}, f_y={self.f_y}")
        if not self.Z > 0:
            raise SceneDomainError(f"distance Z must be positive, got {self.Z}")
        if self.width < 1 or self.height < 1:
            raise SceneDomainError(f"sensor must have at least one pixel, got {self.width}x{self.height}")
        if not (0 <= self.o_x < self.width and 0 <= self.o_y < self.height):
            raise SceneDomainError(
                f"principal point ({self.o_x}, {self.o_y}) outside sensor {self.width}x{self.height}"
            )

    @property
    def pixels_per_meter(self) -> float:
        """Horizontal image displacement per meter of camera travel."""
        return self.f_x / self.Z

    def centered_u(self, u_index):
        """Column index re-centered on the principal point."""
        return np.asarray(u_index, dtype=float) - self.o_x


def image_shift(intr: CameraIntrinsics, x):
    """
    Horizontal shift of the displayed pattern on the sensor.

    Args:
        intr: Camera intrinsics
        x: Camera position along the shared x-axis (meters), scalar or array

    Returns:
        mu = -(f_x / Z) * x in pixels
    """
    return -(intr.f_x / intr.Z) * x
