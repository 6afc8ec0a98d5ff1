"""
Direction-dependent lumped plant parameters.

The identified robot behaves differently driving forward and backward; the two
parameter sets are blended with (1 +/- tanh(beta * x_dot)) / 2.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, Tuple

import numpy as np

from errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LumpedParams:
    """
    One parameter set of x_ddot = -p1 x_dot + p2 u - p3.

    Attributes:
        p1: Velocity damping (1/s)
        p2: Input gain (m/s^2 per unit duty cycle)
        p3: Coulomb friction offset (m/s^2)
    """
    p1: float
    p2: float
    p3: float

    def __iter__(self) -> Iterator[float]:
        return iter((self.p1, self.p2, self.p3))


FORWARD = LumpedParams(p1=2.530, p2=33.977, p3=1.349)
BACKWARD = LumpedParams(p1=2.954, p2=37.497, p3=-1.510)


@dataclass(frozen=True)
class PlantParams:
    """
    Attributes:
        forward: Parameters for x_dot > 0
        backward: Parameters for x_dot < 0
        beta: Blending sharpness (s/m)
        u_limits: Duty-cycle clamp (u_lo, u_hi)
    """
    forward: LumpedParams = FORWARD
    backward: LumpedParams = BACKWARD
    beta: float = 20.0
    u_limits: Tuple[float, float] = field(default=(-1.0, 1.0))

    def __post_init__(self):
        for label, params in (("forward", self.forward), ("backward", self.backward)):
            if not (params.p1 > 0 and params.p2 > 0):
                raise ConfigError(f"{label} p1 and p2 must be positive, got {params}", key=f"plant.{label}")
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta}", key="plant.beta")
        if not self.u_limits[0] < self.u_limits[1]:
            raise ConfigError(f"u_limits must satisfy u_lo < u_hi, got {self.u_limits}", key="plant.u_limits")


def _weights(pp: PlantParams, x_dot: float) -> Tuple[float, float]:
    s = np.tanh(pp.beta * x_dot)
    return (1.0 + s) / 2.0, (1.0 - s) / 2.0


def blended_params(pp: PlantParams, x_dot: float) -> LumpedParams:
    """
    Parameters at velocity x_dot.

    Args:
        pp: Plant parameters
        x_dot: Velocity (m/s)

    Returns:
        p_i = p_i^f (1 + tanh(beta x_dot)) / 2 + p_i^b (1 - tanh(beta x_dot)) / 2
    """
    wf, wb = _weights(pp, x_dot)
    f, b = pp.forward, pp.backward
    return LumpedParams(
        p1=float(wf * f.p1 + wb * b.p1),
        p2=float(wf * f.p2 + wb * b.p2),
        p3=float(wf * f.p3 + wb * b.p3),
    )


def blend_slope(pp: PlantParams, x_dot: float) -> LumpedParams:
    """d p_i / d x_dot = beta sech^2(beta x_dot) (p_i^f - p_i^b) / 2."""
    sech2 = 1.0 / np.cosh(pp.beta * x_dot) ** 2
    scale = pp.beta * sech2 / 2.0
    f, b = pp.forward, pp.backward
    return LumpedParams(
        p1=float(scale * (f.p1 - b.p1)),
        p2=float(scale * (f.p2 - b.p2)),
        p3=float(scale * (f.p3 - b.p3)),
    )
