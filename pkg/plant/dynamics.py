"""Longitudinal robot dynamics x_ddot = -p1 x_dot + p2 u - p3."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from errors import ContractViolation
from plant.integrator import rk4_step
from plant.params import PlantParams, blended_params

logger = logging.getLogger(__name__)

Policy = Callable[[float, float, float], float]


@dataclass(frozen=True)
class RobotState:
    """Camera/robot position x (m), velocity x_dot (m/s) and time t (s)."""
    x: float
    x_dot: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.x_dot) and math.isfinite(self.t)):
            raise ContractViolation(f"robot state must be finite, got {self}")


def clamp_input(u: float, limits: Tuple[float, float]) -> Tuple[float, bool]:
    """
    Clamp a duty cycle to the plant limits.

    Returns:
        (applied u, whether clamping was needed)
    """
    lo, hi = limits
    if u < lo:
        return lo, True
    if u > hi:
        return hi, True
    return u, False


def dynamics_deriv(state: RobotState, u: float, pp: PlantParams) -> Tuple[float, float]:
    """
    State derivative with blended parameters and a clamped input.

    Args:
        state: Current state
        u: Commanded duty cycle
        pp: Plant parameters

    Returns:
        (x_dot, x_ddot)
    """
    return _deriv(state.x, state.x_dot, u, pp)


def _deriv(x: float, x_dot: float, u: float, pp: PlantParams) -> Tuple[float, float]:
    if not (math.isfinite(x) and math.isfinite(x_dot) and math.isfinite(u)):
        raise ContractViolation(f"non-finite plant input: x={x}, x_dot={x_dot}, u={u}")
    applied, clamped = clamp_input(u, pp.u_limits)
    if clamped:
        logger.debug(f"[PLANT] Clamped u={u:+.6f} to {applied:+.6f}")
    p = blended_params(pp, x_dot)
    return x_dot, -p.p1 * x_dot + p.p2 * applied - p.p3


def step_rk4(state: RobotState, u: Union[float, Policy], pp: PlantParams, h: float) -> RobotState:
    """
    Advance the plant by one RK4 step.

    Args:
        state: Current state
        u: Duty cycle held over the step, or a policy (t, x, x_dot) -> u
        pp: Plant parameters
        h: Step size (s)

    Returns:
        State at t + h
    """
    if not h > 0:
        raise ContractViolation(f"integration step must be positive, got {h}")
    policy = u if callable(u) else None

    def rhs(t, y):
        command = policy(t, y[0], y[1]) if policy else u
        return np.array(_deriv(y[0], y[1], command, pp))

    y = rk4_step(rhs, state.t, np.array([state.x, state.x_dot]), h)
    return RobotState(x=float(y[0]), x_dot=float(y[1]), t=state.t + h)


def integrate(state: RobotState, u: Union[float, Policy], pp: PlantParams, h: float, n_steps: int) -> RobotState:
    for _ in range(n_steps):
        state = step_rk4(state, u, pp, h)
    return state
