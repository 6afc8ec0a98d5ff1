"""
Limit-cycle reference and the active-sensing control law.

The robot is driven onto x* = a sin(wt) around the pattern origin. Only the
event-synthesised term fb ~ x x_dot^2 is fed back; on the orbit it equals
a^3 w^2 sin(wt) cos^2(wt) and the feedback bracket vanishes.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

from errors import ConfigError, ContractViolation
from plant.dynamics import clamp_input
from plant.params import LumpedParams, PlantParams, blended_params

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControllerParams:
    """
    Attributes:
        a: Orbit amplitude (m)
        omega: Orbit frequency (rad/s)
        K: Feedback gain on the x x_dot^2 error
    """
    a: float
    omega: float
    K: float

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError(f"amplitude a must be positive, got {self.a}", key="controller.a")
        if not self.omega > 0:
            raise ConfigError(f"frequency omega must be positive, got {self.omega}", key="controller.omega")
        if self.K < 0:
            raise ConfigError(f"gain K must be >= 0, got {self.K}", key="controller.K")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


class Reference(NamedTuple):
    x_star: float
    xdot_star: float


def delta(cp: ControllerParams) -> float:
    """Composite gain K a^2 of the linearised loop."""
    return cp.K * cp.a * cp.a


def reference(cp: ControllerParams, t: float, origin: float = 0.0) -> Reference:
    """
    Point of the limit cycle at time t.

    Args:
        cp: Controller parameters
        t: Time (s)
        origin: Orbit centre (m)

    Returns:
        (origin + a sin(wt), a w cos(wt))
    """
    phase = cp.omega * t
    return Reference(origin + cp.a * math.sin(phase), cp.a * cp.omega * math.cos(phase))


def orbit_feedback(cp: ControllerParams, t: float) -> float:
    """x* x_dot*^2 = a^3 w^2 sin(wt) cos^2(wt)."""
    phase = cp.omega * t
    return cp.a ** 3 * cp.omega ** 2 * math.sin(phase) * math.cos(phase) ** 2


def control_input(cp: ControllerParams, params: LumpedParams, t: float, fb: float) -> float:
    """
    Duty cycle that excites the orbit and corrects the x x_dot^2 error.

    Args:
        cp: Controller parameters
        params: Effective (p1, p2, p3)
        t: Controller time (s)
        fb: Estimate of (x - origin) x_dot^2 (m^3/s^2)

    Returns:
        u = [p1 a w cos - a w^2 sin + p3 - K (fb - a^3 w^2 sin cos^2)] / p2, unclamped
    """
    p1, p2, p3 = params
    if p2 == 0:
        raise ContractViolation("input gain p2 must be nonzero")
    phase = cp.omega * t
    feedforward = p1 * cp.a * cp.omega * math.cos(phase) - cp.a * cp.omega ** 2 * math.sin(phase) + p3
    correction = cp.K * (fb - orbit_feedback(cp, t))
    return (feedforward - correction) / p2


def clamped_control(cp: ControllerParams, pp: PlantParams, t: float, fb: float,
                    xdot_estimate: float) -> Tuple[float, bool]:
    """
    Control input with parameters blended at the velocity estimate, clamped to the plant limits.

    Returns:
        (u, clamped)
    """
    u = control_input(cp, blended_params(pp, xdot_estimate), t, fb)
    applied, clamped = clamp_input(u, pp.u_limits)
    if clamped:
        logger.debug(f"[CONTROLLER] Saturated at t={t:.4f}: u={u:+.5f} -> {applied:+.5f}")
    return applied, clamped


def tracking_policy(cp: ControllerParams, pp: PlantParams, origin: float = 0.0,
                    feedback: Optional[Callable[[float, float, float], float]] = None):
    """
    Continuous-time closed loop with exact state feedback.

    Args:
        cp: Controller parameters
        pp: Plant parameters (also used inside the law)
        origin: Orbit centre (m)
        feedback: Optional (t, x, x_dot) -> fb; defaults to the exact (x - origin) x_dot^2

    Returns:
        Policy (t, x, x_dot) -> u for plant.step_rk4
    """
    def policy(t: float, x: float, x_dot: float) -> float:
        fb = feedback(t, x, x_dot) if feedback else (x - origin) * x_dot * x_dot
        return clamped_control(cp, pp, t, fb, x_dot)[0]

    return policy
