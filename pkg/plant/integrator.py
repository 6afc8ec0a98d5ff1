"""Classical fourth-order Runge-Kutta step shared by the plant and the LTV analysis."""

from typing import Callable

import numpy as np

Derivative = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(fn: Derivative, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """
    One RK4 step of y' = fn(t, y).

    Args:
        fn: Right-hand side, returns an array shaped like y
        t: Current time
        y: Current state (vector or matrix)
        h: Step size

    Returns:
        State at t + h
    """
    k1 = fn(t, y)
    k2 = fn(t + h / 2, y + h * k1 / 2)
    k3 = fn(t + h / 2, y + h * k2 / 2)
    k4 = fn(t + h, y + h * k3)
    return y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
