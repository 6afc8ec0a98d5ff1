"""
Linearisation of the closed loop about the limit cycle.

The error dynamics are periodic with period pi / omega:

    A(t) = [[0, 1], [-delta w^2 cos^2(wt), -p1 - delta w sin(2wt)]]
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from errors import ContractViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LtvParams:
    """Composite gain delta, orbit frequency omega (rad/s) and damping p1 (1/s)."""
    delta: float
    omega: float
    p1: float

    def __post_init__(self):
        if not (self.omega > 0 and self.p1 > 0):
            raise ContractViolation(f"omega and p1 must be positive, got omega={self.omega}, p1={self.p1}")
        if self.delta < 0:
            raise ContractViolation(f"delta must be >= 0, got {self.delta}")

    @property
    def period(self) -> float:
        return math.pi / self.omega


def A_of_t(lp: LtvParams, t: float) -> np.ndarray:
    """Linearised system matrix at time t."""
    wt = lp.omega * t
    return np.array([
        [0.0, 1.0],
        [-lp.delta * lp.omega ** 2 * math.cos(wt) ** 2, -lp.p1 - lp.delta * lp.omega * math.sin(2.0 * wt)],
    ])


def trace_A(lp: LtvParams, t: float) -> float:
    return -lp.p1 - lp.delta * lp.omega * math.sin(2.0 * lp.omega * t)


def eta_dagger(p1: float, omega: float) -> float:
    """Lyapunov weight maximising the admissible delta: (1 + sqrt(1 + 4 p1^2 / w^2)) / p1^2."""
    if not (p1 > 0 and omega > 0):
        raise ContractViolation(f"p1 and omega must be positive, got p1={p1}, omega={omega}")
    return (1.0 + math.sqrt(1.0 + 4.0 * p1 ** 2 / omega ** 2)) / p1 ** 2


def delta_dagger(p1: float, omega: float) -> float:
    """Largest certified composite gain: (sqrt(w^2 + 4 p1^2) - w) / (2 w)."""
    if not (p1 > 0 and omega > 0):
        raise ContractViolation(f"p1 and omega must be positive, got p1={p1}, omega={omega}")
    return (math.sqrt(omega ** 2 + 4.0 * p1 ** 2) - omega) / (2.0 * omega)


def admissible_delta(eta: float, p1: float, omega: float) -> float:
    """Largest delta certified by weight eta: 4 (eta p1^2 - 1) / (eta^2 w^2 p1^2 + 4)."""
    return 4.0 * (eta * p1 ** 2 - 1.0) / (eta ** 2 * omega ** 2 * p1 ** 2 + 4.0)


def maximize_eta(p1: float, omega: float) -> tuple[float, float]:
    """
    Numerically maximise admissible_delta over eta in [1.01, 100] / p1^2.

    Returns:
        (eta at the maximum, admissible delta there)
    """
    lo, hi = 1.01 / p1 ** 2, 100.0 / p1 ** 2
    result = optimize.minimize_scalar(
        lambda eta: -admissible_delta(eta, p1, omega),
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-14 * hi, "maxiter": 500},
    )
    eta = float(result.x)
    logger.debug(f"[STABILITY] Numerical eta optimum {eta:.10f} after {result.nfev} evaluations")
    return eta, admissible_delta(eta, p1, omega)
