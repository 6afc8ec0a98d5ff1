"""
Floquet verification of the periodic linearisation.

The monodromy matrix is the state-transition matrix over one period; the loop
is exponentially stable iff both of its eigenvalues lie inside the unit circle.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, linalg

from errors import ContractViolation
from plant.integrator import rk4_step
from stability.ltv import A_of_t, LtvParams, trace_A

logger = logging.getLogger(__name__)

STEPS_PER_PERIOD = 2000
MIN_STEPS_PER_PERIOD = 1000


@dataclass(frozen=True)
class FloquetResult:
    monodromy: np.ndarray
    multipliers: np.ndarray
    spectral_radius: float

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.monodromy))


def monodromy(lp: LtvParams, h: Optional[float] = None) -> FloquetResult:
    """
    Integrate X' = A(t) X from X(0) = I over one period with RK4.

    Args:
        lp: LTV parameters
        h: Step size; must not exceed T / 1000 (default T / 2000)

    Returns:
        FloquetResult with the monodromy matrix and its eigenvalues
    """
    T = lp.period
    if h is None:
        h = T / STEPS_PER_PERIOD
    if not 0 < h <= T / MIN_STEPS_PER_PERIOD * (1 + 1e-12):
        raise ContractViolation(f"step h={h:.3e} too coarse for period T={T:.6f} (need h <= T/{MIN_STEPS_PER_PERIOD})")
    n_steps = int(math.ceil(T / h - 1e-9))
    h = T / n_steps

    X = np.eye(2)
    rhs = lambda t, y: A_of_t(lp, t) @ y
    for i in range(n_steps):
        X = rk4_step(rhs, i * h, X, h)

    multipliers = linalg.eigvals(X)
    radius = float(np.max(np.abs(multipliers)))
    logger.debug(f"[STABILITY] Monodromy delta={lp.delta:.6g}: multipliers={multipliers}, radius={radius:.6f}")
    return FloquetResult(monodromy=X, multipliers=multipliers, spectral_radius=radius)


def liouville_determinant(lp: LtvParams) -> float:
    """
    exp of the trace of A(t) integrated over one period.

    The delta term of the trace averages out, so the result is exp(-p1 pi / w)
    for every delta.
    """
    integral, _ = integrate.quad(lambda t: trace_A(lp, t), 0.0, lp.period, epsabs=1e-13, epsrel=1e-12)
    return math.exp(integral)


def floquet_decay_rate(result: FloquetResult, period: float) -> float:
    """-ln(spectral radius) / T in 1/s."""
    return -math.log(result.spectral_radius) / period


def simulate_norms(lp: LtvParams, x0: Sequence[float] = (1.0, 0.0), n_periods: int = 30,
                   steps_per_period: int = 400) -> tuple[np.ndarray, np.ndarray]:
    """
    Simulate the LTV error system and sample the state norm once per period.

    Returns:
        (times kT, ||x(kT)||) for k = 0..n_periods
    """
    T = lp.period
    h = T / steps_per_period
    x = np.asarray(x0, dtype=float)
    rhs = lambda t, y: A_of_t(lp, t) @ y
    times = [0.0]
    norms = [float(np.linalg.norm(x))]
    for k in range(n_periods):
        for i in range(steps_per_period):
            x = rk4_step(rhs, k * T + i * h, x, h)
        times.append((k + 1) * T)
        norms.append(float(np.linalg.norm(x)))
    return np.array(times), np.array(norms)


def fit_decay_rate(lp: LtvParams, n_periods: int = 30, skip_periods: int = 5) -> float:
    """
    Log-linear fit of the simulated error norm.

    Returns:
        Decay rate in 1/s (the negated slope of log ||x|| against t)
    """
    times, norms = simulate_norms(lp, n_periods=n_periods)
    keep = slice(skip_periods, None)
    slope, _ = np.polyfit(times[keep], np.log(norms[keep]), 1)
    return float(-slope)
