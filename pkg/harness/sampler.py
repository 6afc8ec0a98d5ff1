"""
Randomised smooth trajectories with guaranteed speed and acceleration bounds.

x(t) = x_c + sum_i A_i sin(w_i t + phi_i) with sum A_i w_i <= v_max and
sum A_i w_i^2 <= a_max.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

N_COMPONENTS = 3
OMEGA_RANGE = (2.0, 12.0)
CENTER_RANGE = 0.1


@dataclass(frozen=True)
class SmoothTrajectory:
    amplitudes: np.ndarray
    omegas: np.ndarray
    phases: np.ndarray
    center: float

    def position(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        return self.center + np.sum(self.amplitudes * np.sin(self.omegas * t + self.phases), axis=-1)

    def velocity(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        return np.sum(self.amplitudes * self.omegas * np.cos(self.omegas * t + self.phases), axis=-1)

    @property
    def v_bound(self) -> float:
        return float(np.sum(self.amplitudes * self.omegas))

    @property
    def a_bound(self) -> float:
        return float(np.sum(self.amplitudes * self.omegas ** 2))

    @property
    def x_range(self) -> Tuple[float, float]:
        reach = float(np.sum(self.amplitudes))
        return self.center - reach, self.center + reach


class TrajectorySampler:
    """Seeded source of SmoothTrajectory draws."""

    def __init__(self, v_max: float, a_max: float, seed: int = 0):
        if v_max <= 0 or a_max <= 0:
            raise ValueError(f"v_max and a_max must be positive, got {v_max}, {a_max}")
        self.v_max = v_max
        self.a_max = a_max
        self._rng = np.random.default_rng(seed)

    def sample(self) -> SmoothTrajectory:
        rng = self._rng
        omegas = rng.uniform(*OMEGA_RANGE, size=N_COMPONENTS)
        weights = rng.uniform(0.2, 1.0, size=N_COMPONENTS)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=N_COMPONENTS)
        scale = min(self.v_max / np.sum(weights * omegas), self.a_max / np.sum(weights * omegas ** 2))
        scale *= rng.uniform(0.5, 1.0)
        center = rng.uniform(-CENTER_RANGE, CENTER_RANGE)
        return SmoothTrajectory(amplitudes=scale * weights, omegas=omegas, phases=phases, center=float(center))
