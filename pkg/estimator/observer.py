"""
Velocity estimate for the parameter blend of the control law.

Latched K2 pixels see the same log-intensity change and fire together, so a
single window's K2 estimate is mostly zero with an occasional burst. The
observer propagates the plant model over every window with the applied duty
cycle and corrects it with the K2 estimate of the window the counts belong to.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict

from errors import ConfigError
from plant.params import PlantParams, blended_params

logger = logging.getLogger(__name__)


@dataclass
class VelocityObserver:
    """
    Fixed-gain predict/correct observer of x_dot.

    Attributes:
        plant: Plant parameters used for the prediction
        dt: Window length (s)
        gain: Fraction of each window's innovation applied, in (0, 1]
        velocity: Current estimate at the window boundary (m/s)
    """
    plant: PlantParams
    dt: float
    gain: float = 0.05
    velocity: float = 0.0
    _predicted: Dict[int, float] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 0 < self.gain <= 1:
            raise ConfigError(f"observer gain must lie in (0, 1], got {self.gain}", key="estimator.observer_gain")

    def reset(self, velocity: float = 0.0) -> None:
        self.velocity = velocity
        self._predicted.clear()

    def predict(self, window: int, u: float) -> float:
        """
        Propagate the estimate over one window with u held.

        The window-mean velocity of the prediction is kept for the later
        correction with that window's counts.

        Returns:
            Velocity estimate at the end of the window
        """
        p1, p2, p3 = blended_params(self.plant, self.velocity)
        steady = (p2 * u - p3) / p1
        decay = math.exp(-p1 * self.dt)
        gap = self.velocity - steady
        self._predicted[window] = steady + gap * (1.0 - decay) / (p1 * self.dt)
        self.velocity = steady + gap * decay
        return self.velocity

    def correct(self, window: int, measured: float) -> float:
        """
        Apply the innovation of one measured window.

        Args:
            window: Index of the window the measurement was counted over
            measured: Window-mean velocity estimate from K2 (m/s)

        Returns:
            Corrected velocity estimate
        """
        predicted = self._predicted.pop(window, None)
        if predicted is None:
            logger.debug(f"[ESTIMATOR] No prediction for window {window}, measurement ignored")
            return self.velocity
        self.velocity += self.gain * (measured - predicted)
        return self.velocity
