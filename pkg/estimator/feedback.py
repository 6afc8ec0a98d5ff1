"""Synthesis of the x * x_dot^2 feedback term from the two kernel counts."""

import logging
from dataclasses import dataclass
from typing import Union

from estimator.calibration import LumpedConstant
from estimator.counting import NetCount, compensated_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeedbackEstimate:
    """est(x x_dot) in m^2/s, est(x_dot) in m/s and their product fb in m^3/s^2."""
    est_x_xdot: float
    est_xdot: float
    fb: float


def synthesize_feedback(m1: Union[NetCount, float], m2: Union[NetCount, float],
                        lumped1: LumpedConstant, lumped2: LumpedConstant) -> float:
    """
    Estimate x * x_dot^2 from one window of K1 and K2 counts.

    Args:
        m1: K1 (quadratic) net count
        m2: K2 (linear) net count of the same window
        lumped1: K1 lumped constant
        lumped2: K2 lumped constant

    Returns:
        (n1 / lumped1) * (n2 / lumped2)
    """
    return feedback_estimate(m1, m2, lumped1, lumped2).fb


def feedback_estimate(m1: Union[NetCount, float], m2: Union[NetCount, float],
                      lumped1: LumpedConstant, lumped2: LumpedConstant) -> FeedbackEstimate:
    est_x_xdot = lumped1.estimate(compensated_value(m1))
    est_xdot = lumped2.estimate(compensated_value(m2))
    return FeedbackEstimate(est_x_xdot=est_x_xdot, est_xdot=est_xdot, fb=est_x_xdot * est_xdot)


def oracle_feedback(x: float, x_dot: float, offset: float = 0.0) -> FeedbackEstimate:
    """Exact feedback from ground truth, relative to the pattern origin."""
    rel = x - offset
    return FeedbackEstimate(est_x_xdot=rel * x_dot, est_xdot=x_dot, fb=rel * x_dot * x_dot)
