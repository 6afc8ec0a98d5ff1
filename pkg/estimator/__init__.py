"""
Kernel-based state estimation from net event counts.

Usage:
    from estimator import default_kernels, net_event_count, calibrate, synthesize_feedback

    k1, k2 = default_kernels(intr, pattern)
    m1 = net_event_count(events, k1, (t0_us, t1_us))
    m2 = net_event_count(events, k2, (t0_us, t1_us))
    fb = synthesize_feedback(m1, m2, lumped1, lumped2)
"""

from estimator.bounds import (
    BOUND_RTOL,
    BoundParams,
    BoundVerdict,
    analytic_lumped,
    bound_constants,
    check_bound,
    event_rate_M,
    linear_rate_constant,
    normalized_state_bound,
    observed_suprema,
    quadratic_rate_constant,
    quantization_slack,
    rate_constant,
    window_bound,
)
from estimator.calibration import CALIBRATION_HEADER, LumpedConstant, calibrate, residuals, stroke_groups
from estimator.counting import (
    NetCount,
    ReversalCredit,
    compensated_value,
    fractional_net_count,
    net_event_count,
    net_value,
)
from estimator.feedback import FeedbackEstimate, feedback_estimate, oracle_feedback, synthesize_feedback
from estimator.kernels import (
    K1_QUADRATIC,
    K2_LINEAR,
    KERNEL_ROLES,
    Kernel,
    centered_kernel,
    default_kernels,
    sub_profile,
    swept_interval,
    validate_kernel,
)
from estimator.observer import VelocityObserver

__all__ = [
    'BOUND_RTOL',
    'BoundParams',
    'BoundVerdict',
    'analytic_lumped',
    'bound_constants',
    'check_bound',
    'event_rate_M',
    'linear_rate_constant',
    'normalized_state_bound',
    'observed_suprema',
    'quadratic_rate_constant',
    'quantization_slack',
    'rate_constant',
    'window_bound',
    'CALIBRATION_HEADER',
    'LumpedConstant',
    'calibrate',
    'residuals',
    'stroke_groups',
    'NetCount',
    'ReversalCredit',
    'compensated_value',
    'fractional_net_count',
    'net_event_count',
    'net_value',
    'FeedbackEstimate',
    'feedback_estimate',
    'oracle_feedback',
    'synthesize_feedback',
    'VelocityObserver',
    'K1_QUADRATIC',
    'K2_LINEAR',
    'KERNEL_ROLES',
    'Kernel',
    'centered_kernel',
    'default_kernels',
    'sub_profile',
    'swept_interval',
    'validate_kernel',
]
