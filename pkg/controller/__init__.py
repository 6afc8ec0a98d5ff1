"""
Limit-cycle active-sensing controller.

Usage:
    from controller import ControllerParams, control_input, reference

    cp = ControllerParams(a=0.18, omega=2 * math.pi / 1.5, K=1.5)
    u = control_input(cp, blended_params(pp, est_xdot), t, fb)
"""

from controller.law import (
    ControllerParams,
    Reference,
    clamped_control,
    control_input,
    delta,
    orbit_feedback,
    reference,
    tracking_policy,
)

__all__ = [
    'ControllerParams',
    'Reference',
    'clamped_control',
    'control_input',
    'delta',
    'orbit_feedback',
    'reference',
    'tracking_policy',
]
