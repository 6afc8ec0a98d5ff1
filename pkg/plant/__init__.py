"""
Robot plant: identified lumped longitudinal dynamics.

Usage:
    from plant import PlantParams, RobotState, step_rk4

    state = step_rk4(RobotState(0.0, 0.0), u=0.1, pp=PlantParams(), h=1e-3)
"""

from plant.dynamics import Policy, RobotState, clamp_input, dynamics_deriv, integrate, step_rk4
from plant.integrator import rk4_step
from plant.params import BACKWARD, FORWARD, LumpedParams, PlantParams, blend_slope, blended_params

__all__ = [
    'Policy',
    'RobotState',
    'clamp_input',
    'dynamics_deriv',
    'integrate',
    'step_rk4',
    'rk4_step',
    'BACKWARD',
    'FORWARD',
    'LumpedParams',
    'PlantParams',
    'blend_slope',
    'blended_params',
]
