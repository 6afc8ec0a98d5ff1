"""
Scene model: pinhole intrinsics, horizontal log-intensity profiles and the
displayed pattern as seen by a horizontally moving camera.

Usage:
    from scene import CameraIntrinsics, ScenePattern, intensity_at_time

    intr = CameraIntrinsics(f_x=1000.0, Z=1.0)
    pattern = ScenePattern.dual_split(sigma=330.0, k=1.299e-3, split_row=360)
    f = intensity_at_time(pattern, intr, u=12.5, v=100, x=0.02, t=0.0)
"""

from scene.camera import CameraIntrinsics, image_shift
from scene.pattern import (
    PATTERN_KINDS,
    ScenePattern,
    intensity_at_time,
    log_intensity,
    profile_derivative,
    shifted_coordinate,
)
from scene.profiles import (
    BaseProfile,
    DerivativeSuprema,
    LinearProfile,
    QuadraticProfile,
    build_profile,
    derivative_suprema,
    discover_profiles,
)

__all__ = [
    'CameraIntrinsics',
    'image_shift',
    'PATTERN_KINDS',
    'ScenePattern',
    'intensity_at_time',
    'log_intensity',
    'profile_derivative',
    'shifted_coordinate',
    'BaseProfile',
    'DerivativeSuprema',
    'LinearProfile',
    'QuadraticProfile',
    'build_profile',
    'derivative_suprema',
    'discover_profiles',
]
