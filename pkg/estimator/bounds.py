"""
Net event rate model and its certified error bound.

Over a window of length dt a symmetric kernel of N_u x N_v pixels collects

    |N_net - M dt| <= L_time dt^2 + L_space dt

events, where M is the first-order rate, L_time bounds the velocity and
acceleration remainder and L_space the third-order spatial remainder.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

from errors import KernelError
from estimator.counting import NetCount, net_value
from estimator.kernels import Kernel, sub_profile
from scene.camera import CameraIntrinsics
from scene.pattern import ScenePattern, shifted_coordinate
from scene.profiles import DerivativeSuprema, LinearProfile, QuadraticProfile

logger = logging.getLogger(__name__)

# Relative slack on the bound for floating-point accumulation
BOUND_RTOL = 1e-9


@dataclass(frozen=True)
class BoundParams:
    """
    Inputs of the window error bound.

    Attributes:
        v_max: Speed bound (m/s)
        a_max: Acceleration bound (m/s^2)
        suprema: Profile derivative suprema over the swept interval
        C: Contrast threshold
        N_u, N_v: Kernel extents (pixels)
        f_x: Focal length (pixels)
        Z: Scene distance (m)
    """
    v_max: float
    a_max: float
    suprema: DerivativeSuprema
    C: float
    N_u: int
    N_v: int
    f_x: float
    Z: float

    def __post_init__(self):
        if self.v_max < 0 or self.a_max < 0:
            raise ValueError(f"v_max and a_max must be >= 0, got {self.v_max}, {self.a_max}")

    @classmethod
    def for_kernel(cls, kernel: Kernel, intr: CameraIntrinsics, C: float,
                   v_max: float, a_max: float, suprema: DerivativeSuprema) -> "BoundParams":
        return cls(v_max=v_max, a_max=a_max, suprema=suprema, C=C,
                   N_u=kernel.N_u, N_v=kernel.N_v, f_x=intr.f_x, Z=intr.Z)


@dataclass(frozen=True)
class BoundVerdict:
    """Outcome of one window check; margin is bound minus error, in events."""
    ok: bool
    error: float
    bound: float
    margin: float
    slack: float


def event_rate_M(pattern: ScenePattern, intr: CameraIntrinsics, kernel: Kernel,
                 x: float, x_dot: float, C: float, t: float = 0.0) -> float:
    """
    First-order net event rate of a kernel.

    Args:
        pattern: Displayed pattern
        intr: Camera intrinsics
        kernel: Kernel whose sub-profile matches its role
        x: Camera position (m)
        x_dot: Camera velocity (m/s)
        C: Contrast threshold
        t: Time (s), selects the pattern origin

    Returns:
        M = -(N_u N_v f_x / (C Z)) * x_dot * f'(mu) in events per second
    """
    profile = sub_profile(kernel, pattern)
    mu = float(shifted_coordinate(pattern, intr, 0.0, x, t))
    slope = float(profile.derivative(mu, 1))
    return -(kernel.n_pixels * intr.f_x) / (C * intr.Z) * x_dot * slope


def quadratic_rate_constant(intr: CameraIntrinsics, kernel: Kernel, C: float, sigma: float) -> float:
    """C_q = -N_u N_v f_x^2 / (C Z^2 sigma^2), so that M = C_q x x_dot."""
    return -kernel.n_pixels * intr.f_x ** 2 / (C * intr.Z ** 2 * sigma ** 2)


def linear_rate_constant(intr: CameraIntrinsics, kernel: Kernel, C: float, k: float) -> float:
    """C_l = -N_u N_v f_x k / (C Z), so that M = C_l x_dot."""
    return -kernel.n_pixels * intr.f_x * k / (C * intr.Z)


def rate_constant(pattern: ScenePattern, intr: CameraIntrinsics, kernel: Kernel, C: float) -> float:
    """Analytic C_q or C_l for the kernel's role."""
    profile = sub_profile(kernel, pattern)
    if isinstance(profile, QuadraticProfile):
        return quadratic_rate_constant(intr, kernel, C, profile.sigma)
    if isinstance(profile, LinearProfile):
        return linear_rate_constant(intr, kernel, C, profile.k)
    raise KernelError(f"no closed-form rate constant for {profile}")


def analytic_lumped(pattern: ScenePattern, intr: CameraIntrinsics, kernel: Kernel, C: float, dt: float) -> float:
    """Events per state unit per window: C_q dt for K1, C_l dt for K2."""
    return rate_constant(pattern, intr, kernel, C) * dt


def bound_constants(bp: BoundParams) -> Tuple[float, float]:
    """
    Temporal and spatial remainder constants.

    Returns:
        (L_time in events/s^2, L_space in events/s)
    """
    n = bp.N_u * bp.N_v
    pixel_speed = bp.f_x * bp.v_max / bp.Z
    pixel_accel = bp.f_x * bp.a_max / bp.Z
    s = bp.suprema
    l_time = n / (2.0 * bp.C) * (s.F2 * pixel_speed ** 2 + s.F1 * pixel_accel)
    l_space = n / bp.C * (bp.N_u ** 2 / 8.0) * pixel_speed * s.F3
    return l_time, l_space


def window_bound(bounds: Tuple[float, float], dt: float) -> float:
    l_time, l_space = bounds
    return l_time * dt * dt + l_space * dt


def quantization_slack(kernel: Kernel, latched: bool) -> float:
    """At most one unreported threshold per pixel in latched mode."""
    return float(kernel.n_pixels) if latched else 0.0


def check_bound(n_net: Union[NetCount, float], M: float, bounds: Tuple[float, float], dt: float,
                slack: float = 0.0) -> BoundVerdict:
    """
    Compare a window count against the rate model.

    Args:
        n_net: Net count of the window
        M: Rate evaluated at the window start (events/s)
        bounds: (L_time, L_space) from bound_constants
        dt: Window length (s)
        slack: Quantization slack in events (quantization_slack)

    The comparison allows BOUND_RTOL * max(1, |M dt|) on top of the bound:
    M dt and the remainder terms are sums of floating-point products, and
    windows that meet the bound with equality in exact arithmetic may exceed
    it by a few ulps.

    Returns:
        BoundVerdict; ok iff |n_net - M dt| <= L_time dt^2 + L_space dt + slack
    """
    predicted = M * dt
    error = abs(net_value(n_net) - predicted)
    bound = window_bound(bounds, dt) + slack
    tolerance = BOUND_RTOL * max(1.0, abs(predicted))
    ok = error <= bound + tolerance
    return BoundVerdict(ok=bool(ok), error=error, bound=bound, margin=bound - error, slack=slack)


def normalized_state_bound(bp: BoundParams, rate: float, dt: float) -> float:
    """
    Bound on the state estimate n_net / (rate dt) implied by the window bound.

    For K1 this is (v_max^2 / 2 + Z w_max a_max / (2 f_x)) dt with w_max the
    largest swept |w|; for K2 it is a_max dt / 2.
    """
    if rate == 0:
        raise ValueError("rate constant must be nonzero")
    return window_bound(bound_constants(bp), dt) / (abs(rate) * dt)


def observed_suprema(pattern: ScenePattern, kernel: Kernel, w_lo: float, w_hi: float,
                     pad: float = 0.0) -> DerivativeSuprema:
    """Suprema over [w_lo, w_hi] widened by a relative pad on each side."""
    span = (w_hi - w_lo) * pad
    return sub_profile(kernel, pattern).suprema(w_lo - span, w_hi + span)


__all__ = [
    'BOUND_RTOL',
    'BoundParams',
    'BoundVerdict',
    'event_rate_M',
    'quadratic_rate_constant',
    'linear_rate_constant',
    'rate_constant',
    'analytic_lumped',
    'bound_constants',
    'window_bound',
    'quantization_slack',
    'check_bound',
    'normalized_state_bound',
    'observed_suprema',
]
