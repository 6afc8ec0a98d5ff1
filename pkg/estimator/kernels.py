"""
Counting kernels: horizontally symmetric pixel rectangles.

K1 sits on the quadratic half of the display and measures x * x_dot, K2 sits
on the linear half and measures x_dot.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import KernelError
from scene.camera import CameraIntrinsics
from scene.pattern import ScenePattern
from scene.profiles import BaseProfile, LinearProfile, QuadraticProfile

logger = logging.getLogger(__name__)

K1_QUADRATIC = "K1_quadratic"
K2_LINEAR = "K2_linear"
KERNEL_ROLES = (K1_QUADRATIC, K2_LINEAR)

_ROLE_PROFILE = {K1_QUADRATIC: QuadraticProfile, K2_LINEAR: LinearProfile}


@dataclass(frozen=True)
class Kernel:
    """
    Rectangular pixel region with inclusive bounds.

    Attributes:
        u_min, u_max: Column bounds
        v_min, v_max: Row bounds
        role: K1_quadratic or K2_linear
    """
    u_min: int
    u_max: int
    v_min: int
    v_max: int
    role: str

    def __post_init__(self):
        if self.role not in KERNEL_ROLES:
            raise KernelError(f"unknown kernel role '{self.role}', expected one of {KERNEL_ROLES}")
        if self.u_max < self.u_min or self.v_max < self.v_min:
            raise KernelError(f"empty kernel {self.rect}")

    @property
    def name(self) -> str:
        return self.role.split("_")[0]

    @property
    def N_u(self) -> int:
        return self.u_max - self.u_min + 1

    @property
    def N_v(self) -> int:
        return self.v_max - self.v_min + 1

    @property
    def n_pixels(self) -> int:
        return self.N_u * self.N_v

    @property
    def rect(self) -> Tuple[int, int, int, int]:
        return (self.u_min, self.u_max, self.v_min, self.v_max)

    def centered_column_sum(self, intr: CameraIntrinsics) -> float:
        """Sum of (u - o_x) over every kernel pixel; zero for a symmetric kernel."""
        return self.N_v * self.N_u * ((self.u_min + self.u_max) / 2.0 - intr.o_x)

    def contains(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return (u >= self.u_min) & (u <= self.u_max) & (v >= self.v_min) & (v <= self.v_max)


def sub_profile(kernel: Kernel, pattern: ScenePattern) -> BaseProfile:
    """Profile under the kernel; every kernel row is checked against the pattern split."""
    top = pattern.profile_for_row(kernel.v_min)
    bottom = pattern.profile_for_row(kernel.v_max)
    if top is not bottom:
        raise KernelError(f"{kernel.name} rows {kernel.v_min}..{kernel.v_max} straddle the pattern split")
    if not isinstance(top, _ROLE_PROFILE[kernel.role]):
        raise KernelError(f"{kernel.name} ({kernel.role}) lies on a {top.PROFILE_NAME} profile")
    return top


def validate_kernel(kernel: Kernel, intr: CameraIntrinsics, pattern: ScenePattern) -> BaseProfile:
    """
    Check geometry and role of a kernel.

    Args:
        kernel: Kernel to check
        intr: Camera intrinsics
        pattern: Displayed pattern

    Returns:
        The sub-profile the kernel observes

    Raises:
        KernelError: outside the sensor, asymmetric about o_x, or on the wrong profile
    """
    if kernel.u_min < 0 or kernel.v_min < 0 or kernel.u_max > intr.width - 1 or kernel.v_max > intr.height - 1:
        raise KernelError(f"{kernel.name} {kernel.rect} outside the {intr.width}x{intr.height} sensor")
    if kernel.u_min + kernel.u_max != 2 * intr.o_x:
        raise KernelError(
            f"{kernel.name} columns {kernel.u_min}..{kernel.u_max} not symmetric about o_x={intr.o_x} "
            f"(centered sum {kernel.centered_column_sum(intr):+g})"
        )
    return sub_profile(kernel, pattern)


def centered_kernel(intr: CameraIntrinsics, n_u: int, v_center: int, n_v: int, role: str) -> Kernel:
    """Kernel of n_u x n_v pixels centred on o_x and on row v_center."""
    u_min = intr.o_x - (n_u - 1) / 2.0
    if u_min != int(u_min):
        raise KernelError(f"width {n_u} cannot be centred on o_x={intr.o_x}; use a width of matching parity")
    v_min = v_center - n_v // 2
    return Kernel(int(u_min), int(u_min) + n_u - 1, v_min, v_min + n_v - 1, role)


def default_kernels(intr: CameraIntrinsics, pattern: ScenePattern, n_u: int = 200, n_v: int = 100):
    """
    K1 centred in the quadratic half and K2 centred in the linear half.

    Returns:
        (K1, K2); a kernel is None when the pattern has no matching profile
    """
    if pattern.kind == "dual_split":
        k1_row = pattern.split_row // 2
        k2_row = (pattern.split_row + intr.height) // 2
    else:
        k1_row = k2_row = intr.height // 2
    k1 = centered_kernel(intr, n_u, k1_row, n_v, K1_QUADRATIC) if pattern.quadratic else None
    k2 = centered_kernel(intr, n_u, k2_row, n_v, K2_LINEAR) if pattern.linear else None
    for kernel in (k1, k2):
        if kernel is not None:
            validate_kernel(kernel, intr, pattern)
            logger.info(f"[ESTIMATOR] {kernel.name} kernel: u {kernel.u_min}..{kernel.u_max}, "
                        f"v {kernel.v_min}..{kernel.v_max} ({kernel.N_u}x{kernel.N_v})")
    return k1, k2


def swept_interval(intr: CameraIntrinsics, kernel: Kernel, x_lo: float, x_hi: float,
                   offset: float = 0.0) -> Tuple[float, float]:
    """
    Profile coordinates seen by the kernel while the camera stays in [x_lo, x_hi].

    Args:
        intr: Camera intrinsics
        kernel: Kernel
        x_lo, x_hi: Camera position range (m)
        offset: Pattern origin offset (m)

    Returns:
        (w_lo, w_hi) in pixels from the principal point
    """
    ppm = intr.pixels_per_meter
    w_lo = (kernel.u_min - intr.o_x) - ppm * (x_hi - offset)
    w_hi = (kernel.u_max - intr.o_x) - ppm * (x_lo - offset)
    return (min(w_lo, w_hi), max(w_lo, w_hi))
