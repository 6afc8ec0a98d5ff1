"""
Horizontal logarithmic intensity profiles.

A profile is a function f(w) of the horizontal image-plane coordinate w
(pixels, measured from the principal point); the displayed intensity is
exp(f(w)). Each profile class declares a PROFILE_NAME and is picked up by
discover_profiles(), so adding a profile means adding one class here.
"""

import inspect
import logging
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Type

import numpy as np

from errors import SceneDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivativeSuprema:
    """Suprema of |f'|, |f''|, |f'''| over an observed horizontal interval."""
    F1: float
    F2: float
    F3: float

    def __post_init__(self):
        if min(self.F1, self.F2, self.F3) < 0:
            raise SceneDomainError(f"suprema must be non-negative, got {self}")


class BaseProfile(ABC):
    """Base class for all horizontal log-intensity profiles."""

    # Subclasses MUST define these
    PROFILE_NAME = None          # config name, e.g. "linear"
    PARAMETER = None             # name of the single shape parameter

    @abstractmethod
    def value(self, w):
        """Log intensity f(w)."""

    @abstractmethod
    def derivative(self, w, order: int):
        """Exact analytic derivative of order 1, 2 or 3."""

    @abstractmethod
    def suprema(self, w_lo: float, w_hi: float) -> DerivativeSuprema:
        """Analytic suprema of the derivatives over [w_lo, w_hi]."""

    @staticmethod
    def _check_order(order: int) -> None:
        if order not in (1, 2, 3):
            raise SceneDomainError(f"derivative order must be 1, 2 or 3, got {order}")

    def __str__(self) -> str:
        return f"{self.PROFILE_NAME}({self.PARAMETER}={getattr(self, self.PARAMETER)})"


class LinearProfile(BaseProfile):
    """f(w) = k*w: net events isolate the camera velocity."""

    PROFILE_NAME = "linear"
    PARAMETER = "k"

    def __init__(self, k: float):
        if k == 0 or not np.isfinite(k):
            raise SceneDomainError(f"linear slope k must be finite and nonzero, got {k}")
        self.k = float(k)

    def value(self, w):
        return self.k * np.asarray(w, dtype=float)

    def derivative(self, w, order: int):
        self._check_order(order)
        w = np.asarray(w, dtype=float)
        if order == 1:
            return np.full_like(w, self.k)
        return np.zeros_like(w)

    def suprema(self, w_lo: float, w_hi: float) -> DerivativeSuprema:
        return DerivativeSuprema(F1=abs(self.k), F2=0.0, F3=0.0)


class QuadraticProfile(BaseProfile):
    """f(w) = -w^2 / (2 sigma^2): net events isolate position times velocity."""

    PROFILE_NAME = "quadratic"
    PARAMETER = "sigma"

    def __init__(self, sigma: float):
        if sigma == 0 or not np.isfinite(sigma):
            raise SceneDomainError(f"quadratic spread sigma must be finite and nonzero, got {sigma}")
        self.sigma = float(sigma)

    @property
    def curvature(self) -> float:
        """1 / sigma^2."""
        return 1.0 / (self.sigma * self.sigma)

    def value(self, w):
        w = np.asarray(w, dtype=float)
        return -0.5 * w * w * self.curvature

    def derivative(self, w, order: int):
        self._check_order(order)
        w = np.asarray(w, dtype=float)
        if order == 1:
            return -w * self.curvature
        if order == 2:
            return np.full_like(w, -self.curvature)
        return np.zeros_like(w)

    def suprema(self, w_lo: float, w_hi: float) -> DerivativeSuprema:
        reach = max(abs(w_lo), abs(w_hi))
        return DerivativeSuprema(F1=reach * self.curvature, F2=self.curvature, F3=0.0)


def discover_profiles() -> Dict[str, Type[BaseProfile]]:
    """
    Collect every profile class defined in this module.

    Returns:
        Mapping of PROFILE_NAME to profile class
    """
    profiles = {}
    module = sys.modules[__name__]
    for name, obj in inspect.getmembers(module, inspect.isclass):
        if (issubclass(obj, BaseProfile) and
                obj is not BaseProfile and
                obj.__module__ == module.__name__ and
                obj.PROFILE_NAME):
            profiles[obj.PROFILE_NAME] = obj
            logger.debug(f"[SCENE] Discovered profile: {obj.PROFILE_NAME} ({obj.__name__})")
    return profiles


def build_profile(name: str, parameter: float) -> BaseProfile:
    """
    Instantiate a profile by its PROFILE_NAME.

    Args:
        name: Registered profile name
        parameter: The profile's shape parameter (k or sigma)

    Returns:
        Profile instance
    """
    profiles = discover_profiles()
    if name not in profiles:
        raise SceneDomainError(f"unknown profile '{name}', available: {sorted(profiles)}")
    return profiles[name](parameter)


def derivative_suprema(profile: BaseProfile, w_lo: float, w_hi: float) -> DerivativeSuprema:
    """Suprema of |f^(n)| over the swept interval [w_lo, w_hi]."""
    if w_lo > w_hi:
        w_lo, w_hi = w_hi, w_lo
    return profile.suprema(w_lo, w_hi)
