"""
Exception hierarchy shared by every evservo package.

Each error also derives from the builtin a caller would naturally catch
(ValueError for bad input, RuntimeError for aborted runs) so code that only
knows the builtins keeps working.
"""

from typing import Optional


class EvservoError(Exception):
    """Base class for all evservo errors."""


class ConfigError(EvservoError, ValueError):
    """Invalid or incomplete configuration.

    Attributes:
        key: Dotted config key that caused the failure (e.g. "controller.a")
    """

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class SceneDomainError(EvservoError, ValueError):
    """Coordinates or scene parameters outside their valid domain."""


class ContractViolation(EvservoError, ValueError):
    """A caller broke an operation's precondition."""


class KernelError(EvservoError, ValueError):
    """Kernel geometry is unusable for net event counting."""


class CalibrationError(EvservoError, ValueError):
    """Least-squares calibration cannot produce a usable constant."""


class DivergenceError(EvservoError, RuntimeError):
    """Closed-loop run left the scene extent."""


__all__ = [
    'EvservoError',
    'ConfigError',
    'SceneDomainError',
    'ContractViolation',
    'KernelError',
    'CalibrationError',
    'DivergenceError',
]
