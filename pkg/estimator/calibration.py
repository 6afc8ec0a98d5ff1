"""Least-squares identification of the lumped kernel constants."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from errors import CalibrationError

logger = logging.getLogger(__name__)

CALIBRATION_HEADER = ("kernel", "lumped_value", "fit_residual", "n_samples")


@dataclass(frozen=True)
class LumpedConstant:
    """
    Events per state unit per counting window.

    Attributes:
        value: C_q dt for K1 (events per m^2/s) or C_l dt for K2 (events per m/s)
        fit_residual: Length-normalised L2 norm of the state-estimate errors
        n_samples: Number of windows in the fit
        kernel: Kernel name ("K1" or "K2")
    """
    value: float
    fit_residual: float = 0.0
    n_samples: int = 0
    kernel: str = ""

    def __post_init__(self):
        if self.value == 0 or not np.isfinite(self.value):
            raise CalibrationError(f"lumped constant for {self.kernel or 'kernel'} must be finite and nonzero")

    def estimate(self, n_net: float) -> float:
        """State estimate n_net / value."""
        return n_net / self.value


def residuals(n_net: np.ndarray, truth: np.ndarray, value: float) -> np.ndarray:
    """Per-window state-estimate errors n_net / value - truth."""
    return np.asarray(n_net, dtype=float) / value - np.asarray(truth, dtype=float)


def stroke_groups(truth) -> np.ndarray:
    """
    Label consecutive windows whose regressor keeps one sign.

    Zero-valued windows join the running stroke.

    Returns:
        Integer labels 0, 1, ... one per window
    """
    signs = np.sign(np.asarray(truth, dtype=float))
    labels = np.zeros(len(signs), dtype=np.int64)
    label, current = 0, 0.0
    for i, s in enumerate(signs):
        if s != 0 and current != 0 and s != current:
            label += 1
        if s != 0:
            current = s
        labels[i] = label
    return labels


def calibrate(samples: Union[Sequence[Tuple[float, float]], Tuple[np.ndarray, np.ndarray]],
              kernel: str = "", expected_sign: Optional[float] = None,
              groups: Optional[np.ndarray] = None) -> LumpedConstant:
    """
    Fit n_net = c * s by least squares.

    Args:
        samples: (n_net, ground_truth_state) pairs, or a pair of equal-length arrays
        kernel: Kernel name for the report
        expected_sign: Sign of the analytic constant; a mismatch is logged
        groups: Optional per-window labels (see stroke_groups); counts and
            regressors are summed per label before the fit. The residual is
            still computed per window.

    Returns:
        LumpedConstant with value = sum(n s) / sum(s^2) over the fitted rows

    Raises:
        CalibrationError: fewer than two samples or an all-zero regressor
    """
    n_net, truth = _split(samples)
    if len(n_net) < 2:
        raise CalibrationError(f"calibration of {kernel} needs >= 2 samples, got {len(n_net)}")
    if not np.any(truth):
        raise CalibrationError(f"calibration of {kernel} has a degenerate regressor (all ground truth zero)")

    fit_n, fit_s = n_net, truth
    if groups is not None:
        groups = np.asarray(groups, dtype=np.int64)
        if groups.shape != n_net.shape:
            raise CalibrationError(f"calibration of {kernel}: {len(groups)} labels for {len(n_net)} samples")
        fit_n = np.bincount(groups, weights=n_net)
        fit_s = np.bincount(groups, weights=truth)
        logger.debug(f"[ESTIMATOR] {kernel}: fitting {len(fit_n)} strokes")

    solution, *_ = np.linalg.lstsq(fit_s[:, None], fit_n, rcond=None)
    value = float(solution[0])
    if value == 0:
        raise CalibrationError(f"calibration of {kernel} produced a zero lumped constant")

    fit_residual = float(np.linalg.norm(residuals(n_net, truth, value)) / len(n_net))
    if expected_sign is not None and np.sign(value) != np.sign(expected_sign):
        logger.warning(f"[ESTIMATOR] ✗ {kernel} lumped constant {value:+.6g} has the wrong sign")
    logger.info(f"[ESTIMATOR] ✓ Calibrated {kernel}: lumped={value:.6g}, "
                f"residual={fit_residual:.6g}, samples={len(n_net)}")
    return LumpedConstant(value=value, fit_residual=fit_residual, n_samples=len(n_net), kernel=kernel)


def _split(samples) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2 and isinstance(samples[0], np.ndarray):
        n_net, truth = samples
    else:
        pairs = np.asarray(list(samples), dtype=float).reshape(-1, 2)
        n_net, truth = pairs[:, 0], pairs[:, 1]
    return np.asarray(n_net, dtype=float), np.asarray(truth, dtype=float)

