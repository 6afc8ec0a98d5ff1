"""Summary metrics of closed-loop runs."""

import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from controller.law import ControllerParams
from harness.recorder import TrajectoryRecord


def _columns(records: Sequence[TrajectoryRecord]) -> Dict[str, np.ndarray]:
    rows = np.array([r.as_tuple() for r in records], dtype=float)
    return {"t": rows[:, 0], "x": rows[:, 1], "x_dot": rows[:, 2], "target": rows[:, 11]}


def phase_radius(records: Sequence[TrajectoryRecord], omega: float) -> np.ndarray:
    """sqrt((x - target)^2 + (x_dot / w)^2) per window; equals a on the orbit."""
    c = _columns(records)
    return np.hypot(c["x"] - c["target"], c["x_dot"] / omega)


def period_means(t: np.ndarray, values: np.ndarray, period: float, dt: float) -> List[Tuple[float, float]]:
    """(period start, mean) for every complete period covered by the samples."""
    t_end = t[-1] + dt
    n_full = int(math.floor(t_end / period + 1e-9))
    means = []
    for k in range(n_full):
        mask = (t >= k * period - 1e-9) & (t < (k + 1) * period - 1e-9)
        if np.any(mask):
            means.append((k * period, float(values[mask].mean())))
    return means


def convergence_time(means: List[Tuple[float, float]], target: float, tolerance: float) -> float:
    """Start of the first period after which every period mean stays within tolerance * target."""
    inside = [abs(m - target) <= tolerance * target for _, m in means]
    for i in range(len(inside)):
        if all(inside[i:]):
            return means[i][0]
    return math.inf


def closed_loop_metrics(records: Sequence[TrajectoryRecord], cp: ControllerParams, dt: float,
                        tolerance: float, trailing_periods: int) -> Dict[str, float]:
    """
    Amplitude statistics of a closed-loop run.

    Returns:
        mean_radius and radius_spread over the trailing periods, amplitude_error
        relative to a, convergence_time in seconds (inf when never settled)
    """
    if not records:
        raise ValueError("no trajectory rows to summarise")
    c = _columns(records)
    radius = phase_radius(records, cp.omega)
    t_end = c["t"][-1] + dt
    trailing = c["t"] >= t_end - trailing_periods * cp.period - 1e-9
    mean_radius = float(radius[trailing].mean())
    means = period_means(c["t"], radius, cp.period, dt)
    return {
        "mean_radius": mean_radius,
        "amplitude_error": abs(mean_radius - cp.a) / cp.a,
        "radius_spread": float(radius[trailing].max() - radius[trailing].min()),
        "convergence_time": convergence_time(means, cp.a, tolerance),
    }


def phase_position_errors(records: Sequence[TrajectoryRecord], schedule: Sequence[Tuple[float, float]],
                          period: float, dt: float, trailing_periods: int) -> List[float]:
    """
    |mean(x) - offset| over the trailing periods of every schedule phase.

    A phase runs from its switch time to the next one (or the end of the run).
    """
    c = _columns(records)
    t_end = c["t"][-1] + dt
    errors = []
    for i, (t_switch, offset) in enumerate(schedule):
        phase_end = schedule[i + 1][0] if i + 1 < len(schedule) else t_end
        lo = max(t_switch, phase_end - trailing_periods * period)
        mask = (c["t"] >= lo - 1e-9) & (c["t"] < phase_end - 1e-9)
        if np.any(mask):
            errors.append(float(abs(c["x"][mask].mean() - offset)))
    return errors
