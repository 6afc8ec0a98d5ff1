"""
Stability scan over the composite gain delta.

Each point combines three independent verdicts: the closed-form bound
delta <= delta_dagger, the sampled Lyapunov certificate at eta_dagger, and the
Floquet spectral radius. Lyapunov success must imply Floquet stability; a
point that is Floquet-stable but not certified is a conservative point.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from stability.certificate import (
    DEFAULT_SAMPLES,
    LyapunovCertificate,
    lyapunov_decay_integral,
    lyapunov_decay_rate,
    verify_certificate,
)
from stability.floquet import fit_decay_rate, monodromy
from stability.ltv import LtvParams, delta_dagger, eta_dagger

logger = logging.getLogger(__name__)

STABILITY_HEADER = ("delta", "delta_dagger", "cert_ok", "floquet_radius", "decay_rate",
                    "p1", "direction", "conservative", "lyapunov_integral")


@dataclass(frozen=True)
class StabilityReport:
    """
    Verdicts for one (p1, omega, delta) point.

    Attributes:
        delta: Composite gain
        delta_dagger: Certified upper bound on delta
        eta_dagger: Optimal Lyapunov weight
        p1: Damping used for the point
        omega: Orbit frequency
        direction: Label of the parameter set p1 came from ("forward", "backward" or "")
        psd_ok: Sampled certificate verdict at eta_dagger
        monodromy: One-period state-transition matrix
        multipliers: Eigenvalues of monodromy
        spectral_radius: max |multiplier|
        decay_rate_est: Log-linear fit of the simulated error norm (1/s)
        lyapunov_integral: Integral of lambda_min(Q) over one period
        lyapunov_rate: lyapunov_integral / (T lambda_max(P))
    """
    delta: float
    delta_dagger: float
    eta_dagger: float
    p1: float
    omega: float
    direction: str
    psd_ok: bool
    monodromy: np.ndarray
    multipliers: np.ndarray
    spectral_radius: float
    decay_rate_est: float
    lyapunov_integral: float
    lyapunov_rate: float

    @property
    def within_bound(self) -> bool:
        return self.delta <= self.delta_dagger

    @property
    def floquet_stable(self) -> bool:
        return self.spectral_radius < 1.0

    @property
    def conservative(self) -> bool:
        """Floquet-stable but not certified."""
        return self.floquet_stable and not self.psd_ok

    @property
    def consistent(self) -> bool:
        return not (self.psd_ok and not self.floquet_stable)

    def as_row(self) -> dict:
        return {
            "delta": self.delta,
            "delta_dagger": self.delta_dagger,
            "cert_ok": int(self.psd_ok),
            "floquet_radius": self.spectral_radius,
            "decay_rate": self.decay_rate_est,
            "p1": self.p1,
            "direction": self.direction,
            "conservative": int(self.conservative),
            "lyapunov_integral": self.lyapunov_integral,
        }


def analyze_point(p1: float, omega: float, delta: float, direction: str = "",
                  n_samples: int = DEFAULT_SAMPLES, h: Optional[float] = None,
                  fit_decay: bool = True) -> StabilityReport:
    """
    Evaluate every verdict at one point.

    Args:
        p1: Damping (1/s)
        omega: Orbit frequency (rad/s)
        delta: Composite gain
        direction: Label recorded in the report
        n_samples: Certificate samples per period
        h: Monodromy step (default T / 2000)
        fit_decay: Whether to simulate and fit the decay rate (NaN otherwise)

    Returns:
        StabilityReport
    """
    lp = LtvParams(delta=delta, omega=omega, p1=p1)
    cert = LyapunovCertificate.optimal(p1, omega)
    psd_ok = verify_certificate(lp, cert, n_samples)
    floquet = monodromy(lp, h)
    decay = fit_decay_rate(lp) if fit_decay else float("nan")
    integral = lyapunov_decay_integral(lp, cert)
    return StabilityReport(
        delta=delta,
        delta_dagger=delta_dagger(p1, omega),
        eta_dagger=cert.eta,
        p1=p1,
        omega=omega,
        direction=direction,
        psd_ok=psd_ok,
        monodromy=floquet.monodromy,
        multipliers=floquet.multipliers,
        spectral_radius=floquet.spectral_radius,
        decay_rate_est=decay,
        lyapunov_integral=integral,
        lyapunov_rate=lyapunov_decay_rate(lp, cert, integral),
    )


def stability_scan(p1: float, omega: float, delta_grid: Iterable[float], direction: str = "",
                   **kwargs) -> List[StabilityReport]:
    """
    Analyse every delta of a grid.

    Args:
        p1: Damping (1/s)
        omega: Orbit frequency (rad/s)
        delta_grid: Non-empty sequence of delta values
        direction: Label recorded in every report
        **kwargs: Passed to analyze_point

    Returns:
        One StabilityReport per grid point, in grid order
    """
    grid = [float(d) for d in delta_grid]
    if not grid:
        raise ValueError("delta grid must not be empty")

    logger.info(f"[STABILITY] ========== SCAN START ({direction or 'p1'}={p1}, {len(grid)} points) ==========")
    logger.info(f"[STABILITY] delta_dagger={delta_dagger(p1, omega):.6f}, eta_dagger={eta_dagger(p1, omega):.6f}")
    reports = []
    for d in grid:
        report = analyze_point(p1, omega, d, direction=direction, **kwargs)
        reports.append(report)
        if not report.consistent:
            logger.error(f"[STABILITY] ✗ delta={d:.6g}: certificate passed but Floquet radius "
                         f"{report.spectral_radius:.6f} >= 1")
        elif report.conservative:
            logger.info(f"[STABILITY] delta={d:.6g}: conservative region (radius {report.spectral_radius:.6f})")
        else:
            marker = "✓" if report.floquet_stable else "✗"
            logger.info(f"[STABILITY] {marker} delta={d:.6g}: cert_ok={report.psd_ok}, "
                        f"radius={report.spectral_radius:.6f}")
    logger.info(f"[STABILITY] ========== SCAN END ==========")
    return reports


def delta_grid(p1: float, omega: float, n: int = 20, upper: float = 1.0) -> np.ndarray:
    """n evenly spaced points in (0, upper * delta_dagger]."""
    top = upper * delta_dagger(p1, omega)
    return np.linspace(top / n, top, n)
