"""
Quadratic Lyapunov certificate V = e^T P e for the periodic error dynamics.

With P = [[1, 1/p1], [1/p1, eta]] the decay matrix Q(t) = -(P A + A^T P) / 2
must be positive semidefinite over a period. det Q vanishes at the isolated
times where cos(wt) = 0, so sampling is refined around each local minimum.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, linalg, optimize

from errors import ContractViolation
from stability.ltv import LtvParams, eta_dagger

logger = logging.getLogger(__name__)

PSD_TOLERANCE = -1e-12
DEFAULT_SAMPLES = 4096
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class LyapunovCertificate:
    eta: float
    p1: float

    def __post_init__(self):
        if not self.eta * self.p1 ** 2 > 1.0:
            raise ContractViolation(f"P is not positive definite: eta*p1^2 = {self.eta * self.p1 ** 2:.6g} <= 1")

    @property
    def P(self) -> np.ndarray:
        return np.array([[1.0, 1.0 / self.p1], [1.0 / self.p1, self.eta]])

    @classmethod
    def optimal(cls, p1: float, omega: float) -> "LyapunovCertificate":
        return cls(eta=eta_dagger(p1, omega), p1=p1)


def _q_entries(lp: LtvParams, cert: LyapunovCertificate, t):
    wt = lp.omega * np.asarray(t, dtype=float)
    c = lp.delta * lp.omega ** 2 * np.cos(wt) ** 2
    s = lp.delta * lp.omega * np.sin(2.0 * wt)
    q11 = c / cert.p1
    q12 = 0.5 * (s / cert.p1 + cert.eta * c)
    q22 = cert.eta * cert.p1 - 1.0 / cert.p1 + cert.eta * s
    return q11, q12, q22


def Q_of_t(lp: LtvParams, cert: LyapunovCertificate, t: float) -> np.ndarray:
    """Symmetric decay matrix -(P A(t) + A(t)^T P) / 2."""
    q11, q12, q22 = (float(v) for v in _q_entries(lp, cert, t))
    return np.array([[q11, q12], [q12, q22]])


def q_trace_det(lp: LtvParams, cert: LyapunovCertificate, t):
    """Vectorised trace and determinant of Q(t)."""
    q11, q12, q22 = _q_entries(lp, cert, t)
    return q11 + q22, q11 * q22 - q12 * q12


def determinant_factor(lp: LtvParams, cert: LyapunovCertificate, t):
    """B(t) with det Q = -(delta w^2 cos^2 / (4 p1^2)) B; Q is PSD where B <= 0."""
    wt = lp.omega * np.asarray(t, dtype=float)
    p1, eta, w = cert.p1, cert.eta, lp.omega
    return 4.0 * (1.0 - eta * p1 ** 2) + lp.delta * (eta * w * p1 * np.cos(wt) - 2.0 * np.sin(wt)) ** 2


def certificate_minima(lp: LtvParams, cert: LyapunovCertificate,
                       n_samples: int = DEFAULT_SAMPLES) -> Tuple[float, float, float]:
    """
    Smallest trace and determinant of Q over one period.

    Args:
        lp: LTV parameters
        cert: Certificate
        n_samples: Uniform samples per period (>= 1000)

    Returns:
        (min trace, min det, time of min det)
    """
    if n_samples < MIN_SAMPLES:
        raise ContractViolation(f"need >= {MIN_SAMPLES} samples per period, got {n_samples}")
    T = lp.period
    t = np.linspace(0.0, T, n_samples, endpoint=False)
    trace, det = q_trace_det(lp, cert, t)
    min_trace = float(trace.min())
    idx = int(np.argmin(det))
    min_det, t_min = float(det[idx]), float(t[idx])

    # refine around every sampled local minimum of det
    step = T / n_samples
    local = np.nonzero((det < np.roll(det, 1)) & (det <= np.roll(det, -1)))[0]
    for i in local:
        res = optimize.minimize_scalar(
            lambda s: float(q_trace_det(lp, cert, s)[1]),
            bounds=(t[i] - step, t[i] + step), method="bounded", options={"xatol": 1e-14},
        )
        if res.fun < min_det:
            min_det, t_min = float(res.fun), float(res.x % T)
    return min_trace, min_det, t_min


def verify_certificate(lp: LtvParams, cert: LyapunovCertificate, n_samples: int = DEFAULT_SAMPLES) -> bool:
    """
    Sampled PSD check of Q(t) over one period.

    Returns:
        True iff trace and det stay >= -1e-12 everywhere sampled or refined
    """
    min_trace, min_det, t_min = certificate_minima(lp, cert, n_samples)
    ok = min_trace >= PSD_TOLERANCE and min_det >= PSD_TOLERANCE
    marker = "✓" if ok else "✗"
    logger.debug(f"[STABILITY] {marker} Certificate delta={lp.delta:.6g} eta={cert.eta:.6g}: "
                 f"min trace={min_trace:.3e}, min det={min_det:.3e} at t={t_min:.6f}")
    return ok


def lyapunov_decay_integral(lp: LtvParams, cert: LyapunovCertificate) -> float:
    """Integral over one period of the smallest eigenvalue of Q(t)."""
    value, _ = integrate.quad(
        lambda s: float(linalg.eigvalsh(Q_of_t(lp, cert, s))[0]), 0.0, lp.period, limit=200,
    )
    return float(value)


def lyapunov_decay_rate(lp: LtvParams, cert: LyapunovCertificate, integral: Optional[float] = None) -> float:
    """Exponential rate implied by the integral: mu / (T lambda_max(P))."""
    if integral is None:
        integral = lyapunov_decay_integral(lp, cert)
    return integral / (lp.period * float(linalg.eigvalsh(cert.P)[-1]))
