"""
Exponential-stability analysis of the limit cycle.

Usage:
    from stability import delta_dagger, stability_scan, delta_grid

    reports = stability_scan(2.530, omega, delta_grid(2.530, omega))
"""

from stability.certificate import (
    DEFAULT_SAMPLES,
    PSD_TOLERANCE,
    LyapunovCertificate,
    Q_of_t,
    certificate_minima,
    determinant_factor,
    lyapunov_decay_integral,
    lyapunov_decay_rate,
    q_trace_det,
    verify_certificate,
)
from stability.floquet import (
    FloquetResult,
    fit_decay_rate,
    floquet_decay_rate,
    liouville_determinant,
    monodromy,
    simulate_norms,
)
from stability.ltv import (
    A_of_t,
    LtvParams,
    admissible_delta,
    delta_dagger,
    eta_dagger,
    maximize_eta,
    trace_A,
)
from stability.scan import (
    STABILITY_HEADER,
    StabilityReport,
    analyze_point,
    delta_grid,
    stability_scan,
)

__all__ = [
    'DEFAULT_SAMPLES',
    'PSD_TOLERANCE',
    'LyapunovCertificate',
    'Q_of_t',
    'certificate_minima',
    'determinant_factor',
    'lyapunov_decay_integral',
    'lyapunov_decay_rate',
    'q_trace_det',
    'verify_certificate',
    'FloquetResult',
    'fit_decay_rate',
    'floquet_decay_rate',
    'liouville_determinant',
    'monodromy',
    'simulate_norms',
    'A_of_t',
    'LtvParams',
    'admissible_delta',
    'delta_dagger',
    'eta_dagger',
    'maximize_eta',
    'trace_A',
    'STABILITY_HEADER',
    'StabilityReport',
    'analyze_point',
    'delta_grid',
    'stability_scan',
]
