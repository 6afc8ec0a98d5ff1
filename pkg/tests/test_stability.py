import math

import numpy as np
import pytest

from errors import ContractViolation
from stability import (
    LtvParams,
    LyapunovCertificate,
    admissible_delta,
    analyze_point,
    delta_dagger,
    delta_grid,
    determinant_factor,
    eta_dagger,
    fit_decay_rate,
    floquet_decay_rate,
    liouville_determinant,
    lyapunov_decay_integral,
    maximize_eta,
    monodromy,
    stability_scan,
    verify_certificate,
)

OMEGA = 2 * math.pi / 1.5
P1_FORWARD = 2.530
P1_BACKWARD = 2.954
DELTA = 0.0486


class TestClosedForms:
    def test_default_operating_point(self):
        assert delta_dagger(P1_FORWARD, OMEGA) == pytest.approx(0.28410, abs=1e-4)
        assert eta_dagger(P1_FORWARD, OMEGA) == pytest.approx(0.40123, abs=1e-4)

    def test_numerical_maximum_agrees_with_the_closed_form(self):
        eta, best = maximize_eta(P1_FORWARD, OMEGA)
        assert eta == pytest.approx(eta_dagger(P1_FORWARD, OMEGA), rel=1e-4)
        assert best == pytest.approx(delta_dagger(P1_FORWARD, OMEGA), rel=1e-6)

    def test_admissible_delta_at_eta_dagger_is_delta_dagger(self):
        eta = eta_dagger(P1_BACKWARD, OMEGA)
        assert admissible_delta(eta, P1_BACKWARD, OMEGA) == pytest.approx(delta_dagger(P1_BACKWARD, OMEGA))

    def test_liouville_determinant(self):
        assert liouville_determinant(LtvParams(DELTA, OMEGA, P1_FORWARD)) == pytest.approx(0.14994, abs=1e-5)

    @pytest.mark.parametrize("d", [0.0, 0.1, 0.5])
    def test_liouville_determinant_does_not_depend_on_delta(self, d):
        expected = math.exp(-P1_FORWARD * math.pi / OMEGA)
        assert liouville_determinant(LtvParams(d, OMEGA, P1_FORWARD)) == pytest.approx(expected, rel=1e-9)

    def test_invalid_parameters(self):
        with pytest.raises(ContractViolation):
            delta_dagger(0.0, OMEGA)
        with pytest.raises(ContractViolation):
            LtvParams(-0.1, OMEGA, P1_FORWARD)


class TestCertificate:
    def test_certificate_passes_at_the_operating_point(self):
        lp = LtvParams(DELTA, OMEGA, P1_FORWARD)
        assert verify_certificate(lp, LyapunovCertificate.optimal(P1_FORWARD, OMEGA))

    def test_certificate_fails_beyond_delta_dagger(self):
        lp = LtvParams(1.5 * delta_dagger(P1_FORWARD, OMEGA), OMEGA, P1_FORWARD)
        assert not verify_certificate(lp, LyapunovCertificate.optimal(P1_FORWARD, OMEGA))

    def test_determinant_factor_peaks_at_zero_on_delta_dagger(self):
        lp = LtvParams(delta_dagger(P1_FORWARD, OMEGA), OMEGA, P1_FORWARD)
        cert = LyapunovCertificate.optimal(P1_FORWARD, OMEGA)
        t = np.linspace(0.0, lp.period, 20001)
        assert determinant_factor(lp, cert, t).max() == pytest.approx(0.0, abs=1e-6)

    def test_decay_integral_is_positive(self):
        lp = LtvParams(DELTA, OMEGA, P1_FORWARD)
        assert lyapunov_decay_integral(lp, LyapunovCertificate.optimal(P1_FORWARD, OMEGA)) > 0

    def test_weight_must_make_P_positive_definite(self):
        with pytest.raises(ContractViolation):
            LyapunovCertificate(eta=0.5 / P1_FORWARD ** 2, p1=P1_FORWARD)

    def test_too_few_samples_rejected(self):
        lp = LtvParams(DELTA, OMEGA, P1_FORWARD)
        with pytest.raises(ContractViolation):
            verify_certificate(lp, LyapunovCertificate.optimal(P1_FORWARD, OMEGA), n_samples=100)


class TestFloquet:
    def test_operating_point_is_stable(self):
        result = monodromy(LtvParams(DELTA, OMEGA, P1_FORWARD))
        assert result.spectral_radius < 1.0

    @pytest.mark.parametrize("delta", [0.0, DELTA, 0.2, 0.5])
    def test_determinant_matches_liouville(self, delta):
        lp = LtvParams(delta, OMEGA, P1_FORWARD)
        assert monodromy(lp).determinant == pytest.approx(liouville_determinant(lp), rel=1e-6)

    def test_coarse_step_rejected(self):
        lp = LtvParams(DELTA, OMEGA, P1_FORWARD)
        with pytest.raises(ContractViolation):
            monodromy(lp, h=lp.period / 500)

    def test_simulated_decay_matches_the_multipliers(self):
        lp = LtvParams(0.5 * delta_dagger(P1_FORWARD, OMEGA), OMEGA, P1_FORWARD)
        expected = floquet_decay_rate(monodromy(lp), lp.period)
        fitted = fit_decay_rate(lp)
        assert fitted > 0
        assert fitted == pytest.approx(expected, rel=0.2)


class TestScan:
    @pytest.mark.parametrize("p1", [P1_FORWARD, P1_BACKWARD])
    def test_grid_up_to_delta_dagger_is_certified_and_stable(self, p1):
        reports = stability_scan(p1, OMEGA, delta_grid(p1, OMEGA, n=20), fit_decay=False)
        assert len(reports) == 20
        assert all(r.psd_ok for r in reports)
        assert all(r.floquet_stable for r in reports)
        assert all(r.consistent for r in reports)
        for r in reports:
            lp = LtvParams(r.delta, OMEGA, p1)
            assert np.linalg.det(r.monodromy) == pytest.approx(liouville_determinant(lp), rel=1e-6)

    def test_grid_spacing(self):
        grid = delta_grid(P1_FORWARD, OMEGA, n=4)
        top = delta_dagger(P1_FORWARD, OMEGA)
        np.testing.assert_allclose(grid, [top / 4, top / 2, 3 * top / 4, top])

    def test_point_beyond_the_bound_is_flagged(self):
        report = analyze_point(P1_FORWARD, OMEGA, 1.5 * delta_dagger(P1_FORWARD, OMEGA), fit_decay=False)
        assert not report.within_bound
        assert not report.psd_ok
        assert report.consistent
        assert math.isnan(report.decay_rate_est)

    def test_row_uses_integer_flags(self):
        row = analyze_point(P1_FORWARD, OMEGA, DELTA, direction="forward", fit_decay=False).as_row()
        assert row["cert_ok"] == 1
        assert row["direction"] == "forward"
        assert row["conservative"] == 0

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            stability_scan(P1_FORWARD, OMEGA, [])
