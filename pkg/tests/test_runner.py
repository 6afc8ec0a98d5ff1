import math
from pathlib import Path

import numpy as np
import pytest

import harness.runner as runner
from errors import ConfigError, DivergenceError
from estimator import analytic_lumped, swept_interval
from harness.config import load_config
from harness.excitation import ExcitationProfile
from harness.metrics import convergence_time, period_means
from harness.runner import (
    SweepRow,
    judge_sweep,
    run_bounds_sweep,
    run_closed_loop,
    run_open_loop_excitation,
    run_stability,
    run_sweep,
    run_target_switch,
    window_truth,
)
from harness.sampler import TrajectorySampler
from plant import RobotState

SMALL_KERNELS = {"kernel_width": 40, "kernel_height": 10}
DEFAULT_CONFIG = Path(__file__).resolve().parents[1] / "config" / "default.toml"


def ideal_events_config(make, **sections):
    """Ideal-fractional sensor with the analytic lumped constants of the small kernels."""
    base = make(camera={"mode": "ideal_fractional"}, estimator=SMALL_KERNELS)
    k1, k2 = base.kernels()
    intr, pattern, C, dt = base.intrinsics(), base.pattern(), base.camera.C, base.sim.dt
    estimator = {**SMALL_KERNELS,
                 "lumped_k1": analytic_lumped(pattern, intr, k1, C, dt),
                 "lumped_k2": analytic_lumped(pattern, intr, k2, C, dt),
                 **sections.pop("estimator", {})}
    camera = {"mode": "ideal_fractional", **sections.pop("camera", {})}
    return make(camera=camera, estimator=estimator, **sections)


class TestHelpers:
    def test_window_truth(self):
        start, end = RobotState(0.1, 0.5, 0.0), RobotState(0.105, 0.52, 0.01)
        q, l = window_truth(start, end, 0.0, 0.01, "window_mean")
        assert q == pytest.approx((0.105 ** 2 - 0.1 ** 2) / 0.02)
        assert l == pytest.approx(0.5)
        assert window_truth(start, end, 0.1, 0.01, "instant") == (0.0, 0.5)

    def test_excitation_reference_is_continuous_and_bounded(self):
        profile = ExcitationProfile(5.0, 0.25, 0.65, seed=1, x_start=0.1)
        t = np.linspace(0.0, 5.0, 5001)
        refs = np.array([profile.reference(s) for s in t])
        assert refs[0, 0] == pytest.approx(0.1)
        assert np.max(np.abs(refs[:, 1])) <= 0.65 + 1e-12
        assert np.max(np.abs(np.diff(refs[:, 0]))) < 0.65 * 1e-3 + 1e-9

    def test_sampled_trajectories_respect_their_bounds(self):
        sampler = TrajectorySampler(0.65, 3.0, seed=2)
        t = np.linspace(0.0, 1.0, 2001)
        for _ in range(20):
            traj = sampler.sample()
            assert traj.v_bound <= 0.65 + 1e-12
            assert traj.a_bound <= 3.0 + 1e-12
            assert np.max(np.abs(traj.velocity(t))) <= traj.v_bound + 1e-12
            lo, hi = traj.x_range
            assert np.all((traj.position(t) >= lo - 1e-12) & (traj.position(t) <= hi + 1e-12))

    def test_convergence_time(self):
        means = [(0.0, 0.1), (1.5, 0.16), (3.0, 0.17), (4.5, 0.18)]
        assert convergence_time(means, 0.18, 0.15) == 1.5
        assert convergence_time([(0.0, 0.1)], 0.18, 0.15) == math.inf

    def test_period_means_use_complete_periods(self):
        t = np.arange(0.0, 3.2, 0.01)
        means = period_means(t, np.ones_like(t), 1.5, 0.01)
        assert [start for start, _ in means] == pytest.approx([0.0, 1.5])


class TestCalibration:
    def test_ideal_fractional_constants_match_the_rate_model(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"}, estimator={**SMALL_KERNELS, "preamble": 5.0})
        result = run_open_loop_excitation(cfg)
        k1, k2 = cfg.kernels()
        intr, pattern = cfg.intrinsics(), cfg.pattern()
        by_name = {c.kernel: c for c in result.calibration}
        assert by_name["K1"].value == pytest.approx(analytic_lumped(pattern, intr, k1, 0.2, 0.01), rel=1e-4)
        assert by_name["K2"].value == pytest.approx(analytic_lumped(pattern, intr, k2, 0.2, 0.01), rel=1e-4)
        assert result.passed
        assert result.metrics["bound_violations"] == 0
        assert len(result.trajectory) == 500

    @pytest.mark.slow
    def test_latched_constants_match_the_rate_model(self):
        cfg = load_config(DEFAULT_CONFIG).with_section("estimator", preamble=60.0)
        result = run_open_loop_excitation(cfg)
        k1, k2 = cfg.kernels()
        intr, pattern, C, dt = cfg.intrinsics(), cfg.pattern(), cfg.camera.C, cfg.sim.dt
        by_name = {c.kernel: c for c in result.calibration}
        assert by_name["K1"].value == pytest.approx(analytic_lumped(pattern, intr, k1, C, dt), rel=0.02)
        assert by_name["K2"].value == pytest.approx(analytic_lumped(pattern, intr, k2, C, dt), rel=0.02)
        assert result.metrics["relative_error_K2"] <= 0.02
        assert result.passed
        assert result.metrics["bound_violations"] == 0
        assert len(result.events) > 0

    def test_configured_constants_skip_the_preamble(self, config_factory):
        cfg = ideal_events_config(config_factory, sim={"duration": 0.2})
        result = run_closed_loop(cfg)
        assert [c.n_samples for c in result.calibration] == [0, 0]


class TestBounds:
    def test_ideal_fractional_sweep_never_violates_the_bound(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "trajectories": 100})
        result = run_bounds_sweep(cfg)
        assert result.metrics["windows"] == 2000
        assert result.metrics["violations"] == 0
        assert result.metrics["raw_violations"] == 0
        assert result.passed

    def test_latched_sweep_needs_the_quantization_slack(self, config_factory):
        cfg = config_factory(estimator={**SMALL_KERNELS, "trajectories": 100})
        result = run_bounds_sweep(cfg)
        assert result.metrics["violations"] == 0
        assert result.metrics["raw_violation_rate"] >= 0.01
        assert {row.mode for row in result.bounds} == {"latched"}

    def test_state_bounds_follow_the_trajectory_limits(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "trajectories": 1})
        result = run_bounds_sweep(cfg)
        traj = TrajectorySampler(cfg.estimator.v_max, cfg.estimator.a_max, seed=cfg.sim.seed).sample()
        intr, dt = cfg.intrinsics(), cfg.sim.dt
        k1, _ = cfg.kernels()
        w_lo, w_hi = swept_interval(intr, k1, *traj.x_range)
        w_max = max(abs(w_lo), abs(w_hi))
        assert result.metrics["state_bound_K2"] == pytest.approx(traj.a_bound * dt / 2)
        assert result.metrics["state_bound_K1"] == pytest.approx(
            (traj.v_bound ** 2 / 2 + intr.Z * w_max * traj.a_bound / (2 * intr.f_x)) * dt)

    @pytest.mark.slow
    def test_full_ideal_sweep(self, config_factory):
        result = run_bounds_sweep(config_factory(camera={"mode": "ideal_fractional"}))
        assert result.metrics["windows"] == 20000
        assert result.metrics["violations"] == 0


class TestClosedLoop:
    def test_event_feedback_settles_onto_the_orbit(self, config_factory):
        cfg = ideal_events_config(config_factory, sim={"duration": 15.0})
        result = run_closed_loop(cfg)
        m = result.metrics
        assert m["convergence_time"] <= 10.0
        assert m["amplitude_error"] <= 0.15
        assert m["bound_violations"] == 0
        assert m["delta"] == pytest.approx(0.0486)
        assert result.passed
        assert len(result.trajectory) == 1500

    def test_calibrated_constants_close_the_loop(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "preamble": 5.0}, sim={"duration": 15.0})
        result = run_closed_loop(cfg)
        assert [c.n_samples for c in result.calibration] == [500, 500]
        assert result.metrics["amplitude_error"] <= 0.15
        assert result.passed

    @pytest.mark.slow
    def test_default_configuration_passes(self):
        result = run_closed_loop(load_config(DEFAULT_CONFIG))
        assert {c.kernel for c in result.calibration} == {"K1", "K2"}
        assert result.metrics["bound_violations"] == 0
        assert result.metrics["amplitude_error"] <= 0.15
        assert result.passed

    def test_oracle_feedback_is_tighter(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "feedback": "oracle"}, sim={"duration": 15.0})
        result = run_closed_loop(cfg)
        assert result.metrics["amplitude_error"] <= 0.02
        assert result.calibration == []

    def test_without_feedback_the_orbit_stays_offset(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             controller={"K": 0.0},
                             estimator={**SMALL_KERNELS, "feedback": "oracle"}, sim={"duration": 15.0})
        result = run_closed_loop(cfg)
        assert result.metrics["radius_spread"] > 0.25 * 0.18

    def test_leaving_the_scene_aborts_the_run(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "feedback": "oracle"},
                             scene={"extent": 0.05}, sim={"duration": 1.0})
        with pytest.raises(DivergenceError):
            run_closed_loop(cfg)

    def test_rows_follow_the_reference_header(self, config_factory):
        cfg = ideal_events_config(config_factory, sim={"duration": 0.1})
        first = run_closed_loop(cfg).trajectory[0]
        assert first.x == pytest.approx(0.1)
        assert first.x_star == 0.0
        assert first.xdot_star == pytest.approx(0.18 * 4.18879020478639)
        assert first.fb == 0.0


class TestTargetSwitch:
    @pytest.mark.slow
    def test_phases_settle_around_each_offset(self, config_factory):
        omega = 4.18879020478639
        cfg = ideal_events_config(config_factory, sim={
            "duration": 60.0,
            "x0": 0.0,
            "xdot0": 0.18 * omega,
            "target_schedule": [[0.0, 0.0], [20.0, 0.085], [40.0, -0.085]],
        })
        result = run_target_switch(cfg)
        assert result.metrics["phases"] == 3
        assert result.metrics["phase_position_error"] < 0.03
        assert result.passed
        targets = {round(r.target, 3) for r in result.trajectory}
        assert targets == {0.0, 0.085, -0.085}

    @pytest.mark.parametrize("error, passed", [(0.029, True), (0.031, False)])
    def test_phase_position_tolerance(self, config_factory, monkeypatch, error, passed):
        cfg = ideal_events_config(config_factory, sim={"duration": 0.1, "target_schedule": [[0.0, 0.0]]})
        monkeypatch.setattr(runner, "phase_position_errors", lambda *args: [error])
        result = run_target_switch(cfg)
        assert result.metrics["phase_position_error"] == error
        assert result.passed is passed

    def test_schedule_is_required(self, config_factory):
        cfg = ideal_events_config(config_factory, sim={"duration": 0.1})
        with pytest.raises(ConfigError) as info:
            run_target_switch(cfg)
        assert info.value.key == "sim.target_schedule"


class TestStabilityRun:
    def test_operating_point_verdicts(self, config_factory):
        result = run_stability(config_factory(sim={"scan_points": 5}))
        m = result.metrics
        assert m["delta"] == pytest.approx(0.0486)
        assert m["delta_dagger"] == pytest.approx(0.28410, abs=1e-4)
        assert m["floquet_radius"] < 1.0
        assert m["backward_floquet_radius"] < 1.0
        assert m["cert_ok"] == 1.0
        assert m["inconsistent_points"] == 0
        assert len(result.stability) == 12
        assert {r.direction for r in result.stability} == {"forward", "backward"}
        assert result.passed


class TestSweep:
    def test_residuals_grow_with_speed_and_ignore_the_pattern(self, config_factory):
        cfg = config_factory(camera={"mode": "ideal_fractional"},
                             estimator={**SMALL_KERNELS, "sweep_duration": 5.0})
        result = run_sweep(cfg)
        assert result.passed
        assert len(result.sweep) == 8
        assert len(result.sweep_calibration) == 16
        for name in ("e_q", "e_l"):
            for v in (0.45, 0.65):
                assert result.metrics[f"{name}_spread_v{v}"] < 0.25
        slow = [r for r in result.sweep if r.v_max == 0.45]
        fast = [r for r in result.sweep if r.v_max == 0.65]
        assert all(f.e_q > s.e_q and f.e_l > s.e_l for s, f in zip(slow, fast))


def sweep_rows(e_q_slow):
    """Two (sigma, k) points at two speeds; e_q of the slow points is given per point."""
    rows = []
    for (sigma, k), slow in zip([(300.0, 1e-3), (360.0, 2e-3)], e_q_slow):
        rows.append(SweepRow(sigma, k, 0.45, 3.0, slow, 0.001))
        rows.append(SweepRow(sigma, k, 0.65, 3.0, 0.02, 0.002))
    return rows


class TestSweepVerdict:
    def test_uniform_growing_residuals_pass(self):
        passed, metrics = judge_sweep(sweep_rows([0.010, 0.011]), (0.45, 0.65))
        assert passed
        assert metrics["monotone"] == 1.0
        assert metrics["e_q_spread_v0.45"] == pytest.approx(0.001 / 0.0105)

    def test_pattern_dependent_residuals_fail(self):
        passed, metrics = judge_sweep(sweep_rows([0.010, 0.014]), (0.45, 0.65))
        assert not passed
        assert metrics["monotone"] == 1.0
        assert metrics["invariant"] == 0.0
        assert metrics["e_q_spread_v0.45"] == pytest.approx(0.004 / 0.012)

    def test_residuals_that_shrink_with_speed_fail(self):
        passed, metrics = judge_sweep(sweep_rows([0.021, 0.021]), (0.45, 0.65))
        assert not passed
        assert metrics["monotone"] == 0.0
        assert metrics["invariant"] == 1.0
