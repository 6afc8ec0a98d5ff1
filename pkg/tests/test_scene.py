import numpy as np
import pytest

from errors import SceneDomainError
from scene import (
    CameraIntrinsics,
    LinearProfile,
    QuadraticProfile,
    ScenePattern,
    build_profile,
    derivative_suprema,
    discover_profiles,
    image_shift,
    intensity_at_time,
    log_intensity,
    profile_derivative,
    shifted_coordinate,
)


class TestCamera:
    def test_image_shift_scales_with_focal_length_over_distance(self, intr):
        assert image_shift(intr, 0.1) == pytest.approx(-100.0)
        far = CameraIntrinsics(Z=2.0)
        assert image_shift(far, 0.1) == pytest.approx(-50.0)

    def test_image_shift_is_vectorised(self, intr):
        np.testing.assert_allclose(image_shift(intr, np.array([0.0, -0.2])), [0.0, 200.0])

    @pytest.mark.parametrize("kwargs", [{"f_x": 0.0}, {"Z": -1.0}, {"o_x": 1280.0}, {"width": 0}])
    def test_invalid_intrinsics_rejected(self, kwargs):
        with pytest.raises(SceneDomainError):
            CameraIntrinsics(**kwargs)


class TestProfiles:
    def test_registry_lists_both_profiles(self):
        assert set(discover_profiles()) == {"linear", "quadratic"}

    def test_build_profile_by_name(self):
        profile = build_profile("quadratic", 330.0)
        assert isinstance(profile, QuadraticProfile)
        assert profile.sigma == 330.0

    def test_unknown_profile_rejected(self):
        with pytest.raises(SceneDomainError):
            build_profile("cubic", 1.0)

    def test_linear_derivatives(self):
        profile = LinearProfile(1.299e-3)
        assert float(profile.derivative(123.0, 1)) == pytest.approx(1.299e-3)
        assert float(profile.derivative(123.0, 2)) == 0.0
        assert float(profile.derivative(123.0, 3)) == 0.0

    def test_quadratic_derivatives(self):
        profile = QuadraticProfile(330.0)
        assert float(profile.value(330.0)) == pytest.approx(-0.5)
        assert float(profile.derivative(100.0, 1)) == pytest.approx(-100.0 / 330.0 ** 2)
        assert float(profile.derivative(100.0, 2)) == pytest.approx(-1.0 / 330.0 ** 2)
        assert float(profile.derivative(100.0, 3)) == 0.0

    def test_bad_derivative_order(self):
        with pytest.raises(SceneDomainError):
            LinearProfile(1e-3).derivative(0.0, 4)

    def test_quadratic_suprema_use_farthest_coordinate(self):
        sup = derivative_suprema(QuadraticProfile(330.0), 200.0, -50.0)
        assert sup.F1 == pytest.approx(200.0 / 330.0 ** 2)
        assert sup.F2 == pytest.approx(1.0 / 330.0 ** 2)
        assert sup.F3 == 0.0

    def test_linear_suprema(self):
        sup = derivative_suprema(LinearProfile(-2e-3), -10.0, 10.0)
        assert (sup.F1, sup.F2, sup.F3) == (pytest.approx(2e-3), 0.0, 0.0)

    @pytest.mark.parametrize("cls", [LinearProfile, QuadraticProfile])
    def test_zero_parameter_rejected(self, cls):
        with pytest.raises(SceneDomainError):
            cls(0.0)


class TestPattern:
    def test_rows_above_split_are_quadratic(self, dual_pattern):
        assert isinstance(dual_pattern.profile_for_row(359), QuadraticProfile)
        assert isinstance(dual_pattern.profile_for_row(360), LinearProfile)

    def test_log_intensity_per_half(self, intr, dual_pattern):
        assert float(log_intensity(dual_pattern, intr, 330.0, 10)) == pytest.approx(-0.5)
        assert float(log_intensity(dual_pattern, intr, 100.0, 700)) == pytest.approx(0.1299)

    def test_out_of_sensor_rejected(self, intr, dual_pattern):
        with pytest.raises(SceneDomainError):
            log_intensity(dual_pattern, intr, 700.0, 10)
        with pytest.raises(SceneDomainError):
            profile_derivative(dual_pattern, intr, 0.0, 720, 1)

    def test_vectorised_derivative_over_mixed_rows(self, intr, dual_pattern):
        values = profile_derivative(dual_pattern, intr, np.array([33.0, 33.0]), np.array([0, 719]), 1)
        np.testing.assert_allclose(values, [-33.0 / 330.0 ** 2, 1.299e-3])

    def test_split_row_must_fit_sensor(self, intr):
        with pytest.raises(SceneDomainError):
            ScenePattern.dual_split(330.0, 1e-3, 720).check_against(intr)

    def test_schedule_must_be_sorted(self):
        with pytest.raises(SceneDomainError):
            ScenePattern.linear_pattern(1e-3).with_schedule([(5.0, 0.1), (1.0, 0.0)])

    def test_center_offset_steps(self):
        pattern = ScenePattern.linear_pattern(1e-3).with_schedule([(0.0, -0.085), (24.0, 0.085)])
        assert pattern.center_offset(-1.0) == 0.0
        assert pattern.center_offset(10.0) == -0.085
        assert pattern.center_offset(24.0) == 0.085
        assert pattern.center_offset(100.0) == 0.085

    def test_camera_on_target_sees_unshifted_profile(self, intr):
        pattern = ScenePattern.quadratic_pattern(330.0).with_schedule([(0.0, 0.085)])
        assert float(shifted_coordinate(pattern, intr, 0.0, 0.085, 1.0)) == pytest.approx(0.0, abs=1e-9)
        assert float(intensity_at_time(pattern, intr, 0.0, 5, 0.085, 1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_moving_camera_shifts_profile(self, intr):
        pattern = ScenePattern.linear_pattern(1e-3)
        # camera at +0.1 m: pattern appears 100 px further left
        assert float(intensity_at_time(pattern, intr, 0.0, 0, 0.1, 0.0)) == pytest.approx(-0.1)
