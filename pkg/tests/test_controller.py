import math

import pytest

from controller import (
    ControllerParams,
    clamped_control,
    control_input,
    delta,
    orbit_feedback,
    reference,
    tracking_policy,
)
from errors import ConfigError, ContractViolation
from plant import LumpedParams, PlantParams, RobotState, integrate

OMEGA = 2 * math.pi / 1.5


@pytest.fixture
def cp():
    return ControllerParams(a=0.18, omega=OMEGA, K=1.5)


class TestReference:
    def test_delta_at_the_default_operating_point(self, cp):
        assert delta(cp) == pytest.approx(0.0486, abs=1e-12)

    def test_period(self, cp):
        assert cp.period == pytest.approx(1.5)

    def test_reference_starts_at_the_origin_moving_forward(self, cp):
        ref = reference(cp, 0.0, origin=0.085)
        assert ref.x_star == pytest.approx(0.085)
        assert ref.xdot_star == pytest.approx(0.18 * OMEGA)

    def test_orbit_feedback_equals_x_xdot_squared_on_the_orbit(self, cp):
        for t in (0.1, 0.4, 1.3):
            ref = reference(cp, t)
            assert orbit_feedback(cp, t) == pytest.approx(ref.x_star * ref.xdot_star ** 2)

    @pytest.mark.parametrize("kwargs, key", [
        ({"a": 0.0, "omega": 1.0, "K": 1.0}, "controller.a"),
        ({"a": 0.1, "omega": -1.0, "K": 1.0}, "controller.omega"),
        ({"a": 0.1, "omega": 1.0, "K": -0.5}, "controller.K"),
    ])
    def test_invalid_params(self, kwargs, key):
        with pytest.raises(ConfigError) as info:
            ControllerParams(**kwargs)
        assert info.value.key == key


class TestControlLaw:
    def test_feedback_bracket_vanishes_on_the_orbit(self, cp):
        params = LumpedParams(2.53, 33.977, 1.349)
        t = 0.3
        zero_gain = ControllerParams(a=cp.a, omega=cp.omega, K=0.0)
        assert control_input(cp, params, t, orbit_feedback(cp, t)) == pytest.approx(
            control_input(zero_gain, params, t, 0.0))

    def test_excess_feedback_lowers_the_command(self, cp):
        params = LumpedParams(2.53, 33.977, 1.349)
        on_orbit = control_input(cp, params, 0.3, orbit_feedback(cp, 0.3))
        assert control_input(cp, params, 0.3, orbit_feedback(cp, 0.3) + 0.01) == pytest.approx(
            on_orbit - 1.5 * 0.01 / 33.977)

    def test_zero_input_gain_rejected(self, cp):
        with pytest.raises(ContractViolation):
            control_input(cp, LumpedParams(1.0, 0.0, 0.0), 0.0, 0.0)

    def test_saturation_is_reported(self, cp):
        u, clamped = clamped_control(cp, PlantParams(), 0.0, fb=-100.0, xdot_estimate=0.0)
        assert clamped
        assert u == 1.0

    def test_exact_feedback_keeps_the_robot_on_the_orbit(self, cp):
        pp = PlantParams()
        start = RobotState(0.0, cp.a * cp.omega, 0.0)
        end = integrate(start, tracking_policy(cp, pp), pp, h=1e-3, n_steps=1500)
        assert end.x == pytest.approx(0.0, abs=1e-6)
        assert end.x_dot == pytest.approx(cp.a * cp.omega, rel=1e-6)


class TestTargetShift:
    @pytest.mark.parametrize("t", [0.0, 0.2, 0.9])
    def test_reference_moves_with_the_target(self, cp, t):
        base, shifted = reference(cp, t), reference(cp, t, origin=0.085)
        assert shifted.x_star == pytest.approx(base.x_star + 0.085)
        assert shifted.xdot_star == base.xdot_star

    @pytest.mark.parametrize("x, x_dot", [(0.05, 0.4), (-0.12, -0.3), (0.2, 0.0)])
    def test_command_depends_only_on_the_offset_from_the_target(self, cp, x, x_dot):
        pp = PlantParams()
        centred = tracking_policy(cp, pp)
        shifted = tracking_policy(cp, pp, origin=-0.085)
        assert shifted(0.4, x - 0.085, x_dot) == pytest.approx(centred(0.4, x, x_dot))

    def test_shifted_trajectory_is_a_translate(self, cp):
        pp = PlantParams()
        start = RobotState(0.1, 0.0, 0.0)
        centred = integrate(start, tracking_policy(cp, pp), pp, h=1e-3, n_steps=3000)
        moved = integrate(RobotState(0.1 + 0.085, 0.0, 0.0), tracking_policy(cp, pp, origin=0.085),
                          pp, h=1e-3, n_steps=3000)
        assert moved.x - 0.085 == pytest.approx(centred.x, abs=1e-9)
        assert moved.x_dot == pytest.approx(centred.x_dot, abs=1e-9)
