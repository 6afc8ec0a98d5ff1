import math

import numpy as np
import pytest

from errors import ConfigError, ContractViolation
from plant import (
    BACKWARD,
    FORWARD,
    LumpedParams,
    PlantParams,
    RobotState,
    blend_slope,
    blended_params,
    clamp_input,
    dynamics_deriv,
    integrate,
    rk4_step,
    step_rk4,
)

SYMMETRIC = PlantParams(forward=LumpedParams(2.0, 30.0, 0.0), backward=LumpedParams(2.0, 30.0, 0.0))


class TestParams:
    def test_blend_at_rest_is_the_average(self):
        p = blended_params(PlantParams(), 0.0)
        assert p.p1 == pytest.approx((FORWARD.p1 + BACKWARD.p1) / 2)
        assert p.p3 == pytest.approx((FORWARD.p3 + BACKWARD.p3) / 2)

    def test_blend_saturates_to_the_driving_direction(self):
        assert blended_params(PlantParams(), 1.0).p2 == pytest.approx(FORWARD.p2, rel=1e-6)
        assert blended_params(PlantParams(), -1.0).p2 == pytest.approx(BACKWARD.p2, rel=1e-6)

    def test_blend_slope_matches_finite_difference(self):
        pp = PlantParams()
        eps = 1e-7
        numeric = (blended_params(pp, 0.01 + eps).p1 - blended_params(pp, 0.01 - eps).p1) / (2 * eps)
        assert blend_slope(pp, 0.01).p1 == pytest.approx(numeric, rel=1e-5)

    @pytest.mark.parametrize("kwargs, key", [
        ({"forward": LumpedParams(0.0, 33.0, 1.0)}, "plant.forward"),
        ({"backward": LumpedParams(2.9, -1.0, 1.0)}, "plant.backward"),
        ({"beta": 0.0}, "plant.beta"),
        ({"u_limits": (1.0, -1.0)}, "plant.u_limits"),
    ])
    def test_invalid_params(self, kwargs, key):
        with pytest.raises(ConfigError) as info:
            PlantParams(**kwargs)
        assert info.value.key == key


class TestDynamics:
    def test_friction_at_rest(self):
        _, x_ddot = dynamics_deriv(RobotState(0.0, 0.0), 0.0, PlantParams())
        assert x_ddot == pytest.approx(-(FORWARD.p3 + BACKWARD.p3) / 2)

    @pytest.mark.parametrize("u, expected", [(1.5, (1.0, True)), (-2.0, (-1.0, True)), (0.3, (0.3, False))])
    def test_clamp(self, u, expected):
        assert clamp_input(u, (-1.0, 1.0)) == expected

    def test_input_is_clamped_inside_the_dynamics(self):
        state = RobotState(0.0, 0.0)
        assert dynamics_deriv(state, 5.0, SYMMETRIC) == dynamics_deriv(state, 1.0, SYMMETRIC)

    def test_rk4_matches_the_closed_form_step_response(self):
        state = integrate(RobotState(0.0, 0.0), 0.1, SYMMETRIC, h=1e-3, n_steps=1000)
        assert state.t == pytest.approx(1.0)
        assert state.x_dot == pytest.approx(1.5 * (1 - math.exp(-2.0)), rel=1e-9)
        assert state.x == pytest.approx(1.5 - 0.75 * (1 - math.exp(-2.0)), rel=1e-9)

    def test_policy_is_evaluated_at_the_stage_times(self):
        times = []

        def policy(t, x, x_dot):
            times.append(t)
            return 0.0

        step_rk4(RobotState(0.0, 0.0, 1.0), policy, SYMMETRIC, h=0.01)
        assert times == pytest.approx([1.0, 1.005, 1.005, 1.01])

    def test_rk4_step_on_a_matrix_state(self):
        y = rk4_step(lambda t, y: -y, 0.0, np.eye(2), 0.1)
        np.testing.assert_allclose(y, math.exp(-0.1) * np.eye(2), rtol=1e-6)

    def test_non_finite_input_rejected(self):
        with pytest.raises(ContractViolation):
            step_rk4(RobotState(0.0, 0.0), math.nan, SYMMETRIC, h=1e-3)

    def test_non_positive_step_rejected(self):
        with pytest.raises(ContractViolation):
            step_rk4(RobotState(0.0, 0.0), 0.0, SYMMETRIC, h=0.0)

    def test_non_finite_state_rejected(self):
        with pytest.raises(ContractViolation):
            RobotState(math.inf, 0.0)


class TestPhysicalProperties:
    def test_forward_steady_state_velocity(self):
        forward_only = PlantParams(forward=FORWARD, backward=FORWARD)
        state = integrate(RobotState(0.0, 0.0), 0.1, forward_only, h=1e-3, n_steps=10000)
        assert state.x_dot == pytest.approx((3.3977 - 1.349) / 2.530, rel=1e-6)
        assert state.x_dot == pytest.approx(0.80976, abs=1e-5)

    def test_unforced_motion_loses_energy(self):
        state = RobotState(0.0, 0.5)
        energies = [0.125]
        for _ in range(2000):
            state = step_rk4(state, 0.0, SYMMETRIC, h=1e-3)
            energies.append(0.5 * state.x_dot ** 2)
        assert np.all(np.diff(energies) < 0)
        assert energies[-1] == pytest.approx(0.125 * math.exp(-8.0), rel=1e-6)

    def test_friction_brakes_a_coasting_robot(self):
        forward_only = PlantParams(forward=FORWARD, backward=FORWARD)
        state = RobotState(0.0, 0.5)
        speeds = [0.5]
        for _ in range(200):
            state = step_rk4(state, 0.0, forward_only, h=1e-3)
            speeds.append(state.x_dot)
        assert np.all(np.diff(np.square(speeds)) < 0)
        assert speeds[-1] > 0
