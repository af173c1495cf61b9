import numpy as np
import pytest

from shockaudit.eos import FluidState, GasModel
from shockaudit.errors import DomainError, InvalidStateError
from shockaudit.rh import entropy_admissible, hugoniot_solve_barotropic
from shockaudit.shock1d import (
    Domain1D,
    PiecewiseShockSolution,
    energy_rate,
    evaluate,
    length_rate,
    solution_residuals,
    stationary_shock_example,
    translated,
    volume_potential_mismatch,
)


def gamma_sweep_energy_rate(gamma):
    """Closed-form interface energy rate of the reference shock."""
    return -3.0 + 2.0 * gamma / (gamma - 1.0) - 2.0 * gamma / ((gamma - 1.0) * (2.0 ** gamma - 1.0))


class TestExampleConstruction:
    def test_gamma_two(self):
        sol = stationary_shock_example(2.0)
        assert sol.model.K == pytest.approx(2.0 / 3.0, abs=1e-16)
        assert sol.shock_speeds == (0.0,)
        assert sol.domain.x_min == -1.0 and sol.domain.x_max == 1.0

    def test_gamma_14_residuals(self):
        sol = stationary_shock_example(1.4)
        assert sol.model.K == 2.0 / (2.0 ** 1.4 - 1.0)
        for res in solution_residuals(sol):
            assert res.conserved_max_abs() < 1e-12

    def test_gamma_one_rejected(self):
        with pytest.raises(InvalidStateError):
            stationary_shock_example(1.0)

    def test_constructor_validates_jump_conditions(self):
        model = GasModel.barotropic(K=2.0 / 3.0, gamma=2.0)
        with pytest.raises(InvalidStateError):
            PiecewiseShockSolution(
                model=model,
                states=(FluidState(1.0, 2.0), FluidState(2.0, 1.5)),
                shock_positions_t0=(0.0,),
                shock_speeds=(0.0,),
            )

    def test_positions_must_increase(self):
        sol = stationary_shock_example(2.0)
        with pytest.raises(InvalidStateError):
            PiecewiseShockSolution(
                model=sol.model,
                states=(FluidState(1.0, 2.0), FluidState(2.0, 1.0), FluidState(1.0, 2.0)),
                shock_positions_t0=(0.2, 0.2),
                shock_speeds=(0.0, 0.0),
                validate=False,
            )

    def test_horizon_from_approaching_shocks(self):
        model = GasModel.barotropic(K=1.0, gamma=1.4)
        left = FluidState(1.0, 0.0)
        u1, v1 = hugoniot_solve_barotropic(left, 2.0, model)
        mid = FluidState(2.0, u1)
        u2, v2 = hugoniot_solve_barotropic(mid, 3.0, model)
        sol = PiecewiseShockSolution(
            model=model,
            states=(left, mid, FluidState(3.0, u2)),
            shock_positions_t0=(-0.3, 0.3),
            shock_speeds=(v1, v2),
            domain=Domain1D(-5.0, 5.0),
        )
        assert v1 > v2
        expected = 0.6 / (v1 - v2) - 1e-9  # collision time minus the safety margin
        assert sol.horizon[1] == pytest.approx(expected, abs=1e-12)
        with pytest.raises(DomainError):
            evaluate(sol, sol.horizon[1] + 0.1, 0.0)


class TestEvaluate:
    def test_left_region(self):
        sol = stationary_shock_example(2.0)
        assert evaluate(sol, 0.5, -0.3) == FluidState(1.0, 2.0)

    def test_right_region(self):
        sol = stationary_shock_example(2.0)
        assert evaluate(sol, 0.5, 0.3) == FluidState(2.0, 1.0)

    def test_on_shock_reports_left_state(self):
        sol = stationary_shock_example(2.0)
        assert evaluate(sol, 0.5, 0.0) == FluidState(1.0, 2.0)

    def test_out_of_domain(self):
        sol = stationary_shock_example(2.0)
        with pytest.raises(DomainError):
            evaluate(sol, 0.0, 1.5)

    def test_moving_shock_region_lookup(self):
        model = GasModel.barotropic(K=1.0, gamma=1.4)
        left = FluidState(1.0, 0.0)
        u_r, v_s = hugoniot_solve_barotropic(left, 2.0, model)
        sol = PiecewiseShockSolution(
            model=model,
            states=(left, FluidState(2.0, u_r)),
            shock_positions_t0=(0.0,),
            shock_speeds=(v_s,),
            domain=Domain1D(-2.0, 1.0),
        )
        t = 0.25
        xs = v_s * t
        assert evaluate(sol, t, xs - 1e-9).u == 0.0
        assert evaluate(sol, t, xs + 1e-9).u == u_r

    def test_translation_invariance(self):
        sol = stationary_shock_example(2.0)
        shifted = translated(sol, 0.4)
        rng = np.random.default_rng(5)
        for _ in range(50):
            t = rng.uniform(0.0, 1.0)
            x = rng.uniform(-0.99, 0.99)
            assert evaluate(sol, t, x) == evaluate(shifted, t, x + 0.4)


class TestEnergyRate:
    def test_reference_value(self):
        assert energy_rate(stationary_shock_example(2.0)) == pytest.approx(-1.0 / 3.0, abs=1e-13)

    @pytest.mark.parametrize("gamma", [1.2, 1.4, 5.0 / 3.0, 2.0, 2.5, 3.0])
    def test_gamma_sweep_closed_form(self, gamma):
        assert energy_rate(stationary_shock_example(gamma)) == pytest.approx(
            gamma_sweep_energy_rate(gamma), abs=1e-12
        )

    def test_zero_jump(self):
        model = GasModel.barotropic(K=1.0, gamma=2.0)
        state = FluidState(1.0, 0.5)
        sol = PiecewiseShockSolution(
            model=model,
            states=(state, state),
            shock_positions_t0=(0.0,),
            shock_speeds=(0.2,),
        )
        assert energy_rate(sol) == 0.0

    def test_boundary_term_reported_separately(self):
        sol = stationary_shock_example(2.0, motion="material")
        interface = energy_rate(sol)
        with_boundary = energy_rate(sol, include_boundary=True)
        # Material end caps exchange pressure work p_l u_l - p_r u_r.
        assert with_boundary - interface == pytest.approx(4.0 / 3.0 - 8.0 / 3.0, abs=1e-13)


class TestLengthRate:
    @pytest.mark.parametrize("gamma", [1.2, 1.7, 2.0, 3.0])
    def test_reference_value(self, gamma):
        assert length_rate(stationary_shock_example(gamma)) == pytest.approx(-1.0, abs=1e-15)

    def test_zero_jump(self):
        model = GasModel.barotropic(K=1.0, gamma=2.0)
        state = FluidState(1.0, 0.5)
        sol = PiecewiseShockSolution(
            model=model, states=(state, state), shock_positions_t0=(0.0,), shock_speeds=(0.0,)
        )
        assert length_rate(sol) == 0.0

    def test_velocity_jump_only(self):
        model = GasModel.barotropic(K=1.0, gamma=2.0)
        sol = PiecewiseShockSolution(
            model=model,
            states=(FluidState(1.0, 3.0), FluidState(2.0, 1.0)),
            shock_positions_t0=(0.0,),
            shock_speeds=(0.0,),
            validate=False,
        )
        assert length_rate(sol) == pytest.approx(-2.0, abs=1e-15)


class TestVolumePotentialMismatch:
    def test_reference_values(self):
        dedt, neg_dvdt, gap = volume_potential_mismatch(stationary_shock_example(2.0))
        assert dedt == pytest.approx(-1.0 / 3.0, abs=1e-13)
        assert neg_dvdt == pytest.approx(-1.0, abs=1e-15)
        assert gap == pytest.approx(2.0 / 3.0, abs=1e-13)

    def test_gap_positive_across_gamma(self):
        for gamma in np.arange(1.1, 3.0001, 0.1):
            _, _, gap = volume_potential_mismatch(stationary_shock_example(float(gamma)))
            assert gap > 0.0

    def test_zero_jump_gap(self):
        model = GasModel.barotropic(K=1.0, gamma=2.0)
        state = FluidState(1.0, 0.5)
        sol = PiecewiseShockSolution(
            model=model, states=(state, state), shock_positions_t0=(0.0,), shock_speeds=(0.0,)
        )
        assert volume_potential_mismatch(sol) == (0.0, 0.0, 0.0)


class TestAdmissibilitySweep:
    def test_example_admissible_for_all_gamma(self):
        for gamma in np.arange(1.1, 3.0001, 0.1):
            sol = stationary_shock_example(float(gamma))
            assert entropy_admissible(sol.jumps()[0], sol.model)
            assert energy_rate(sol) <= 0.0


class TestWeakSolutionProperty:
    def test_standard_battery_below_tolerance(self):
        from shockaudit.weakcheck import standard_battery, weak_residual

        sol = stationary_shock_example(2.0)
        for bump in standard_battery(sol, count=20, seed=0):
            for component in ("mass", "momentum"):
                assert abs(weak_residual(sol, component, bump)) < 1e-8
