import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singlab import dynamics as dyn
from singlab.constants import DomainError, Params
from oracles import V_STAR_9_4, symbol_coefficients

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_coefficients_match_root_product():
    assert dyn.autonomous_coefficients(Params.of(9, 4)) == symbol_coefficients(9, F(4))
    assert dyn.autonomous_coefficients(Params.of(9, 5)) == symbol_coefficients(9, F(5))


def test_equilibria():
    assert dyn.equilibria(Params.of(9, 4)) == [0.0, pytest.approx(V_STAR_9_4, rel=1e-14)]
    assert dyn.equilibria(Params.of(9, "5/2")) == [0.0]  # K0 = 4*6*8*3*1*(-1) < 0
    with pytest.raises(DomainError):
        dyn.equilibria(Params.of(9, 7))


def test_equilibrium_is_a_fixed_point():
    params = Params.of(9, 4)
    rhs = dyn.rhs_autonomous(params, dyn.State6.constant(V_STAR_9_4))
    assert np.max(np.abs(rhs)) < 1e-9


def test_linearized_spectrum_at_zero_is_the_symbol():
    spec = dyn.stability_spectrum(Params.of(9, 4), 0.0)
    assert sorted(z.real for z in spec.roots) == pytest.approx([-5, -3, -1, 2, 4, 6], abs=1e-12)


def test_polynomial_roots_residual_guard():
    spec = dyn.polynomial_roots([F(-6), F(11), F(-6), F(1)])
    assert sorted(z.real for z in spec.roots) == pytest.approx([1, 2, 3], abs=1e-14)


@settings(max_examples=30)
@given(st.lists(finite, min_size=6, max_size=6))
def test_state_roundtrips_through_csv(jet):
    traj = dyn.Trajectory(np.array([0.0, -0.5]), np.array([jet, jet]))
    back = dyn.Trajectory.from_csv(traj.to_csv())
    assert np.array_equal(back.times, traj.times) and np.array_equal(back.states, traj.states)


def test_state_and_config_validation():
    with pytest.raises(ValueError):
        dyn.State6((1, 2, 3))
    with pytest.raises(ValueError):
        dyn.State6((math.nan, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        dyn.IntegratorConfig(rel_tol=1e-16)
    with pytest.raises(ValueError):
        dyn.IntegratorConfig(method="Euler")
    with pytest.raises(ValueError):
        dyn.Trajectory(np.array([0.0, 1.0, 0.5]), np.zeros((3, 6)))


def test_linear_integration_matches_exponential():
    # v = e^(2t) is a solution of the linearized equation at (9, 4)
    fld = dyn.autonomous_field(Params.of(9, 4), linear=True)
    s0 = dyn.State6(tuple(2.0 ** k for k in range(6)))
    traj = dyn.integrate(fld, 0.0, s0, 1.0, dyn.IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14))
    assert traj.states[-1, 0] == pytest.approx(math.exp(2.0), rel=1e-10)


def test_sample_grid_runs_backward():
    fld = dyn.autonomous_field(Params.of(9, 4))
    traj = dyn.integrate(fld, 0.0, dyn.State6.constant(1.0), -1.0, sample_pitch=0.25)
    assert traj.times.tolist() == [0.0, -0.25, -0.5, -0.75, -1.0]
    assert traj.direction == -1


def test_nonautonomous_pole_is_rejected():
    fld = dyn.nonautonomous_field(9)
    with pytest.raises(ValueError):
        dyn.integrate(fld, -1.0, dyn.State6.constant(1.0), 1.0)
    with pytest.raises(ZeroDivisionError):
        dyn.rhs_nonautonomous(9, 0.0, dyn.State6.constant(1.0))


def test_blow_up_is_reported():
    fld = dyn.autonomous_field(Params.of(9, 4))
    with pytest.raises(dyn.IntegrationError):
        dyn.integrate(fld, 0.0, dyn.State6((50.0, 50, 50, 50, 50, 50)), 40.0)


def test_max_steps():
    fld = dyn.autonomous_field(Params.of(9, 4))
    with pytest.raises(dyn.MaxStepsExceeded):
        dyn.integrate(fld, 0.0, dyn.State6.constant(1.0), -5.0, dyn.IntegratorConfig(max_steps=3))


def test_shooting_reaches_the_equilibrium():
    traj = dyn.shoot_to_equilibrium(Params.of(9, 4), horizon=30.0)
    assert traj.times[-1] == pytest.approx(-30.0)
    assert abs(traj.states[0, 0] - V_STAR_9_4) < 2e-3
