from fractions import Fraction as F

import numpy as np
import pytest

from singlab import pohozaev as poh
from singlab.constants import DomainError, Params, k0_hat
from singlab.dynamics import State6, constant_trajectory, shoot_to_equilibrium
from oracles import LEVEL_9_4, V_STAR_9_4


def test_identity_holds_with_derived_coefficients():
    for n, p in ((9, 4), (10, 3), (12, F(5, 2))):
        assert poh.verify_monotonicity_identity_symbolic(Params.of(n, p)).holds


def test_mixed_sources_leave_a_residual():
    check = poh.verify_monotonicity_identity_symbolic(Params.of(9, 4), h_source="printed")
    assert not check.holds


def test_constant_state_density():
    params = Params.of(9, 4)
    assert poh.h_rad_constant_exact(params, F(2)) == -720 * 2 + F(32, 5)
    assert poh.h_rad_autonomous(params, State6.constant(V_STAR_9_4)) == pytest.approx(LEVEL_9_4, rel=1e-12)
    assert float(poh.equilibrium_level_mp(params)) == pytest.approx(LEVEL_9_4, rel=1e-14)


def test_upper_critical_has_no_dissipation():
    K = [float(k) for k in poh.autonomous_coefficients(Params.of(9, 5))]
    jets = np.random.default_rng(0).normal(size=(20, 6))
    assert np.all(poh.dissipation_value(K, jets) == 0)


def test_monotonicity_and_limit_level():
    params = Params.of(9, 4)
    traj = shoot_to_equilibrium(params, horizon=30.0)
    res = poh.monotonicity_check(params, traj)
    assert res.verdict() == "consistent"
    assert res.to_csv().splitlines()[0] == ",".join(poh.POHOZAEV_CSV_HEADER)
    assert poh.limit_level(params, traj).label == "minus-ell-star"


def test_limit_level_zero_and_domain():
    params = Params.of(9, 4)
    assert poh.limit_level(params, constant_trajectory(0.0, 0.0, -1.0)).label == "zero"
    with pytest.raises(DomainError):
        poh.limit_level(Params.of(9, 5), constant_trajectory(0.0, 0.0, -1.0))


def test_nonautonomous_limit_uses_half_weight():
    lim = poh.constant_state_limit(9)
    assert lim.w0 == pytest.approx(float(k0_hat(9)) ** 0.5)
    assert lim.limit_value == pytest.approx(lim.energy_half_weight, rel=1e-12)
    assert lim.value_at_t == pytest.approx(lim.limit_value, rel=1e-4)


def test_aviles_probe_keeps_the_level():
    traj = poh.aviles_probe(9, span=1.0)
    assert poh.limit_level(9, traj).label == "k0-hat-level"
    with pytest.raises(ValueError):
        poh.aviles_probe(9, t0=1.0)


def test_sign_profile_records():
    sp = poh.sign_profile(Params.of(9, 4))
    rec = {r.name: r for r in sp.records}
    assert rec["K3"].derived == 87 and rec["K3"].printed == -87
    assert rec["K3"].matches_claim and not rec["K3"].derived_matches_claim
    assert rec["K5"].derived == -3 and not rec["K5"].derived_matches_claim
    assert sp.as_dict()["signs"]["K3"]["printed"] == "-87"
    with pytest.raises(DomainError):
        poh.sign_profile(Params.of(9, 2))


def test_term_magnitude_bounds_the_density():
    from singlab.dynamics import Trajectory

    params = Params.of(10, 3)
    states = np.random.default_rng(1).normal(scale=3.0, size=(50, 6))
    traj = Trajectory(-np.arange(50.0), states)
    assert np.all(poh.term_magnitude_series(params, traj) >= np.abs(poh.pohozaev_series(params, traj)))
