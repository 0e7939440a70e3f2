import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singlab import profiles as prof
from singlab.constants import DomainError, Params, k0_hat

grid = np.logspace(-1, -8, 300)
dims = st.integers(7, 14)


@settings(deadline=None)
@given(dims, st.floats(1e-4, 0.25), st.floats(0.5, 5.0))
def test_kelvin_is_an_involution(n, mu, gamma):
    u = prof.homogeneous_profile(1.3, gamma, grid)
    once = prof.kelvin_transform(u, mu, n)
    twice = prof.kelvin_transform(once, mu, n)
    assert np.allclose(twice.radii, u.radii[: len(twice)], rtol=1e-13)
    assert np.allclose(twice.values, u.values[: len(twice)], rtol=1e-12)


@given(dims, st.floats(1e-4, 0.25), st.floats(0.5, 5.0))
def test_kelvin_maps_homogeneous_to_homogeneous(n, mu, gamma):
    # (mu/r)^(n-6) c (mu^2/r)^(-gamma) = c mu^(n-6-2 gamma) r^(gamma-n+6)
    out = prof.kelvin_transform(prof.homogeneous_profile(2.0, gamma, grid), mu, n)
    expected = 2.0 * mu ** (n - 6 - 2 * gamma) * out.radii ** (gamma - n + 6)
    assert np.allclose(out.values, expected, rtol=1e-12)


def test_kelvin_domain_exhausted():
    with pytest.raises(DomainError):
        prof.kelvin_transform(prof.homogeneous_profile(1.0, 2.0, np.array([0.5, 0.4])), 0.99, 9)


@given(st.floats(-8.0, -0.5), st.floats(0.1, 10.0))
def test_pure_power_fit_recovers_exact_data(exponent, c):
    fit = prof.fit_rate(prof.homogeneous_profile(c, -exponent, grid), (1e-7, 1e-2))
    assert fit.exponent == pytest.approx(exponent, abs=1e-9)
    assert fit.constant == pytest.approx(c, rel=1e-8)


@pytest.mark.parametrize("n", [7, 9, 10, 12])
def test_power_log_fit_on_ansatz(n):
    fit = prof.fit_rate(prof.aviles_profile(n, grid), (1e-7, 1e-2), "power-log")
    assert fit.exponent == pytest.approx(6 - n, abs=1e-9)
    assert fit.log_exponent == pytest.approx((6 - n) / 6, abs=1e-9)
    assert fit.constant == pytest.approx(float(k0_hat(n)) ** ((n - 6) / 6), rel=1e-8)


def test_fit_rejects_thin_windows():
    u = prof.homogeneous_profile(1.0, 2.0, grid)
    with pytest.raises(ValueError):
        prof.fit_rate(u, (1e-3, 2e-3))
    with pytest.raises(ValueError):
        prof.fit_rate(u, (1e-3, 1e-4))
    with pytest.raises(ValueError):
        prof.fit_rate(u, (1e-7, 1e-2), "exponential")


def test_profile_validation():
    with pytest.raises(ValueError):
        prof.RadialProfile(np.array([0.1, 0.2]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        prof.RadialProfile(np.array([0.2, 0.1]), np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        prof.RadialProfile(np.array([0.2, 0.1]), np.array([1.0, 1.0]), "measured")


@pytest.mark.parametrize("lam", [10 ** (-70 / 299), 0.5])  # ten grid steps, then off-grid
def test_scaling_invariance(lam):
    u = prof.homogeneous_profile(2.0, 2.0, grid)
    rep = prof.scaling_invariance_check(Params.of(9, 4), u, lam)
    assert rep.passed()


def test_aviles_balance_exponents():
    bal = prof.aviles_leading_balance(9)
    assert bal.root_exponent == pytest.approx(1 / 2)
    assert bal.derived_constant == pytest.approx(math.sqrt(float(bal.c)))
