from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from singlab import constants as C
from singlab.constants import Params, Regime
from oracles import K0_HAT, K0_PRODUCT, LEVEL_9_4, V_STAR_9_4


@pytest.mark.parametrize("key,value", sorted(K0_PRODUCT.items()))
def test_k0_product(key, value):
    assert C.k0_product(Params(*key)) == value


@pytest.mark.parametrize("n,value", sorted(K0_HAT.items()))
def test_k0_hat(n, value):
    assert C.k0_hat(n) == value


def test_equilibrium_and_level():
    params = Params.of(9, 4)
    assert C.equilibrium_value(params) == pytest.approx(V_STAR_9_4, rel=1e-14)
    assert C.ell_star(params) == pytest.approx(-LEVEL_9_4, rel=1e-12)


@pytest.mark.parametrize("n,p,regime", [
    (9, "2", Regime.SERRIN_LIONS), (9, "3", Regime.AVILES), (9, "4", Regime.GIDAS_SPRUCK),
    (9, "5", Regime.UPPER_CRITICAL), (9, "7", Regime.SUPERCRITICAL), (12, "2", Regime.AVILES),
])
def test_regimes(n, p, regime):
    assert C.classify_regime(Params.of(n, p)) is regime


@given(st.integers(7, 40))
def test_critical_exponents_ordering(n):
    lo, hi = C.lower_critical(n), C.upper_critical(n)
    assert 1 < lo < hi - 1
    assert hi == 2 * lo


@given(st.integers(7, 30), st.fractions(min_value=F(7, 6), max_value=20, max_denominator=9))
def test_k0_sign_matches_regime(n, p):
    params = Params(n, p)
    k0 = C.k0_product(params)
    if C.classify_regime(params) in (Regime.GIDAS_SPRUCK, Regime.UPPER_CRITICAL):
        assert k0 > 0


@pytest.mark.parametrize("n,p", [(6, "3"), (9, "1"), (9, "abc"), (9.5, "3")])
def test_params_validation(n, p):
    with pytest.raises(ValueError):
        Params(n, p)


def test_parse_rational():
    assert C.parse_rational("7/2") == F(7, 2)
    assert C.parse_rational(" 3 ") == 3
    with pytest.raises(ValueError):
        C.parse_rational("1/0")


def test_order_constants():
    n, p = 10, F(3)
    g = F(2) / (p - 1)
    assert C.k0_order(n, 1, p) == g * (n - 2 - g)
    assert C.k0_order(n, 3, p) == C.k0_product(Params(n, p))
    for m in (1, 2, 3):
        assert C.k0_hat_general(n, m) == n * C.k0_hat_per_order(n, m)
