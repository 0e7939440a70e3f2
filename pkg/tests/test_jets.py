from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from singlab.jets import JetPolynomial, ode_top, v
from singlab.laurent import LaurentPoly

idx = st.integers(0, 4)
coef = st.fractions(-5, 5, max_denominator=4)


@given(idx, idx, coef)
def test_product_rule(i, j, c):
    a, b = v(i) * c, v(j)
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_potential_chain_rule():
    # Q = |v|^(p+1)/(p+1) differentiates to N v1
    q = JetPolynomial.symbol("Q")
    assert q.derivative() == JetPolynomial.product(1, "N", "v1")
    with pytest.raises(ValueError):
        JetPolynomial.symbol("N").derivative()


def test_time_dependent_coefficient():
    t = LaurentPoly.monomial(1)
    d = (v(0) * t).derivative()
    assert d == v(0) + v(1) * t


def test_substitute_top():
    top = ode_top([F(k) for k in range(6)])
    assert not top.uses("v6")
    assert (v(5).derivative()).substitute_top(top) == top
    with pytest.raises(ValueError):
        v(5).substitute_top(v(6))


def test_evaluate():
    jet = (2.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    expr = v(0) * v(1) * 3 + JetPolynomial.symbol("Q")
    assert expr.evaluate(jet, p=3.0) == pytest.approx(6.0 + 16.0 / 4)
    with pytest.raises(ValueError):
        v(6).evaluate(jet, p=3.0)
