from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from singlab import operators as ops
from singlab.laurent import LaurentPoly
from oracles import indicial, symbol_coefficients

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
coeff = st.dictionaries(st.integers(-2, 2), small, max_size=2).map(LaurentPoly)
diffops = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 1)), coeff, max_size=3).map(ops.DiffOp)
dims = st.integers(7, 15)
exponents = st.fractions(min_value=-12, max_value=6, max_denominator=7)


@settings(max_examples=40, deadline=None)
@given(diffops, diffops, diffops)
def test_composition_is_associative(a, b, c):
    assert ops.compose(ops.compose(a, b), c) == ops.compose(a, ops.compose(b, c))


@given(diffops, diffops, diffops)
def test_composition_distributes(a, b, c):
    assert ops.compose(a, b + c) == ops.compose(a, b) + ops.compose(a, c)


def test_commutator_of_d_and_x_is_identity():
    D = ops.DiffOp.derivative()
    X = ops.DiffOp.multiplication(LaurentPoly.monomial(1))
    assert ops.compose(D, X) - ops.compose(X, D) == ops.DiffOp.identity()


def test_base_variable_mismatch():
    with pytest.raises(ops.BaseVariableMismatch):
        ops.compose(ops.DiffOp.derivative("r"), ops.DiffOp.derivative("t"))


@settings(deadline=None)
@given(dims, exponents)
def test_tri_laplacian_on_powers(n, a):
    out = ops.apply(ops.tri_laplacian_polar(n), ops.LogPowerExpr.power(a))
    assert out == ops.LogPowerExpr.power(a - 6, 0, indicial(a, n))


@given(dims, exponents)
def test_laplacian_on_powers(n, a):
    out = ops.apply(ops.laplacian_polar(n), ops.LogPowerExpr.power(a))
    assert out == ops.LogPowerExpr.power(a - 2, 0, a * (a + n - 2))


@given(exponents, exponents, small)
def test_log_power_derivative(a, b, c):
    # d/dx (c x^a L^b) = c a x^(a-1) L^b - c b x^(a-1) L^(b-1), with L = -ln x
    e = ops.LogPowerExpr.power(a, b, c).derivative()
    assert e.coefficient(a - 1, b) == c * a
    if b:
        assert e.coefficient(a - 1, b - 1) == -c * b


def test_log_power_monomial_power_and_evalf():
    e = ops.LogPowerExpr.power(F(-2), F(1, 3))
    sq = e.monomial_power(3)
    assert sq.items() == [(F(-6), F(1), F(1))]
    assert sq.evalf(0.1) == pytest.approx(0.1 ** -6 * 2.302585092994046)
    with pytest.raises(ValueError):
        (e + ops.LogPowerExpr.power(1)).monomial_power(2)


@settings(max_examples=25, deadline=None)
@given(dims, st.fractions(min_value=F(7, 6), max_value=12, max_denominator=6))
def test_autonomous_symbol_is_root_product(n, p):
    assert tuple(ops.symbol_poly(ops.emden_fowler_conjugate(n, p))[:6]) == symbol_coefficients(n, p)


@pytest.mark.parametrize("n", [7, 9, 12])
def test_polar_route_agrees_with_cylinder_route(n):
    p = F(n + 1, n - 6)
    assert ops.autonomous_from_polar(n, p).entries == ops.emden_fowler_conjugate(n, p).entries


def test_nonautonomous_rejects_small_dimension():
    with pytest.raises(ValueError):
        ops.nonautonomous_conjugate(6)
