from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from singlab.laurent import LaurentPoly, as_fraction

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.dictionaries(st.integers(-4, 4), fractions, max_size=4).map(LaurentPoly)
points = fractions.filter(lambda x: x != 0)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly.zero()


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(polys, polys)
def test_leibniz_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({2: 1, -1: 0}) + LaurentPoly({2: -1})
    assert p.is_zero() and p.coefficients == {}


def test_monomial_inverse_and_pole():
    x = LaurentPoly.monomial(1)
    assert x ** -3 == LaurentPoly.monomial(-3)
    with pytest.raises(ValueError):
        (x + 1) ** -1
    with pytest.raises(ZeroDivisionError):
        LaurentPoly.monomial(-1)(0)


def test_limit_at_infinity():
    assert LaurentPoly({0: 3, -2: 5}).limit_at_infinity() == 3
    with pytest.raises(ValueError):
        LaurentPoly({1: 1}).limit_at_infinity()


def test_as_fraction_refuses_floats_and_bools():
    assert as_fraction("7/2") == F(7, 2)
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)
