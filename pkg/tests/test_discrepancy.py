from fractions import Fraction as F

from hypothesis import given, strategies as st

from singlab.discrepancy import EXACT, SIGN_FLIP, STRUCTURAL, DiscrepancyReport, certify, classify, make_entry
from singlab.laurent import LaurentPoly

polys = st.dictionaries(st.integers(-3, 3), st.fractions(-9, 9, max_denominator=5), max_size=3).map(LaurentPoly)


@given(polys)
def test_self_comparison_is_exact(a):
    assert classify(a, a) == EXACT


@given(polys, polys)
def test_classification_is_symmetric(a, b):
    assert classify(a, b) == classify(b, a)


def test_sign_flip_and_structural():
    x = LaurentPoly.monomial
    assert classify(x(1, 3) + x(0, 2), x(1, -3) + x(0, 2)) == SIGN_FLIP
    assert classify(F(4), F(-4)) == SIGN_FLIP
    assert classify(x(1, 3), x(1, 2)) == STRUCTURAL


def test_entry_delta_and_report_order():
    rep = DiscrepancyReport()
    rep.add(make_entry("t", "b", 9, F(3), F(2)))
    rep.add(make_entry("t", "a", 7, F(1), F(1)))
    d = rep.to_dict()
    assert [e["entry"] for e in d["entries"]] == ["a", "b"]
    assert d["entries"][1]["delta"] == "1"
    assert d["counts"] == {EXACT: 1, SIGN_FLIP: 0, STRUCTURAL: 1}
    assert rep.to_json() == rep.to_json()


def test_certification_verdicts():
    assert certify("t", "e", [True] * 5, 5).verdict == "certified-equal"
    assert certify("t", "e", [True] * 4, 5).verdict == "equal-at-samples"
    assert certify("t", "e", [True, False], 1).verdict == "discrepant"
