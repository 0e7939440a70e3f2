from fractions import Fraction as F

import pytest

from singlab import tables
from singlab.discrepancy import EXACT, SIGN_FLIP
from oracles import PRINTED_K3_9_4


def test_printed_k3_is_a_sign_flip():
    rep = tables.compare_autonomous([9], [F(4)])
    (k3,) = rep.select("autonomous", "K3")
    assert k3.printed == str(PRINTED_K3_9_4)
    assert k3.severity == SIGN_FLIP


def test_named_polar_entries_that_match():
    rep = tables.compare_polar(range(7, 12))
    for name in ("M1", "M2", "M3", "M4", "M5", "O0", "O1"):
        assert all(e.severity == EXACT for e in rep.select("polar", name)), name


def test_documented_typos_are_real_mismatches():
    rep = tables.specialization_report()
    for table, entry in tables.DOCUMENTED_TYPOS:
        assert any(e.severity != EXACT for e in rep.select(table, entry)), (table, entry)


def test_p5_factor_three():
    for r in tables.pohozaev_consistency(9):
        if r.entry == "p5":
            assert not r.consistent


def test_report_is_deterministic():
    a = tables.verify_all([7, 9], [F(3), F(4)]).to_json()
    b = tables.verify_all([7, 9], [F(3), F(4)]).to_json()
    assert a == b


def test_table_entries_and_lookup():
    assert "K0" in tables.table_entries("upper-critical")
    with pytest.raises(KeyError):
        tables.printed_laurent("no-such-table", "K0", 9)
