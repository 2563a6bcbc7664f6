"""One test per acceptance criterion.  Each records a PASS/FAIL line that
is printed at the end of the run (and also printed directly)."""

import pytest

from conftest import RESULTS
from rigidcy.acceptance import CRITERIA, special_mismatches

CHECKS = {num: (name, fn) for num, name, fn in CRITERIA}


def run(num):
    name, fn = CHECKS[num]
    ok, detail = fn()
    RESULTS[num] = (name, ok, detail)
    print("criterion %2d %s  %s  [%s]" % (num, "PASS" if ok else "FAIL", name, detail))
    return ok, detail


@pytest.mark.parametrize("num", [n for n in CHECKS if n != 11])
def test_criterion(num):
    ok, detail = run(num)
    assert ok, detail


# Two printed formulas (P2(4,6,6) C at infinity, P2(4,6,8) B at z = 1) do
# not solve their operators; the criterion is reported as failing.
@pytest.mark.xfail(strict=True, reason="two printed coefficient formulas are wrong")
def test_criterion_11_special_solutions():
    ok, detail = run(11)
    assert ok, detail


def test_criterion_11_failures_are_exactly_the_two_formulas():
    bad = {(f, r) for f, r, *_ in special_mismatches()}
    assert bad == {("P2_4_6_6", "C"), ("P2_4_6_8", "B")}


def test_criterion_11_corrected_formulas_pass():
    assert special_mismatches(corrected=True) == []
