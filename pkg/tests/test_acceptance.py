"""One test per acceptance criterion.  Each prints a PASS/FAIL line with the
measured values; the lines are collected into the terminal summary."""
import pytest

from oblab.acceptance import CHECKS

RESULTS: list = []


@pytest.mark.parametrize("number", sorted(CHECKS), ids=lambda k: f"{k:02d}-{CHECKS[k].__name__[6:]}")
def test_criterion(number):
    r = CHECKS[number]()
    RESULTS.append(r)
    print(r.line())
    assert r.passed, r.line()
