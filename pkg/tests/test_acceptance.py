"""Acceptance criteria 1-11, each at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one pass/fail line
per criterion.
"""
import pytest

from heun_appell.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    res = run_check(number)
    print(res.line())
    assert res.passed, res.line()
