"""The twelve acceptance criteria, each at its stated tolerance.

The suite runs once per session; every criterion is then its own test and
prints one pass/fail line.  The lines are repeated in the terminal summary
so they show without ``-s``.
"""
import pytest

from rigidtrace import selftest

LINES = []


@pytest.fixture(scope="module")
def results():
    checks = {c.key: c for c in selftest.run_all()}
    for key in sorted(checks):
        LINES.append(checks[key].line())
    return checks


@pytest.mark.parametrize("key", range(1, 13))
def test_criterion(results, key):
    check = results[key]
    print(check.line())
    assert check.passed, check.line()
