"""Acceptance criteria, one test per criterion at the stated tolerances.

Each test prints its ``[PASS]``/``[FAIL]`` line; the lines are also
collected for the terminal summary (see ``conftest.py``).
"""
import pytest

from schwarzlift import verify

ACCEPTANCE_LINES = []


@pytest.mark.parametrize("check", verify.CHECKS, ids=[f"criterion_{k:02d}_{c.__name__[6:]}"
                                                     for k, c in enumerate(verify.CHECKS, 1)])
def test_criterion(check):
    result = check()
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line
