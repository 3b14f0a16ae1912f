"""One test per acceptance sub-check, each at its stated tolerance.

Criteria are evaluated once per session.  Every test prints its PASS/FAIL
line, and the lines are repeated in the terminal summary.  Four sub-checks
(2b, 3b, 6b, 8a) state claims that the computation does not reproduce.  They
are left failing on purpose; the project notes explain why.
"""
from functools import lru_cache

import pytest

from arbotails import acceptance

from conftest import ACCEPTANCE_LINES

KEYS = {
    1: ["1a", "1b"],
    2: ["2a", "2b", "2c", "2d"],
    3: ["3a", "3b", "3c", "3d"],
    4: ["4a", "4b", "4c", "4d", "4e"],
    5: ["5a", "5b"],
    6: ["6a", "6b", "6c", "6d", "6e"],
    7: ["7a"],
    8: ["8a", "8b"],
}


@lru_cache(maxsize=None)
def results(criterion):
    return {c.key: c for c in acceptance.CRITERIA[criterion]()}


def test_every_criterion_is_covered():
    assert sorted(acceptance.CRITERIA) == sorted(KEYS)


@pytest.mark.parametrize("criterion, key", [(n, k) for n, ks in KEYS.items() for k in ks])
def test_criterion(criterion, key):
    checks = results(criterion)
    assert sorted(checks) == KEYS[criterion]
    check = checks[key]
    print(check.line())
    ACCEPTANCE_LINES.append(check.line())
    assert check.passed, check.line()
