"""Golden-table and property acceptance checks, one test per criterion.

Each test prints a ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary. Tolerances live in :mod:`taubessel.verify` and are the
published ones.
"""

import pytest

from taubessel.verify import CRITERIA, run_criterion

RESULTS: list = []

# runtime budgets in seconds
BUDGET = {"1-table4": 120}


@pytest.mark.parametrize("crit", CRITERIA, ids=[c.key for c in CRITERIA])
def test_criterion(crit):
    res = run_criterion(crit)
    RESULTS.append(res)
    print(res.line())
    assert res.passed, res.line()
    if crit.key in BUDGET:
        assert res.seconds < BUDGET[crit.key], f"{crit.key} took {res.seconds:.0f}s"
