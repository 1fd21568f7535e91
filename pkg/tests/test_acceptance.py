"""One test per acceptance criterion; each prints a PASS/FAIL line.

Time budgets are reported next to the verdict but do not gate it.
"""

import pytest

from edgeclone.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion-{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    outcome = run_criterion(number)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
