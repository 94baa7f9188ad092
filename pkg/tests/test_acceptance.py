"""Acceptance suite: one line per criterion, printed even when output is captured."""
import pytest

from ffmoduli.acceptance import CRITERIA, run_criterion

SEED = 0


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}_{c[1].replace(' ', '_')}" for c in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number, SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail.get("summary", result.detail)
