"""Acceptance suite: one test per criterion, each printing a [PASS]/[FAIL] line."""
import pytest

from subfree.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(number, capsys):
    check = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + check.line())
    assert check.passed, check.detail
