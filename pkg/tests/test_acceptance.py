"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from quantized_nbhd.acceptance import CRITERIA, DEFAULT_SEED, run_criterion


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    result = run_criterion(number, DEFAULT_SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, "; ".join(f"{c.name}: {c.detail}" for c in result.failures())
