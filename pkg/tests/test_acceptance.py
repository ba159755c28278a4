"""Acceptance gate: every validation criterion must pass at its stated
tolerance.  Each criterion is exercised individually so failures point at
the exact inequality suite that regressed."""

import pytest

from lorentz_metrics.validation import CRITERIA, run_criteria

NAMES = [name for name, _fn in CRITERIA]


@pytest.mark.parametrize("name", NAMES)
def test_criterion(name):
    results = run_criteria(level="fast", seed=0, names=[name])
    assert len(results) == 1
    res = results[0]
    assert res.passed, (
        f"criterion {res.name} failed with margin {res.margin:.6g}: "
        f"{res.details}")
    assert res.margin >= 0.0


def test_all_names_present():
    assert len(NAMES) == 10
    assert len(set(NAMES)) == 10
