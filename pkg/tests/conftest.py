"""Shared fixtures and the acceptance-summary terminal hook."""

from __future__ import annotations

import re
from pathlib import Path

import pytest

from axaclin.core import (
    Conjunction,
    FeatureSpace,
    Instance,
    LabeledDataset,
    NEGATIVE,
    POSITIVE,
)
from axaclin.ingest import load_and_binarize, load_preset
from axaclin.models import LinearModel

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def wdbc():
    cfg = load_preset("wdbc", csv_path=str(REPO_ROOT / "data" / "wdbc.csv"))
    ds, report = load_and_binarize(cfg)
    return cfg, ds, report


@pytest.fixture
def space3():
    return FeatureSpace.from_names(["v1", "v2", "v3"])


@pytest.fixture
def linear3():
    # Reference model used across explanation examples.
    return LinearModel(weights=(5.0, -3.0, 1.0), bias=-2.0, kind="lr")


def dataset_from_rows(n, positives, negatives):
    """Rows may be value tuples or raw bitmask ints."""
    space = FeatureSpace.from_names([f"v{i + 1}" for i in range(n)])

    def inst(v):
        return Instance(n, v) if isinstance(v, int) else Instance.from_values(v)

    rows = [(inst(v), POSITIVE) for v in positives]
    rows += [(inst(v), NEGATIVE) for v in negatives]
    return LabeledDataset(space, tuple(rows))


def conj(n, **literals):
    """conj(3, v1=1, v3=0) -> Conjunction over v1..vn by keyword."""
    c = Conjunction.empty(n)
    for name, value in literals.items():
        c = c.with_literal(int(name[1:]) - 1, bool(value))
    return c


# ---------------------------------------------------------------------------
# Acceptance summary: one PASS/FAIL line per criterion at the end of the run.

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = re.search(r"test_acceptance.*::test_criterion_(\d+)", report.nodeid)
    if m:
        _ACCEPTANCE[int(m.group(1))] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        outcome = _ACCEPTANCE[num]
        word = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"criterion {num:2d}: {word}")
