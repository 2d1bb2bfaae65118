import math

import numpy as np
import pytest

from nmlkit import Luckiness

E = math.e


@pytest.fixture
def exp_window():
    return Luckiness.indicator(1.0, E)


@pytest.fixture
def unit_window():
    return Luckiness.indicator(0.0, 1.0)


def default_window(model):
    lo, hi = model.expectation_domain[0]
    if lo == 0.0 and math.isinf(hi):
        return Luckiness.indicator(1.0, E)
    return Luckiness.indicator(-1.0, 1.0) if model.model_id == "gamma-known-scale" else Luckiness.indicator(0.0, 1.0)


def mu_grid(model, count=10):
    """Interior expectation parameters spread over a representative range."""
    lo, hi = model.expectation_domain[0]
    if lo == 0.0 and math.isinf(hi):
        return np.exp(np.linspace(-2.0, 2.0, count))
    return np.linspace(-3.0, 3.0, count)


# --- acceptance summary ------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, passed, detail)``; printed once at the end of the run."""

    def record(number, passed, detail):
        _ACCEPTANCE[number] = (bool(passed), detail)
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
