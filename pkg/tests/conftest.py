from fractions import Fraction

import pytest

from pennytax._accel import HAVE_NUMBA
from pennytax.calibration import calibration_profiles

ACCEL_PATHS = [False, True] if HAVE_NUMBA else [False]


@pytest.fixture(scope="session")
def calib():
    return {p.store_type: p for p in calibration_profiles()}


@pytest.fixture(params=ACCEL_PATHS, ids=lambda b: "numba" if b else "numpy")
def accel(request):
    return request.param


def frac(s):
    return Fraction(s)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
