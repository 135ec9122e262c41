from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from zetamoments.zeta import load_zeros

settings.register_profile("pkg", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")

ZEROS_FILE = Path(__file__).resolve().parents[1] / "data" / "zeros_100k.txt"


@pytest.fixture(scope="session")
def zeros():
    if not ZEROS_FILE.is_file():
        pytest.skip("data/zeros_100k.txt is missing; run `zetamoments zeta genzeros`")
    return load_zeros(ZEROS_FILE)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
