import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# sampling in tests is single-process unless a test says otherwise
os.environ.setdefault("LERWLAB_WORKERS", "1")

_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, title, passed, detail)."""

    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
        _CRITERIA[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
