import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one PASS/FAIL line per acceptance criterion for the run summary."""

    def emit(number: int, ok: bool, text: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
