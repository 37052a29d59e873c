import numpy as np
import pytest

_LINES = []


@pytest.fixture(scope="session")
def report():
    """Collects one summary line per acceptance criterion."""

    def add(label: str, ok: bool, detail: str = ""):
        _LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
