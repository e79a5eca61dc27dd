import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("quenchlat", max_examples=50, deadline=None)
settings.load_profile("quenchlat")

LN2 = float(np.log(2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Log one acceptance line and return whether the check passed."""

    def _record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
