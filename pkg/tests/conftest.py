import numpy as np
import pytest

from ifcbounds.verify import random_channel


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def channels(rng):
    return [random_channel(rng) for _ in range(8)]


def phase_rotated(channel, rng):
    """Same channel with random unit phasors on every row and column."""
    rows = np.exp(2j * np.pi * rng.uniform(size=3))
    cols = np.exp(2j * np.pi * rng.uniform(size=3))
    return rows[:, None] * channel.h * cols[None, :]


ACCEPTANCE_LINES = []


def record(criterion: int, ok: bool, detail: str):
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
