import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def corrupt_ring_text():
    """A 3-dimensional algebra over Z/2 whose product is not associative at (b1, b1, b1)."""
    t = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for k in range(3):
        t[0][k][k] = 1
        t[k][0][k] = 1
    t[1][1] = [0, 0, 1]
    t[1][2] = [0, 1, 0]
    flat = " ".join(str(c) for i in range(3) for j in range(3) for c in t[i][j])
    return f"name: broken\norders: 2 2 2\ntable: {flat}\none: 1 0 0\n"
