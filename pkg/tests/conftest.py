import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# the matrix printed in the RM(3,3) example, rows in Kronecker order
RM33_DISPLAY = [
    "11111111",
    "01010101",
    "00110011",
    "00010001",
    "00001111",
    "00000101",
    "00000011",
    "00000001",
]


def gf2_rank_dense(arr) -> int:
    """Independent rank oracle: plain Gaussian elimination on a uint8 array."""
    a = np.array(arr, dtype=np.uint8) % 2
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance reporting ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(request, capsys):
    """Call ``report(ok, detail)`` once per criterion; the line is echoed now and in the summary."""

    def _report(ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {request.node.name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
