import numpy as np
import pytest

# worked example: a 10-element idempotent permutation and everything derived from it
PI = (3, -1, 6, 8, -4, 7, -5, -9, -10, 2)
PI_INV = (-2, 10, 1, -5, -7, 3, 6, 4, -8, -9)
IOTA = (2, 2, 7, 7, 5, 7, 7, 8, 9, 2)
GAMMA = (-2, 2, 3, -5, -7, 6, 7, 8, -8, -9)
MULTISET = (2, 2, 2, 5, 7, 7, 7, 7, 8, 9)
PI_STABLE = (2, -1, 6, 7, -4, 8, -5, -9, -10, 3)


def arr(xs):
    return np.array(xs, dtype=np.int64)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
