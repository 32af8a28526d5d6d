import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from densitylab import PrefixSet, build_arith_tables  # noqa: E402


@pytest.fixture(scope="session")
def tables_1e6():
    return build_arith_tables(10**6)


@pytest.fixture(scope="session")
def tables_small():
    return build_arith_tables(5000)


def random_set(rng: np.random.Generator, limit: int, p: float, with_zero: bool = True, label: str = "") -> PrefixSet:
    bits = rng.random(limit + 1) < p
    bits[0] = with_zero
    return PrefixSet(bits, label or f"random(p={p})")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
