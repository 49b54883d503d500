import random
import sys

import pytest

from downmatch.family import WeightFn, popcount


def random_monotone(rng: random.Random, n: int, vmax: int) -> WeightFn:
    """Monotone (non-increasing) weight function with values in 0..vmax,
    filled from the top set down."""
    vals = [0] * (1 << n)
    for x in sorted(range(1 << n), key=lambda m: -popcount(m)):
        lo = max((vals[x | 1 << i] for i in range(n) if not x >> i & 1), default=0)
        vals[x] = rng.randint(lo, max(lo, vmax))
    return WeightFn(n, vals)


def brute_down_sets(n: int) -> list[int]:
    """Every down-set of 2^[n] as a dense bitset, by filtering all families."""
    size = 1 << n
    out = []
    for bits in range(1 << size):
        if all(not bits >> x & 1 or all(bits >> (x & ~(1 << i)) & 1 for i in range(n)) for x in range(size)):
            out.append(bits)
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
