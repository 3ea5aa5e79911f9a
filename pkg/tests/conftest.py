from __future__ import annotations

import pytest

from spisort.generators import gen_random_poset
from spisort.poset import PosetInstance

# Filled by the acceptance suite: (criterion id, passed, detail).
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def chain(*elems: int) -> PosetInstance:
    """Total order in the given sequence."""
    edges = tuple(zip(elems, elems[1:]))
    return PosetInstance(len(elems), edges, tuple(elems))


def small_posets(count: int, n_max: int, seed0: int = 0) -> list[PosetInstance]:
    out = []
    for s in range(count):
        n = 1 + (s * 7 + seed0) % n_max
        density = (0.15, 0.3, 0.5, 0.7)[s % 4]
        out.append(gen_random_poset(n, density, seed0 * 100_003 + s))
    return out


@pytest.fixture
def two_chains() -> PosetInstance:
    return PosetInstance(4, ((1, 2), (3, 4)), (1, 3, 2, 4))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {cid}: {detail}")
