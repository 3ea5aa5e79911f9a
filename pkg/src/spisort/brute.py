"""Exhaustive reference computations for small posets.

Everything here reads the poset directly through :meth:`PosetInstance.precedes`
and never touches an oracle, so it stays independent of the algorithms it is
used to check.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .poset import PosetInstance


def longest_chain(p: PosetInstance, elems: Iterable[int] | None = None) -> list[int]:
    """A maximum chain of ``p`` restricted to ``elems``, by DP on the closure."""
    elems = list(p.elements if elems is None else elems)
    if not elems:
        return []
    pos = p.positions
    elems.sort(key=lambda x: pos[x])
    best: dict[int, int] = {}
    back: dict[int, int | None] = {}
    for idx, v in enumerate(elems):
        best[v], back[v] = 1, None
        for u in elems[:idx]:
            if p.precedes(u, v) and best[u] + 1 > best[v]:
                best[v], back[v] = best[u] + 1, u
    end = max(elems, key=lambda x: best[x])
    chain = []
    cur: int | None = end
    while cur is not None:
        chain.append(cur)
        cur = back[cur]
    return chain[::-1]


def longest_chain_length(p: PosetInstance, elems: Iterable[int] | None = None) -> int:
    return len(longest_chain(p, elems))


def is_chain(p: PosetInstance, seq: list[int]) -> bool:
    return all(p.precedes(a, b) for a, b in zip(seq, seq[1:]))


def is_antichain(p: PosetInstance, elems: Iterable[int]) -> bool:
    elems = list(elems)
    return all(not p.comparable(a, b) for a, b in combinations(elems, 2))


def find_antichain(p: PosetInstance, elems: Iterable[int], size: int) -> list[int] | None:
    """Some antichain of exactly ``size`` elements inside ``elems``, or ``None``."""
    elems = sorted(elems)
    if size <= 0:
        return []

    def extend(start: int, picked: list[int]) -> list[int] | None:
        if len(picked) == size:
            return list(picked)
        for i in range(start, len(elems)):
            if len(elems) - i < size - len(picked):
                return None
            x = elems[i]
            if all(not p.comparable(x, y) for y in picked):
                picked.append(x)
                found = extend(i + 1, picked)
                if found is not None:
                    return found
                picked.pop()
        return None

    return extend(0, [])


def width(p: PosetInstance, elems: Iterable[int] | None = None) -> int:
    elems = list(p.elements if elems is None else elems)
    k = 0
    while find_antichain(p, elems, k + 1) is not None:
        k += 1
    return k


def iter_linear_extensions(p: PosetInstance) -> Iterator[tuple[int, ...]]:
    """Every topological order, by backtracking over currently minimal elements."""
    n = p.n
    indeg = [0] * (n + 1)
    for _, v in p.cover_edges:
        indeg[v] += 1
    succ = p.successors
    order: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(order) == n:
            yield tuple(order)
            return
        for x in range(1, n + 1):
            if indeg[x] == 0:
                indeg[x] = -1
                for v in succ[x]:
                    indeg[v] -= 1
                order.append(x)
                yield from rec()
                order.pop()
                for v in succ[x]:
                    indeg[v] += 1
                indeg[x] = 0

    yield from rec()
