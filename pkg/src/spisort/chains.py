"""Approximate and exact maximum chains against a partial oracle."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .poset import OracleHandle


def _elements(elems: Iterable[int]) -> list[int]:
    elems = list(elems)
    if not elems:
        raise ValueError("element set is empty")
    return elems


def merge_runs_deleting(
    h: OracleHandle, run_a: Sequence[int], run_b: Sequence[int]
) -> tuple[list[int], list[tuple[int, int]]]:
    """Two-way merge of chains that drops both heads whenever they are incomparable.

    Deleted pairs are returned smaller label first, in the order they were met.
    """
    merged: list[int] = []
    deleted: list[tuple[int, int]] = []
    i = j = 0
    while i < len(run_a) and j < len(run_b):
        a, b = run_a[i], run_b[j]
        if h.query(a, b):
            merged.append(a)
            i += 1
        elif h.query(b, a):
            merged.append(b)
            j += 1
        else:
            deleted.append((a, b) if a < b else (b, a))
            i += 1
            j += 1
        h.tick()
    merged.extend(run_a[i:])
    merged.extend(run_b[j:])
    h.tick(len(run_a) - i + len(run_b) - j)
    return merged, deleted


def approx_max_chain(
    h: OracleHandle, elems: Iterable[int]
) -> tuple[list[int], list[tuple[int, int]]]:
    """Merge sort under the partial oracle, deleting incomparable pairs on contact.

    If the longest chain among ``elems`` misses ``k`` elements, the returned
    chain misses at most ``2k``.
    """
    elems = _elements(elems)
    deleted: list[tuple[int, int]] = []

    def sort(lo: int, hi: int) -> list[int]:
        if hi - lo == 1:
            return [elems[lo]]
        mid = (lo + hi) // 2
        left = sort(lo, mid)
        right = sort(mid, hi)
        merged, dropped = merge_runs_deleting(h, left, right)
        deleted.extend(dropped)
        return merged

    return sort(0, len(elems)), deleted


def predecessor_index(h: OracleHandle, chain: Sequence[int], y: int) -> int:
    """Index of the largest ``chain`` element below ``y``, or -1 if none is."""
    lo, hi = -1, len(chain)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if h.query(chain[mid], y):
            lo = mid
        else:
            hi = mid
    return lo


def successor_index(h: OracleHandle, chain: Sequence[int], y: int) -> int:
    """Index of the smallest ``chain`` element above ``y``, or ``len(chain)``."""
    lo, hi = -1, len(chain)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if h.query(y, chain[mid]):
            hi = mid
        else:
            lo = mid
    return hi


def longest_path(nodes: Sequence[int], edges: dict[int, list[int]]) -> list[int]:
    """Longest vertex path in a DAG given by adjacency lists.

    Ties go to the path found first in a deterministic Kahn order seeded by
    ``nodes`` order.
    """
    indeg = {v: 0 for v in nodes}
    for u in nodes:
        for v in edges.get(u, ()):
            indeg[v] += 1
    queue = [v for v in nodes if indeg[v] == 0]
    best = {v: 1 for v in nodes}
    back: dict[int, int | None] = {v: None for v in nodes}
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in edges.get(u, ()):
            if best[u] + 1 > best[v]:
                best[v] = best[u] + 1
                back[v] = u
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(queue) != len(nodes):
        raise ValueError("graph has a cycle")
    if not nodes:
        return []
    end = max(queue, key=lambda v: best[v])
    path = []
    cur: int | None = end
    while cur is not None:
        path.append(cur)
        cur = back[cur]
    return path[::-1]


def exact_max_chain(h: OracleHandle, elems: Iterable[int]) -> list[int]:
    """A maximum chain in ``O(n log n + k^2)`` queries, ``k`` being the chain deficit.

    The approximate chain ``C`` leaves at most ``2k`` elements. Each leftover is
    linked to its predecessor and successor in ``C``, the leftovers are compared
    pairwise, and a longest path is taken in the resulting sparse DAG.
    """
    elems = _elements(elems)
    chain, deleted = approx_max_chain(h, elems)
    rest = [x for pair in deleted for x in pair]
    edges: dict[int, list[int]] = {}
    for a, b in zip(chain, chain[1:]):
        edges.setdefault(a, []).append(b)
    for y in rest:
        p = predecessor_index(h, chain, y)
        s = successor_index(h, chain, y)
        if p >= 0:
            edges.setdefault(chain[p], []).append(y)
        if s < len(chain):
            edges.setdefault(y, []).append(chain[s])
    for idx, a in enumerate(rest):
        for b in rest[idx + 1 :]:
            if h.query(a, b):
                edges.setdefault(a, []).append(b)
            elif h.query(b, a):
                edges.setdefault(b, []).append(a)
    h.tick(sum(len(v) for v in edges.values()))
    return longest_path(chain + rest, edges)
