"""Two-phase sorting under partial information.

:func:`preprocess` talks only to the partial oracle and produces a
:class:`PreprocessedIndex`; :func:`query_sort` then recovers the hidden order
talking only to the linear oracle.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass, field

from .decomposition import BOTTOM, Decomposition, decompose
from .finger_tree import BEFORE_FIRST, FingerTree
from .poset import (
    ChainList,
    LinearOracle,
    OracleHandle,
    PartialOracle,
    PosetInstance,
    log_extensions_chain_union,
    verify_extension,
)

#: Default constant for :func:`upper_bound_budget`.
BUDGET_K = 16.0


class ExtensionViolationError(RuntimeError):
    """The recovered order disagrees with the partial order it was built from."""


def width_parameter(n: int, c: float) -> int:
    """``max(1, round(n^(1/(3c)) / 2))``, the antichain size threshold minus one."""
    return max(1, round(0.5 * n ** (1.0 / (3.0 * c))))


@dataclass
class PreprocessedIndex:
    n: int
    c: float
    decomposition: Decomposition
    tree: FingerTree
    chain_cover_sizes: list[int]
    partial_queries: int
    steps: int
    consumed: bool = False


@dataclass
class SortResult:
    order: list[int]
    complementing_set: list[tuple[int, int]]
    linear_queries: int
    partial_queries: int
    steps: int
    phases: dict[str, int] = field(default_factory=dict)
    tree: FingerTree | None = None
    #: Finger distances of the first insertion loop, in insertion order.
    distances: list[int] = field(default_factory=list)


def preprocess(h: OracleHandle, n: int, c: float) -> PreprocessedIndex:
    if c < 1:
        raise ValueError(f"trade-off parameter c must be >= 1, got {c}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    q0, s0 = h.query_count, h.step_count
    w = width_parameter(n, c)
    d = decompose(h, range(1, n + 1), w)
    tree = FingerTree.build(d.c0)
    return PreprocessedIndex(
        n=n,
        c=c,
        decomposition=d,
        tree=tree,
        chain_cover_sizes=[len(ch) for ch in d.chain_cover],
        partial_queries=h.query_count - q0,
        steps=h.step_count - s0 + tree.build_steps,
    )


def merge_two_chains(h: OracleHandle, a: Sequence[int], b: Sequence[int], less=None) -> list[int]:
    """Standard merge of two ``L``-sorted chains in at most ``|a|+|b|-1`` queries."""
    less = h.query if less is None else less
    out: list[int] = []
    i = j = 0
    while i < len(a) and j < len(b):
        if less(a[i], b[j]):
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    h.tick(len(out))
    return out


def huffman_chain_merge(h: OracleHandle, chains: ChainList, less=None) -> list[int]:
    """Merge chains by repeatedly combining the two shortest ones."""
    pool = [(len(ch), i, list(ch)) for i, ch in enumerate(chains)]
    if not pool:
        return []
    heapq.heapify(pool)
    tick = len(pool)
    while len(pool) > 1:
        _, _, a = heapq.heappop(pool)
        _, _, b = heapq.heappop(pool)
        merged = merge_two_chains(h, a, b, less)
        heapq.heappush(pool, (len(merged), tick, merged))
        tick += 1
    return pool[0][2]


def query_sort(idx: PreprocessedIndex, h: OracleHandle, verify_against=None) -> SortResult:
    """Recover the hidden order with the linear oracle ``h``.

    Insertions go into the tree held by ``idx``, so an index serves a single
    run. When ``verify_against`` (a :class:`PosetInstance`) is given, the result is
    checked to be a linear extension of it.
    """
    if idx.consumed:
        raise RuntimeError("this index was already used by a query run")
    idx.consumed = True
    d = idx.decomposition
    tree = idx.tree
    revealed: list[tuple[int, int]] = []

    def less(a: int, b: int) -> bool:
        ans = h.query(a, b)
        revealed.append((a, b) if ans else (b, a))
        return ans

    q_start, s_start = h.query_count, h.step_count
    merged = huffman_chain_merge(h, d.chain_cover, less)
    q_merge = h.query_count - q_start

    distances = []
    prev = None
    for y in merged:
        a = d.alpha[y]
        if prev is None:
            start = BEFORE_FIRST if a is BOTTOM else tree.finger(a)
        elif a is BOTTOM:
            start = tree.finger(prev)
        else:
            start = tree.finger(a if less(prev, a) else prev)
        found = tree.exponential_search(start, lambda t: less(t, y))
        distances.append(tree.last_distance)
        tree.insert_after(found, y)
        prev = y
    q_loop1 = h.query_count - q_start - q_merge

    for y in d.antichain_elements:
        found = tree.binary_search(lambda t: less(t, y))
        tree.insert_after(found, y)
    q_loop2 = h.query_count - q_start - q_merge - q_loop1

    order = tree.to_sorted_list()
    if verify_against is not None and not verify_extension(verify_against, order):
        raise ExtensionViolationError("recovered order is not a linear extension")
    return SortResult(
        order=order,
        complementing_set=list(dict.fromkeys(revealed)),
        linear_queries=h.query_count - q_start,
        partial_queries=idx.partial_queries,
        steps=idx.steps + (h.step_count - s_start) + tree.rebalance_steps + tree.nav_steps,
        phases={"merge": q_merge, "loop1": q_loop1, "loop2": q_loop2},
        tree=tree,
        distances=distances,
    )


def upper_bound_budget(
    n: int, c: float, chain_sizes: Sequence[int] | None, k: float = BUDGET_K
) -> float:
    """``k * c * max(1, log2 e(P))`` for a disjoint union of chains."""
    if not chain_sizes or sum(chain_sizes) != n:
        raise ValueError("budget is only defined for a disjoint union of chains covering 1..n")
    return k * c * max(1.0, log_extensions_chain_union(chain_sizes))


def sort_instance(p: PosetInstance, c: float) -> tuple[PreprocessedIndex, SortResult]:
    """Preprocess and sort ``p`` with fresh oracles; returns ``(index, result)``."""
    hp = PartialOracle(p)
    idx = preprocess(hp, p.n, c)
    hl = LinearOracle(p)
    res = query_sort(idx, hl, verify_against=p)
    return idx, res

