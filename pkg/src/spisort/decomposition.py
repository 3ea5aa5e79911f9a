"""Chain/antichain decompositions of a poset behind a partial oracle.

The pipeline is: an approximate maximum chain ``c0``; a maximal family of
``(w+1)``-antichains in the rest, found by a merge-sort over chain covers
(:func:`chain_antichain_mergesort`); and a greedy chain decomposition of what
is left, which has width at most ``w``.
"""

from __future__ import annotations

import enum
from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .chains import approx_max_chain, longest_path, predecessor_index, successor_index
from .poset import ChainList, OracleHandle


class Sentinel(enum.Enum):
    BOTTOM = "BOTTOM"
    TOP = "TOP"

    def __repr__(self) -> str:
        return self.value


BOTTOM = Sentinel.BOTTOM
TOP = Sentinel.TOP


class WidthViolationError(ValueError):
    """The chains handed to a peeling iteration contain a ``(w+1)``-antichain."""


@dataclass
class Decomposition:
    c0: list[int]
    antichains: list[list[int]]
    chain_cover: ChainList
    w: int
    alpha: dict[int, int | Sentinel] = field(default_factory=dict)
    beta: dict[int, int | Sentinel] = field(default_factory=dict)

    @property
    def antichain_elements(self) -> list[int]:
        return [x for a in self.antichains for x in a]

    @property
    def chain_cover_elements(self) -> list[int]:
        return [x for c in self.chain_cover for x in c]


Cache = dict[tuple[int, int], int]


def _relation(h: OracleHandle, cache: Cache, a: int, b: int) -> int:
    """-1 if ``a < b``, 1 if ``b < a``, 0 if incomparable; one comparison per pair."""
    if a > b:
        return -_relation(h, cache, b, a)
    r = cache.get((a, b))
    if r is None:
        if h.query(a, b):
            r = -1
        elif h.query(b, a):
            r = 1
        else:
            r = 0
        cache[(a, b)] = r
    return r


class _Tops:
    """Working copies of chains plus the set of chain pairs whose tops compare."""

    def __init__(self, h: OracleHandle, chains: Sequence[Sequence[int]], cache: Cache):
        self.h = h
        self.cache = cache
        self.work = [list(c) for c in chains]
        self.comparable: set[tuple[int, int]] = set()
        for i in range(len(self.work)):
            self._refresh(i)

    def all_nonempty(self) -> bool:
        return all(self.work)

    def top(self, i: int) -> int:
        return self.work[i][-1]

    def _refresh(self, i: int) -> None:
        k = len(self.work)
        for j in range(k):
            if j != i:
                self.comparable.discard((min(i, j), max(i, j)))
        if not self.work[i]:
            return
        x = self.work[i][-1]
        for j in range(k):
            if j != i and self.work[j]:
                if _relation(self.h, self.cache, x, self.work[j][-1]):
                    self.comparable.add((min(i, j), max(i, j)))
        self.h.tick(k)

    def dominated_pair(self) -> tuple[int, int] | None:
        """``(lower, upper)`` chain indices of the lexicographically first comparable pair."""
        if not self.comparable:
            return None
        i, j = min(self.comparable)
        if _relation(self.h, self.cache, self.top(i), self.top(j)) < 0:
            return i, j
        return j, i

    def pop(self, i: int) -> int:
        x = self.work[i].pop()
        self._refresh(i)
        return x

    def pop_all(self) -> list[int]:
        tops = [c.pop() for c in self.work]
        self.comparable.clear()
        for i in range(len(self.work)):
            self._refresh(i)
        return tops


def antichain_extraction(
    h: OracleHandle, chains: Sequence[Sequence[int]], w: int, cache: Cache | None = None
) -> tuple[ChainList, list[list[int]]]:
    """Peel ``(w+1)``-antichains off the tops of ``w+1`` chains until one runs dry.

    A top that lies above another top cannot sit in any ``(w+1)``-antichain and
    is discarded from the working copy; ``w+1`` pairwise incomparable tops are
    emitted together. The extracted family is maximal.
    """
    if len(chains) != w + 1:
        raise ValueError(f"expected {w + 1} chains, got {len(chains)}")
    cache = {} if cache is None else cache
    tops = _Tops(h, chains, cache)
    antichains: list[list[int]] = []
    while tops.all_nonempty():
        pair = tops.dominated_pair()
        if pair is not None:
            tops.pop(pair[1])
        else:
            antichains.append(tops.pop_all())
    taken = {x for a in antichains for x in a}
    rest = [[x for x in c if x not in taken] for c in chains]
    h.tick(sum(len(c) for c in chains))
    return rest, antichains


def peeling_iteration(
    h: OracleHandle, chains: Sequence[Sequence[int]], w: int, cache: Cache | None = None
) -> ChainList:
    """Turn a cover by ``w+1`` chains of a width-``w`` poset into ``w`` chains.

    Tops are discarded as in :func:`antichain_extraction`, each discarded
    element remembering the top it was found above. When some chain runs
    dry, its bottom element starts an augmenting path through those
    pointers; re-linking along the path merges two chains into one.
    """
    if len(chains) != w + 1:
        raise ValueError(f"expected {w + 1} chains, got {len(chains)}")
    chains = [list(c) for c in chains]
    if any(not c for c in chains):
        empty = next(i for i, c in enumerate(chains) if not c)
        return chains[:empty] + chains[empty + 1 :]
    cache = {} if cache is None else cache
    tops = _Tops(h, chains, cache)
    above: dict[int, int] = {}
    emptied = None
    while emptied is None:
        pair = tops.dominated_pair()
        if pair is None:
            raise WidthViolationError(
                f"tops {[tops.top(i) for i in range(w + 1)]} form an antichain of size {w + 1}"
            )
        lower, upper = pair
        y = tops.pop(upper)
        above[y] = tops.top(lower)
        if not tops.work[upper]:
            emptied = upper

    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for c in chains:
        for a, b in zip(c, c[1:]):
            succ[a] = b
            pred[b] = a
    y = chains[emptied][0]
    while True:
        x = above[y]
        nxt = succ.get(x)
        succ[x] = y
        pred[y] = x
        h.tick()
        if nxt is None:
            break
        y = nxt

    out: ChainList = []
    for c in chains:
        for x in c:
            if x not in pred:
                run = [x]
                while run[-1] in succ:
                    run.append(succ[run[-1]])
                out.append(run)
    h.tick(sum(len(c) for c in out))
    if len(out) != w:
        raise AssertionError(f"peeling produced {len(out)} chains instead of {w}")
    return out


def antichain_peeling(
    h: OracleHandle, chains: Sequence[Sequence[int]], w: int, cache: Cache | None = None
) -> tuple[ChainList, list[list[int]]]:
    """Reduce ``2w`` chains to ``w`` chains, extracting ``(w+1)``-antichains on the way."""
    if len(chains) > 2 * w:
        raise ValueError(f"at most {2 * w} chains allowed, got {len(chains)}")
    cache = {} if cache is None else cache
    cs: ChainList = [list(c) for c in chains] + [[] for _ in range(2 * w - len(chains))]
    found: list[list[int]] = []
    for i in range(w - 1, -1, -1):
        group, anti = antichain_extraction(h, cs[i : i + w + 1], w, cache)
        cs[i : i + w] = peeling_iteration(h, group, w, cache)
        cs[i + w] = []
        found.extend(anti)
    return cs[:w], found


def chain_antichain_mergesort(
    h: OracleHandle, elems: Iterable[int], w: int, cache: Cache | None = None
) -> tuple[ChainList, list[list[int]]]:
    """Split ``elems`` into at most ``w`` chains plus a maximal set of ``(w+1)``-antichains.

    The chain list always has exactly ``w`` entries; some may be empty. The
    non-empty ones form a minimum chain cover of the remainder: once the merge
    finishes, peeling is retried with one chain fewer until the tops block it
    with an antichain.
    """
    if w < 1:
        raise ValueError(f"width parameter must be at least 1, got {w}")
    elems = list(elems)
    cache = {} if cache is None else cache

    def rec(part: list[int]) -> tuple[ChainList, list[list[int]]]:
        if len(part) <= w:
            return [[x] for x in part] + [[] for _ in range(w - len(part))], []
        mid = len(part) // 2
        c1, a1 = rec(part[:mid])
        c2, a2 = rec(part[mid:])
        merged, a3 = antichain_peeling(h, c1 + c2, w, cache)
        return merged, a1 + a2 + a3

    chains, antichains = rec(elems)
    chains = [c for c in chains if c]
    while len(chains) > 1:
        try:
            chains = peeling_iteration(h, chains, len(chains) - 1, cache)
        except WidthViolationError:
            break
    return chains + [[] for _ in range(w - len(chains))], antichains


def greedy_chain_decomposition(
    h: OracleHandle, cover: Sequence[Sequence[int]], elems: Iterable[int] | None = None
) -> ChainList:
    """Greedy chain decomposition via repeated longest paths in a sparse DAG.

    Every element is linked to the first element above it in each other chain
    of ``cover``; those links plus the chain paths have the same reachability
    as the poset, so a longest path is a maximum chain. Links are computed
    once and re-targeted to the next surviving element after each deletion.
    """
    chains = [list(c) for c in cover if c]
    flat = [x for c in chains for x in c]
    if len(set(flat)) != len(flat):
        raise ValueError("chain cover is not disjoint")
    if elems is not None and set(elems) != set(flat):
        raise ValueError("chain cover does not cover the element set")
    k = len(chains)
    where = {x: (i, p) for i, c in enumerate(chains) for p, x in enumerate(c)}
    # first[x][j] = smallest position in chain j above x (len(chain j) if none).
    first: dict[int, list[int]] = {x: [0] * k for x in flat}
    for i, ci in enumerate(chains):
        for j, cj in enumerate(chains):
            if i == j:
                continue
            q = 0
            for x in ci:
                while q < len(cj) and not h.query(x, cj[q]):
                    q += 1
                first[x][j] = q
            h.tick(len(ci) + len(cj))

    alive = [list(range(len(c))) for c in chains]
    result: ChainList = []
    while any(alive):
        nodes = [chains[i][p] for i in range(k) for p in alive[i]]
        edges: dict[int, list[int]] = {}
        for i in range(k):
            for a, b in zip(alive[i], alive[i][1:]):
                edges.setdefault(chains[i][a], []).append(chains[i][b])
        for x in nodes:
            i, _ = where[x]
            for j in range(k):
                if j == i or not alive[j]:
                    continue
                t = bisect_left(alive[j], first[x][j])
                if t < len(alive[j]):
                    edges.setdefault(x, []).append(chains[j][alive[j][t]])
        h.tick(len(nodes) + sum(len(v) for v in edges.values()))
        path = longest_path(nodes, edges)
        result.append(path)
        gone = set(path)
        for i in range(k):
            alive[i] = [p for p in alive[i] if chains[i][p] not in gone]
    return result


def chain_fingers(
    h: OracleHandle, c0: Sequence[int], y: int
) -> tuple[int | Sentinel, int | Sentinel]:
    """Largest element of ``c0`` below ``y`` and smallest above it (or sentinels)."""
    p = predecessor_index(h, c0, y)
    s = successor_index(h, c0, y)
    return (c0[p] if p >= 0 else BOTTOM), (c0[s] if s < len(c0) else TOP)


def decompose(h: OracleHandle, elems: Iterable[int], w: int) -> Decomposition:
    """Full decomposition of the elements into ``c0``, antichains and greedy chains."""
    elems = list(elems)
    if w < 1:
        raise ValueError(f"width parameter must be at least 1, got {w}")
    if not elems:
        return Decomposition([], [], [], w)
    c0, _ = approx_max_chain(h, elems)
    in_c0 = set(c0)
    rest = [x for x in elems if x not in in_c0]
    antichains: list[list[int]] = []
    cover: ChainList = []
    if rest:
        ys, antichains = chain_antichain_mergesort(h, rest, w)
        cover = greedy_chain_decomposition(h, ys)
    d = Decomposition(c0, antichains, cover, w)
    for chain in cover:
        for y in chain:
            d.alpha[y], d.beta[y] = chain_fingers(h, c0, y)
    return d
