"""Poset instances, query-counting oracles and closed-form extension counts.

Elements are the integers ``1..n``. A :class:`PosetInstance` carries the cover
DAG of the partial order together with the hidden linear extension that the
linear oracle answers from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

#: Above this size reachability is resolved lazily per source instead of eagerly.
CLOSURE_MATRIX_LIMIT = 4096

DEFAULT_COUNT_LIMIT = 12

Chain = list[int]
ChainList = list[list[int]]


class InvalidInstanceError(ValueError):
    """Raised when edges or the hidden order violate the instance invariants."""


class CountLimitError(ValueError):
    """Raised when exact extension counting is refused for a too large poset."""


@dataclass(frozen=True)
class PosetInstance:
    n: int
    cover_edges: tuple[tuple[int, int], ...]
    hidden_order: tuple[int, ...]
    c_hint: float | None = None

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.cover_edges)
        order = tuple(int(x) for x in self.hidden_order)
        object.__setattr__(self, "cover_edges", edges)
        object.__setattr__(self, "hidden_order", order)
        if self.n < 0:
            raise InvalidInstanceError(f"negative element count {self.n}")
        if sorted(order) != list(range(1, self.n + 1)):
            raise InvalidInstanceError("hidden order is not a permutation of 1..n")
        seen = set()
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InvalidInstanceError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise InvalidInstanceError(f"self-loop on {u}")
            if (u, v) in seen:
                raise InvalidInstanceError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if not _is_acyclic(self.n, edges):
            raise InvalidInstanceError("cover edges contain a directed cycle")
        pos = self.positions
        for u, v in edges:
            if pos[u] > pos[v]:
                raise InvalidInstanceError(
                    f"hidden order is not a linear extension: {v} before {u}"
                )

    @cached_property
    def positions(self) -> list[int]:
        """``positions[x]`` is the index of ``x`` in the hidden order (slot 0 unused)."""
        pos = [0] * (self.n + 1)
        for i, x in enumerate(self.hidden_order):
            pos[x] = i
        return pos

    @cached_property
    def successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.cover_edges:
            succ[u].append(v)
        return succ

    @cached_property
    def reach(self) -> list[int]:
        """Descendant bitsets: bit ``v`` of ``reach[u]`` is set iff ``u`` precedes ``v``."""
        reach = [0] * (self.n + 1)
        succ = self.successors
        # The hidden order is a topological order, so sweep it backwards.
        for u in reversed(self.hidden_order):
            acc = 0
            for v in succ[u]:
                acc |= reach[v] | (1 << v)
            reach[u] = acc
        return reach

    def precedes(self, u: int, v: int) -> bool:
        """Uncounted ``u < v`` in P. Meant for validation code, not algorithms."""
        return bool((self.reach[u] >> v) & 1)

    def comparable(self, u: int, v: int) -> bool:
        return self.precedes(u, v) or self.precedes(v, u)

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)


def _is_acyclic(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    indeg = [0] * (n + 1)
    succ: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    stack = [x for x in range(1, n + 1) if indeg[x] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen == n


class OracleHandle:
    """Base for the two oracles; counts queries and algorithmic steps.

    ``step_count`` is an instruction proxy: every query adds one, and the
    algorithms add further steps through :meth:`tick` for element moves and
    bookkeeping comparisons. A handle is owned by one computation at a time.
    """

    kind = ""

    def __init__(self, instance: PosetInstance):
        self.instance = instance
        self.query_count = 0
        self.step_count = 0

    def tick(self, k: int = 1) -> None:
        self.step_count += k

    def _check(self, i: int, j: int) -> None:
        n = self.instance.n
        if i == j:
            raise ValueError(f"query on identical elements ({i}, {j})")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"query ({i}, {j}) outside 1..{n}")

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n={self.instance.n}, "
            f"queries={self.query_count}, steps={self.step_count})"
        )


class PartialOracle(OracleHandle):
    """Answers ``x_i < x_j in P?`` by reachability in the cover DAG."""

    kind = "partial"

    def __init__(self, instance: PosetInstance):
        super().__init__(instance)
        if instance.n <= CLOSURE_MATRIX_LIMIT:
            self._reach = instance.reach
            self._lazy = False
        else:
            self._reach = [-1] * (instance.n + 1)
            self._lazy = True

    def query(self, i: int, j: int) -> bool:
        self._check(i, j)
        self.query_count += 1
        self.step_count += 1
        if self._lazy and self._reach[i] < 0:
            self._resolve(i)
        return bool((self._reach[i] >> j) & 1)

    def _resolve(self, source: int) -> None:
        # Iterative post-order DFS; every finished vertex keeps its bitset.
        succ = self.instance.successors
        reach = self._reach
        stack = [(source, 0)]
        while stack:
            u, k = stack.pop()
            if k < len(succ[u]):
                stack.append((u, k + 1))
                v = succ[u][k]
                if reach[v] < 0:
                    stack.append((v, 0))
                continue
            acc = 0
            for v in succ[u]:
                acc |= reach[v] | (1 << v)
            reach[u] = acc


class LinearOracle(OracleHandle):
    """Answers ``x_i < x_j in L?`` from the hidden order."""

    kind = "linear"

    def __init__(self, instance: PosetInstance):
        super().__init__(instance)
        self._pos = instance.positions

    def query(self, i: int, j: int) -> bool:
        self._check(i, j)
        self.query_count += 1
        self.step_count += 1
        return self._pos[i] < self._pos[j]


def partial_query(h: OracleHandle, i: int, j: int) -> bool:
    if h.kind != "partial":
        raise TypeError("partial_query needs a partial oracle handle")
    return h.query(i, j)


def linear_query(h: OracleHandle, i: int, j: int) -> bool:
    if h.kind != "linear":
        raise TypeError("linear_query needs a linear oracle handle")
    return h.query(i, j)


def verify_extension(p: PosetInstance, order: Sequence[int]) -> bool:
    """True iff ``order`` is a linear extension of the partial order of ``p``."""
    order = list(order)
    if sorted(order) != list(range(1, p.n + 1)):
        raise ValueError("order is not a permutation of 1..n")
    pos = [0] * (p.n + 1)
    for i, x in enumerate(order):
        pos[x] = i
    # Respecting every cover edge implies respecting the closure.
    return all(pos[u] < pos[v] for u, v in p.cover_edges)


def count_linear_extensions(p: PosetInstance, limit: int = DEFAULT_COUNT_LIMIT) -> int:
    """Exact ``e(P)`` by exhaustive search over down-sets.

    The search branches on the currently minimal elements like a plain
    topological-order enumeration, but memoizes on the set of placed
    elements, so the cost is bounded by the number of down-sets.
    """
    if p.n > limit:
        raise CountLimitError(f"n = {p.n} exceeds the counting limit {limit}")
    n = p.n
    if n == 0:
        return 1
    pred_mask = [0] * n
    for u, v in p.cover_edges:
        pred_mask[v - 1] |= 1 << (u - 1)
    full = (1 << n) - 1
    memo: dict[int, int] = {full: 1}

    def count(placed: int) -> int:
        hit = memo.get(placed)
        if hit is not None:
            return hit
        total = 0
        for x in range(n):
            bit = 1 << x
            if not placed & bit and pred_mask[x] & placed == pred_mask[x]:
                total += count(placed | bit)
        memo[placed] = total
        return total

    return count(0)


def _check_sizes(sizes: Iterable[int]) -> list[int]:
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("chain size list is empty")
    if any(s < 1 for s in sizes):
        raise ValueError(f"chain sizes must be positive, got {sizes}")
    return sizes


def log_extensions_chain_union(sizes: Iterable[int]) -> float:
    """``log2 e(P)`` for a disjoint union of chains, i.e. log2 of a multinomial."""
    sizes = _check_sizes(sizes)
    n = sum(sizes)
    nats = math.lgamma(n + 1) - sum(math.lgamma(s + 1) for s in sizes)
    return max(0.0, nats / math.log(2))


def chain_union_entropy(sizes: Iterable[int]) -> float:
    """Entropy of the incomparability graph of a disjoint union of chains (bits)."""
    sizes = _check_sizes(sizes)
    n = sum(sizes)
    return sum(s / n * math.log2(n / s) for s in sizes)


def chain_union_sizes(p: PosetInstance) -> list[int] | None:
    """Chain lengths if the cover DAG is a disjoint union of paths, else ``None``.

    The chains are reported in order of their minimum element.
    """
    indeg = [0] * (p.n + 1)
    outdeg = [0] * (p.n + 1)
    nxt = [0] * (p.n + 1)
    for u, v in p.cover_edges:
        indeg[v] += 1
        outdeg[u] += 1
        nxt[u] = v
    if any(d > 1 for d in indeg) or any(d > 1 for d in outdeg):
        return None
    sizes = []
    for x in range(1, p.n + 1):
        if indeg[x] == 0:
            length = 1
            while outdeg[x]:
                x = nxt[x]
                length += 1
            sizes.append(length)
    return sizes


def relabel(p: PosetInstance, perm: Sequence[int]) -> PosetInstance:
    """Apply ``x -> perm[x - 1]`` to every element of ``p``."""
    m = {i + 1: int(v) for i, v in enumerate(perm)}
    edges = sorted((m[u], m[v]) for u, v in p.cover_edges)
    return PosetInstance(p.n, tuple(edges), tuple(m[x] for x in p.hidden_order), p.c_hint)
