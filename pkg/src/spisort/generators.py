"""Seeded instance generators.

All randomness comes from :class:`SplitMix64` so that a given seed yields the
same instance on every platform and Python version.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poset import ChainList, PosetInstance

_MASK = (1 << 64) - 1


class SplitMix64:
    """Steele, Lea and Flood's SplitMix64 generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def _edges_of_chains(chains: ChainList) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((a, b) for c in chains for a, b in zip(c, c[1:])))


@dataclass(frozen=True)
class FamilyParams:
    n: int
    c: int
    w: int
    h: int
    seed: int
    #: ``slots[l]`` is the ``(j, k)`` slot of leftover ``l`` (keys ``n/2+1 .. n``).
    slots: dict[int, tuple[int, int]]


def family_shape(n: int, c: int) -> tuple[int, int]:
    """``(w, h)`` with ``w = n^(1/c)`` and ``h = n/(2w)``; raises unless both are integers, h >= 2."""
    if n < 1 or c < 1:
        raise ValueError("family needs n >= 1 and c >= 1")
    w = round(n ** (1.0 / c))
    for cand in (w - 1, w, w + 1):
        if cand >= 1 and cand**c == n:
            w = cand
            break
    else:
        raise ValueError(f"n = {n} is not a perfect {c}-th power, so w = n^(1/c) is not integral")
    if n % (2 * w):
        raise ValueError(f"h = n/(2w) = {n}/{2 * w} is not integral")
    h = n // (2 * w)
    if h < 2:
        raise ValueError(f"h = {h} must be at least 2")
    return w, h


def nearest_family_sizes(n: int, c: int) -> list[int]:
    """The closest valid family sizes below and above ``n`` for this ``c``."""
    valid = []
    w = 1
    while True:
        m = w**c
        try:
            family_shape(m, c)
            valid.append(m)
        except ValueError:
            pass
        if m > n and valid and valid[-1] > n:
            break
        w += 1
        if w > 1 << 16:
            break
    below = [m for m in valid if m <= n]
    above = [m for m in valid if m > n]
    return ([below[-1]] if below else []) + ([above[0]] if above else [])


def family_params(n: int, c: int, seed: int) -> FamilyParams:
    w, h = family_shape(n, c)
    rng = SplitMix64(seed)
    slots = {}
    for leftover in range(n // 2 + 1, n + 1):
        s = rng.below(w * (h - 1))
        slots[leftover] = (s % w + 1, s // w)
    return FamilyParams(n, c, w, h, seed, slots)


def family_chains(params: FamilyParams) -> ChainList:
    w, h = params.w, params.h
    between: dict[tuple[int, int], list[int]] = {}
    for leftover in sorted(params.slots):
        between.setdefault(params.slots[leftover], []).append(leftover)
    chains = []
    for j in range(1, w + 1):
        chain = []
        for k in range(h):
            chain.append(j + k * w)
            if k < h - 1:
                chain.extend(between.get((j, k), []))
        chains.append(chain)
    return chains


def gen_lower_bound_family(n: int, c: int, seed: int) -> PosetInstance:
    """Disjoint union of ``w`` chains of essentials with leftovers dropped into slots.

    The hidden order is the concatenation of chains ``1..w``.
    """
    chains = family_chains(family_params(n, c, seed))
    order = tuple(x for ch in chains for x in ch)
    return PosetInstance(n, _edges_of_chains(chains), order, float(c))


def recover_family_partial_order(order: Sequence[int], w: int) -> ChainList:
    """Cut a family hidden order at the essentials ``1..w`` to get back its chains."""
    order = list(order)
    pos = {x: i for i, x in enumerate(order)}
    if any(j not in pos for j in range(1, w + 1)):
        raise ValueError(f"elements 1..{w} must all occur in the order")
    cuts = sorted(pos[j] for j in range(1, w + 1))
    if cuts[0] != 0:
        raise ValueError("order does not start with a chain head")
    return [order[a:b] for a, b in zip(cuts, cuts[1:] + [len(order)])]


def gen_random_chain_union(n: int, w: int, seed: int) -> PosetInstance:
    """Random partition of ``1..n`` into ``w`` non-empty chains, randomly interleaved."""
    if not 1 <= w <= n:
        raise ValueError(f"need 1 <= w <= n, got w={w}, n={n}")
    rng = SplitMix64(seed)
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    cuts = list(range(1, n))
    rng.shuffle(cuts)
    bounds = [0, *sorted(cuts[: w - 1]), n]
    chains = [labels[a:b] for a, b in zip(bounds, bounds[1:])]
    which = [i for i, ch in enumerate(chains) for _ in ch]
    rng.shuffle(which)
    nxt = [0] * w
    order = []
    for i in which:
        order.append(chains[i][nxt[i]])
        nxt[i] += 1
    return PosetInstance(n, _edges_of_chains(chains), tuple(order))


def gen_random_poset(n: int, density: float, seed: int) -> PosetInstance:
    """Random order: each pair of a random permutation is related with ``density``.

    Edges are transitively reduced; the hidden order is a random topological sort.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    if not 0 <= n <= 64:
        raise ValueError(f"random posets are limited to n <= 64, got {n}")
    rng = SplitMix64(seed)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    reach = {x: 0 for x in perm}
    direct: dict[int, set[int]] = {x: set() for x in perm}
    for i in range(n):
        for j in range(i + 1, n):
            if density >= 1.0 or rng.random() < density:
                direct[perm[i]].add(perm[j])
    # Closure by reverse sweep, then keep only edges not implied by a longer path.
    for x in reversed(perm):
        acc = 0
        for y in direct[x]:
            acc |= reach[y] | (1 << y)
        reach[x] = acc
    edges = []
    for x in perm:
        succ = [y for y in range(1, n + 1) if (reach[x] >> y) & 1]
        for y in succ:
            if not any((reach[z] >> y) & 1 for z in succ if z != y):
                edges.append((x, y))
    indeg = {x: 0 for x in perm}
    out: dict[int, list[int]] = {x: [] for x in perm}
    for u, v in edges:
        indeg[v] += 1
        out[u].append(v)
    ready = sorted(x for x in perm if indeg[x] == 0)
    order = []
    while ready:
        x = ready.pop(rng.below(len(ready)))
        order.append(x)
        for v in out[x]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
        ready.sort()
    return PosetInstance(n, tuple(sorted(edges)), tuple(order))


def gen_max_chain_hard_family(n: int, k: int, seed: int) -> tuple[PosetInstance, list[int]]:
    """Poset whose unique maximum chain ``{x, y} + B`` has length ``n - k``.

    ``k + 2`` elements form the bottom layer, where only ``x < y`` holds; the
    remaining ``n - k - 2`` form a chain ``B`` above all of them. Returns the
    instance and its maximum chain.
    """
    if not 0 < k <= n - 2:
        raise ValueError(f"need 0 < k <= n - 2, got k={k}, n={n}")
    rng = SplitMix64(seed)
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    bottom, chain_b = labels[: k + 2], labels[k + 2 :]
    x, y = bottom[0], bottom[1]
    edges = {(x, y)}
    edges.update(zip(chain_b, chain_b[1:]))
    if chain_b:
        edges.update((a, chain_b[0]) for a in bottom if a != x)
    others = bottom[2:]
    rng.shuffle(others)
    cut = rng.below(len(others) + 1)
    order = others[:cut] + [x] + others[cut:]
    order.insert(order.index(x) + 1 + rng.below(len(order) - order.index(x)), y)
    order += chain_b
    return PosetInstance(n, tuple(sorted(edges)), tuple(order)), [x, y, *chain_b]
