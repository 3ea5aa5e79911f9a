"""A leaf-linked (2,4)-tree with fingers, galloping search and cheap insertion.

Leaves hold the elements in order and are doubly linked. Internal nodes keep
between 2 and 4 children (the root may have fewer) and the number of leaves
below them. A finger is simply a :class:`Leaf`; leaves are never rebuilt, so
fingers stay valid through any number of insertions. :data:`BEFORE_FIRST`
is the finger in front of the first leaf.

Search predicates are probed at offsets 1, 2, 4, ... from the finger and then
bisected, so a search ending ``d`` places after its start calls the predicate
at most ``2*log2(d) + 2`` times. Walking to an offset uses parent pointers and
subtree sizes; it costs time but no predicate calls.

Insertions split overfull nodes bottom-up. Nodes made by :meth:`FingerTree.build`
have at most 3 children, and under insertions alone a (2,4)-tree performs
amortized O(1) splits per insertion.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator

MAX_FANOUT = 4


class _BeforeFirst:
    __slots__ = ()

    def __repr__(self) -> str:
        return "BEFORE_FIRST"


BEFORE_FIRST = _BeforeFirst()


class Leaf:
    __slots__ = ("elem", "parent", "prev", "next")
    size = 1

    def __init__(self, elem: int):
        self.elem = elem
        self.parent: _Node | None = None
        self.prev: Leaf | None = None
        self.next: Leaf | None = None

    def __repr__(self) -> str:
        return f"Leaf({self.elem})"


class _Node:
    __slots__ = ("children", "parent", "size", "height")

    def __init__(self, children: list, height: int):
        self.children = children
        self.parent: _Node | None = None
        self.height = height
        self.size = 0
        for ch in children:
            ch.parent = self
            self.size += ch.size


Finger = Leaf | _BeforeFirst


class FingerTree:
    def __init__(self) -> None:
        self.root: _Node | None = None
        self.head: Leaf | None = None
        self.tail: Leaf | None = None
        self._leaf: dict[int, Leaf] = {}
        self.build_steps = 0
        self.rebalance_steps = 0
        self.nav_steps = 0
        self.predicate_calls = 0
        self.last_calls = 0
        self.last_distance = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, chain: Iterable[int]) -> FingerTree:
        chain = list(chain)
        if len(set(chain)) != len(chain):
            raise ValueError("duplicate elements in chain")
        t = cls()
        if not chain:
            return t
        leaves = [Leaf(x) for x in chain]
        for a, b in zip(leaves, leaves[1:]):
            a.next = b
            b.prev = a
        t.head, t.tail = leaves[0], leaves[-1]
        t._leaf = {lf.elem: lf for lf in leaves}
        t.build_steps += len(leaves)
        level: list = leaves
        height = 1
        while True:
            if len(level) <= MAX_FANOUT:
                t.root = _Node(level, height)
                t.build_steps += 1
                break
            groups = _group_sizes(len(level))
            nxt, i = [], 0
            for g in groups:
                nxt.append(_Node(level[i : i + g], height))
                i += g
            t.build_steps += len(groups)
            level = nxt
            height += 1
        return t

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return 0 if self.root is None else self.root.size

    def __contains__(self, elem: int) -> bool:
        return elem in self._leaf

    def __iter__(self) -> Iterator[int]:
        cur = self.head
        while cur is not None:
            yield cur.elem
            cur = cur.next

    def to_sorted_list(self) -> list[int]:
        return list(self)

    @property
    def height(self) -> int:
        return 0 if self.root is None else self.root.height

    @property
    def steps(self) -> int:
        return self.build_steps + self.rebalance_steps + self.nav_steps

    def finger(self, elem: int) -> Leaf:
        return self._leaf[elem]

    def rank(self, leaf: Leaf) -> int:
        r, child, node = 0, leaf, leaf.parent
        while node is not None:
            for ch in node.children:
                if ch is child:
                    break
                r += ch.size
            self.nav_steps += 1
            child, node = node, node.parent
        return r

    def select(self, r: int) -> Leaf:
        """Leaf of rank ``r`` (0-based)."""
        if self.root is None or not 0 <= r < self.root.size:
            raise IndexError(r)
        return self._descend(self.root, r)

    def _descend(self, node: _Node, r: int) -> Leaf:
        steps = 0
        while node.height > 1:
            steps += 1
            for ch in node.children:
                if r < ch.size:
                    break
                r -= ch.size
            node = ch
        self.nav_steps += steps + 1
        return node.children[r]

    def _offset(self, start: Finger, k: int) -> Leaf | None:
        """Leaf ``k >= 1`` places after ``start``, or ``None`` past the end."""
        if start is BEFORE_FIRST:
            if self.head is None:
                return None
            if k == 1:
                return self.head
            start, k = self.head, k - 1
        if k == 1:
            return start.next
        # Climb until the current subtree reaches the target, then descend.
        child, node = start, start.parent
        off = 0
        while node is not None:
            for ch in node.children:
                if ch is child:
                    break
                off += ch.size
            self.nav_steps += 1
            if off + k < node.size:
                return self._descend(node, off + k)
            child, node = node, node.parent
        return None

    # -- searching --------------------------------------------------------

    def binary_search(self, is_less: Callable[[int], bool]) -> Finger:
        """Finger at the last element satisfying the monotone ``is_less``."""
        calls = 0
        lo, hi = -1, len(self)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            calls += 1
            if is_less(self.select(mid).elem):
                lo = mid
            else:
                hi = mid
        self._note(calls, lo + 1)
        return BEFORE_FIRST if lo < 0 else self.select(lo)

    def exponential_search(self, start: Finger, is_less: Callable[[int], bool]) -> Finger:
        """Move ``start`` forward to the last element satisfying ``is_less``.

        ``is_less`` must hold at ``start`` (not re-checked) and be monotone.
        """
        calls = 0
        lo, hi = 0, None
        at_lo: Finger = start  # leaf at offset ``lo``
        step = 1
        while True:
            leaf = self._offset(at_lo, step - lo)
            if leaf is None:
                last = len(self) if start is BEFORE_FIRST else len(self) - 1 - self.rank(start)
                if last > lo:
                    calls += 1
                    if is_less(self.tail.elem):
                        self._note(calls, last)
                        return self.tail
                    hi = last
                else:
                    hi = lo + 1
                break
            calls += 1
            if not is_less(leaf.elem):
                hi = step
                break
            lo, at_lo = step, leaf
            step *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            calls += 1
            leaf = self._offset(at_lo, mid - lo)
            if is_less(leaf.elem):
                lo, at_lo = mid, leaf
            else:
                hi = mid
        self._note(calls, lo)
        return at_lo

    def _note(self, calls: int, distance: int) -> None:
        self.predicate_calls += calls
        self.last_calls = calls
        self.last_distance = distance

    # -- insertion --------------------------------------------------------

    def insert_after(self, f: Finger, elem: int) -> Leaf:
        if elem in self._leaf:
            raise ValueError(f"element {elem} already in tree")
        leaf = Leaf(elem)
        self._leaf[elem] = leaf
        if self.root is None:
            if f is not BEFORE_FIRST:
                raise ValueError("non-empty finger on an empty tree")
            self.root = _Node([leaf], 1)
            self.head = self.tail = leaf
            self.rebalance_steps += 1
            return leaf
        if f is BEFORE_FIRST:
            node, idx = self.head.parent, 0
            leaf.next, self.head.prev = self.head, leaf
            self.head = leaf
        else:
            node = f.parent
            idx = node.children.index(f) + 1
            leaf.prev, leaf.next = f, f.next
            if f.next is not None:
                f.next.prev = leaf
            else:
                self.tail = leaf
            f.next = leaf
        node.children.insert(idx, leaf)
        leaf.parent = node
        up = node
        while up is not None:
            up.size += 1
            self.nav_steps += 1
            up = up.parent
        while len(node.children) > MAX_FANOUT:
            node = self._split(node)
        return leaf

    def _split(self, node: _Node) -> _Node:
        """Split a 5-child node into 2 + 3; return the parent for further checks."""
        self.rebalance_steps += 1
        right = _Node(node.children[2:], node.height)
        node.children = node.children[:2]
        node.size -= right.size
        parent = node.parent
        if parent is None:
            parent = _Node([node, right], node.height + 1)
            self.root = parent
            self.rebalance_steps += 1
            return parent
        parent.children.insert(parent.children.index(node) + 1, right)
        right.parent = parent
        return parent

    # -- validation -------------------------------------------------------

    def check(self) -> None:
        """Assert all structural invariants; used by tests."""
        if self.root is None:
            assert self.head is None and self.tail is None and not self._leaf
            return
        assert self.root.parent is None

        def walk(node: _Node) -> list[Leaf]:
            assert 1 <= len(node.children) <= MAX_FANOUT
            if node is not self.root:
                assert len(node.children) >= 2
            out: list[Leaf] = []
            for ch in node.children:
                assert ch.parent is node
                if node.height == 1:
                    assert isinstance(ch, Leaf)
                    out.append(ch)
                else:
                    assert isinstance(ch, _Node) and ch.height == node.height - 1
                    out.extend(walk(ch))
            assert node.size == len(out)
            return out

        leaves = walk(self.root)
        linked = []
        cur, prev = self.head, None
        while cur is not None:
            assert cur.prev is prev
            linked.append(cur)
            prev, cur = cur, cur.next
        assert prev is self.tail
        assert linked == leaves
        assert {lf.elem: lf for lf in leaves} == self._leaf


def _group_sizes(m: int) -> list[int]:
    # Groups of 3, with 2s absorbing the remainder, so every node stays in [2, 3].
    q, r = divmod(m, 3)
    if r == 0:
        return [3] * q
    if r == 1:
        return [3] * (q - 1) + [2, 2]
    return [3] * q + [2]
