"""Order-statistic sets of positive integers (colors).

Each set is an AVL tree whose nodes carry their subtree size, so membership,
update and rank queries touch O(log |s|) nodes. ``new_element`` finds a
color missing from two sets by binary search over range counts.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .errors import DuplicateElement, InvalidArgument, MissingElement


class _Node:
    __slots__ = ("key", "payload", "left", "right", "height", "size")

    def __init__(self, key, payload):
        self.key = key
        self.payload = payload
        self.left = None
        self.right = None
        self.height = 1
        self.size = 1


def _h(node):
    return node.height if node is not None else 0


def _sz(node):
    return node.size if node is not None else 0


def _fix(node):
    lh = node.left.height if node.left is not None else 0
    rh = node.right.height if node.right is not None else 0
    node.height = (lh if lh > rh else rh) + 1
    node.size = _sz(node.left) + _sz(node.right) + 1


def _rot_right(y):
    x = y.left
    y.left = x.right
    x.right = y
    _fix(y)
    _fix(x)
    return x


def _rot_left(x):
    y = x.right
    x.right = y.left
    y.left = x
    _fix(x)
    _fix(y)
    return y


def _rebalance(node):
    _fix(node)
    bal = _h(node.left) - _h(node.right)
    if bal > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rot_left(node.left)
        return _rot_right(node)
    if bal < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rot_right(node.right)
        return _rot_left(node)
    return node


class ColorSet:
    """A set of distinct positive integers with optional per-element payload.

    ``touched`` counts tree nodes visited by all operations so far; tests use
    it to check logarithmic cost.
    """

    __slots__ = ("_root", "touched")

    def __init__(self, items=None):
        self._root: Optional[_Node] = None
        self.touched = 0
        if items is not None:
            for x in items:
                self.insert(x)

    def __len__(self) -> int:
        return _sz(self._root)

    @property
    def size(self) -> int:
        return _sz(self._root)

    def __iter__(self) -> Iterator[int]:
        stack = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.key
            node = node.right

    def items(self) -> Iterator[tuple[int, object]]:
        stack = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.key, node.payload
            node = node.right

    def __contains__(self, x: int) -> bool:
        return self.contains(x)

    def __repr__(self) -> str:
        return f"ColorSet({list(self)})"

    def height(self) -> int:
        return _h(self._root)

    def insert(self, x: int, payload=None) -> None:
        if x < 1:
            raise InvalidArgument(f"colors are positive integers, got {x}")
        self._root = self._insert(self._root, x, payload)

    def _insert(self, node, x, payload):
        self.touched += 1
        if node is None:
            return _Node(x, payload)
        if x < node.key:
            node.left = self._insert(node.left, x, payload)
        elif x > node.key:
            node.right = self._insert(node.right, x, payload)
        else:
            raise DuplicateElement(f"{x} already in set")
        return _rebalance(node)

    def delete(self, x: int) -> None:
        self._root = self._delete(self._root, x)

    def _delete(self, node, x):
        self.touched += 1
        if node is None:
            raise MissingElement(f"{x} not in set")
        if x < node.key:
            node.left = self._delete(node.left, x)
        elif x > node.key:
            node.right = self._delete(node.right, x)
        else:
            if node.left is None:
                return node.right
            if node.right is None:
                return node.left
            succ = node.right
            while succ.left is not None:
                self.touched += 1
                succ = succ.left
            node.key, node.payload = succ.key, succ.payload
            node.right = self._delete_min(node.right)
        return _rebalance(node)

    def _delete_min(self, node):
        self.touched += 1
        if node.left is None:
            return node.right
        node.left = self._delete_min(node.left)
        return _rebalance(node)

    def _find(self, x):
        node = self._root
        while node is not None:
            self.touched += 1
            if x < node.key:
                node = node.left
            elif x > node.key:
                node = node.right
            else:
                return node
        return None

    def contains(self, x: int) -> bool:
        return self._find(x) is not None

    def get_payload(self, x: int):
        """Payload stored with ``x``, or None when ``x`` is absent."""
        node = self._find(x)
        return None if node is None else node.payload

    def count_le(self, k: int) -> int:
        """|s ∩ [1, k]|."""
        total = 0
        node = self._root
        while node is not None:
            self.touched += 1
            if node.key > k:
                node = node.left
            else:
                total += _sz(node.left) + 1
                node = node.right
        return total

    def count_in_range(self, k1: int, k2: int) -> int:
        """|s ∩ [k1, k2]|."""
        if k1 > k2:
            raise InvalidArgument(f"empty range [{k1}, {k2}]")
        return self.count_le(k2) - self.count_le(k1 - 1)

    def max(self) -> int:
        node = self._root
        if node is None:
            return 0
        while node.right is not None:
            node = node.right
        return node.key


def new_element(s_i: ColorSet, s_j: ColorSet, stats: Optional[dict] = None) -> int:
    """Some c in [|s_i| + |s_j| + 1] missing from both sets.

    Keeps an interval whose combined range count is below its length and
    halves it, preferring the left half when it still qualifies.
    """
    lo, hi = 1, len(s_i) + len(s_j) + 1
    queries = 0
    while lo < hi:
        mid = (lo + hi) // 2
        queries += 2
        if s_i.count_in_range(lo, mid) + s_j.count_in_range(lo, mid) < mid - lo + 1:
            hi = mid
        else:
            lo = mid + 1
    if stats is not None:
        stats["range_queries"] = stats.get("range_queries", 0) + queries
    return lo
