"""Dynamic (beta, d, L)-decompositions of a graph.

A decomposition assigns every node a level in ``1..L``. With
``deg_i(u) = |{v in N(u) : level(v) >= i}|`` it must satisfy, for every node:

* promote rule: ``level(u) < L`` implies ``deg_level(u)(u) <= beta * d``;
* demote rule: ``level(u) > 1`` implies ``deg_{level(u)-1}(u) >= d``.

``LayerDecomposition`` restores both rules after each edge update with a
local settle loop and reports which edges changed level. Thresholds are
compared exactly: integer degrees against the rational ``beta * d`` and ``d``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from .errors import InternalError, InvalidArgument
from .graph import DynGraph, EdgeKey, edge_key

Number = Union[int, float, str, Fraction]


def as_fraction(x: Number) -> Fraction:
    """Exact rational for ``x``; floats are read through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def level_count(n: int, epsilon: Number) -> int:
    """L = 2 + ceil(log_{1+eps} n), evaluated exactly."""
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise InvalidArgument(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    base = 1 + eps
    k, power = 0, Fraction(1)
    while power < n:
        power *= base
        k += 1
    return 2 + k


@dataclass(frozen=True)
class DecompParams:
    beta: Fraction
    d: Fraction
    L: int
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "d", as_fraction(self.d))
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
            if not 0 < self.epsilon < 1:
                raise InvalidArgument(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.beta < 1:
            raise InvalidArgument(f"beta must be >= 1, got {self.beta}")
        if self.d < 0:
            raise InvalidArgument(f"d must be >= 0, got {self.d}")
        if not isinstance(self.L, int) or self.L < 1:
            raise InvalidArgument(f"L must be a positive integer, got {self.L}")

    @classmethod
    def dynamic(cls, n: int, epsilon: Number, d: Number) -> "DecompParams":
        eps = as_fraction(epsilon)
        return cls(beta=2 + 3 * eps, d=as_fraction(d), L=level_count(n, eps), epsilon=eps)

    @property
    def promote_above(self) -> int:
        """Largest integer degree that does not exceed beta * d."""
        return math.floor(self.beta * self.d)

    @property
    def demote_below(self) -> int:
        """Smallest integer degree that is not below d."""
        return math.ceil(self.d)


@dataclass(frozen=True)
class LevelChange:
    edge: EdgeKey
    old_level: Optional[int]
    new_level: int
    layer: int = 1

    @property
    def is_new(self) -> bool:
        return self.old_level is None


class ChangeLog:
    """Edges whose level changed while handling one update.

    The inserted edge (if any) is recorded with ``old_level=None``. An edge
    that moved several times appears once, with its first and final level.
    """

    def __init__(self, records: Iterable[LevelChange] = ()):
        self.records: list[LevelChange] = list(records)

    def edges(self) -> list[EdgeKey]:
        return list(dict.fromkeys(r.edge for r in self.records))

    def level_changed_edges(self) -> list[EdgeKey]:
        return list(dict.fromkeys(r.edge for r in self.records if not r.is_new))

    def __len__(self) -> int:
        return len(self.edges())

    def __iter__(self):
        return iter(self.records)

    def __repr__(self) -> str:
        return f"ChangeLog({self.records!r})"


MoveListener = Callable[["LayerDecomposition", int, int, int], None]


class LayerDecomposition:
    """One decomposition maintained under updates of a shared ``DynGraph``.

    Per node we store its level, counts of neighbors at each level >= 2
    (level-1 neighbors are ``deg - elev``), and for nodes above level 1 the
    up-degree ``deg_level(u)(u)``. The caller mutates the graph first, then
    calls ``on_insert`` / ``on_delete``.

    ``listener(layer, u, old, new)`` fires after every single-level move, once
    the counts are consistent again.
    """

    def __init__(
        self,
        graph: DynGraph,
        params: DecompParams,
        index: int = 1,
        listener: Optional[MoveListener] = None,
        levels: Optional[list[int]] = None,
    ):
        if graph.m != 0 and levels is None:
            raise InvalidArgument("a decomposition must start from an empty graph")
        self.graph = graph
        self.params = params
        self.index = index
        self.listener = listener
        self.L = params.L
        self.hi = params.promote_above
        self.lo = params.demote_below
        n = graph.n
        self.level = [1] * n
        self._cnt = [[0] * (self.L + 1) for _ in range(n)]
        self._elev = [0] * n
        self._up = [0] * n
        self._tail: dict[EdgeKey, int] = {}
        self.elevated = 0
        self.total_moves = 0
        self._queue: deque = deque()
        self._queued: set = set()
        self._pending: dict = {}
        if levels is not None:
            self.load_levels(levels)

    # -- queries ---------------------------------------------------------

    def node_level(self, u: int) -> int:
        return self.level[u]

    def edge_level(self, u: int, v: int) -> int:
        a, b = self.level[u], self.level[v]
        return a if a < b else b

    def up_degree(self, u: int) -> int:
        """deg_{level(u)}(u): neighbors at or above u's level."""
        if self.level[u] == 1:
            return len(self.graph._adj[u])
        return self._up[u]

    def deg_at(self, u: int, i: int) -> int:
        """deg_i(u) as a suffix sum over the per-level neighbor counts."""
        if i <= 1:
            return self.graph.degree(u)
        cnt = self._cnt[u]
        return sum(cnt[i:])

    def nbr_level_count(self, u: int) -> list[int]:
        """Entry ``i - 1`` is the number of neighbors at level ``i``."""
        counts = list(self._cnt[u][1:])
        counts[0] = self.graph.degree(u) - self._elev[u]
        return counts

    def up_neighbors(self, u: int) -> list[EdgeKey]:
        lu = self.level[u]
        lev = self.level
        return [edge_key(u, y) for y in self.graph.neighbors(u) if lev[y] >= lu]

    def tail(self, u: int, v: int) -> int:
        """Stored tail of edge {u, v}; level rule if it was never oriented."""
        e = edge_key(u, v)
        t = self._tail.get(e)
        if t is None:
            return self._orient(*e)
        return t

    def head(self, u: int, v: int) -> int:
        t = self.tail(u, v)
        return v if t == u else u

    def _orient(self, a: int, b: int) -> int:
        la, lb = self.level[a], self.level[b]
        if la < lb:
            return a
        if lb < la:
            return b
        return a if a < b else b

    def reorient(self, u: int, v: int) -> tuple[int, int]:
        """Point edge {u, v} from its lower-level endpoint; returns (tail, head)."""
        e = edge_key(u, v)
        t = self._orient(*e)
        self._tail[e] = t
        return (t, e[1] if t == e[0] else e[0])

    # -- updates ---------------------------------------------------------

    def _add_nbr(self, x: int, lvl: int) -> None:
        self._cnt[x][lvl] += 1
        self._elev[x] += 1
        lx = self.level[x]
        if lx >= 2 and lvl >= lx:
            self._up[x] += 1

    def _remove_nbr(self, x: int, lvl: int) -> None:
        self._cnt[x][lvl] -= 1
        self._elev[x] -= 1
        lx = self.level[x]
        if lx >= 2 and lvl >= lx:
            self._up[x] -= 1

    def _needs_promote(self, x: int) -> bool:
        lx = self.level[x]
        if lx >= self.L:
            return False
        up = len(self.graph._adj[x]) if lx == 1 else self._up[x]
        return up > self.hi

    def _needs_demote(self, x: int) -> bool:
        lx = self.level[x]
        if lx == 1:
            return False
        if lx == 2:
            below = len(self.graph._adj[x])
        else:
            below = self._up[x] + self._cnt[x][lx - 1]
        return below < self.lo

    def _enqueue(self, x: int) -> None:
        if x not in self._queued:
            self._queued.add(x)
            self._queue.append(x)

    def _note(self, y: int, x: int, old: int, new: int) -> None:
        e = (x, y) if x < y else (y, x)
        rec = self._pending.get(e)
        if rec is None:
            self._pending[e] = [old, new]
        else:
            rec[1] = new

    def _promote(self, x: int) -> None:
        i = self.level[x]
        cnt_x = self._cnt[x]
        if i == 1:
            self._up[x] = self._elev[x]
            self.elevated += 1
        else:
            self._up[x] -= cnt_x[i]
        self.level[x] = i + 1
        lev, cnt, elev, up = self.level, self._cnt, self._elev, self._up
        for y in self.graph._adj[x]:
            cy = cnt[y]
            if i >= 2:
                cy[i] -= 1
            else:
                elev[y] += 1
            cy[i + 1] += 1
            ly = lev[y]
            if ly > i:
                self._note(y, x, i, i + 1)
                if ly == i + 1:
                    up[y] += 1
                    if self._needs_promote(y):
                        self._enqueue(y)
        self._enqueue(x)
        if self.listener is not None:
            self.listener(self, x, i, i + 1)

    def _demote(self, x: int) -> None:
        i = self.level[x]
        if i == 2:
            self.elevated -= 1
        else:
            self._up[x] += self._cnt[x][i - 1]
        self.level[x] = i - 1
        lev, cnt, elev, up = self.level, self._cnt, self._elev, self._up
        for y in self.graph._adj[x]:
            cy = cnt[y]
            cy[i] -= 1
            if i >= 3:
                cy[i - 1] += 1
            else:
                elev[y] -= 1
            ly = lev[y]
            if ly >= i:
                self._note(y, x, i, i - 1)
                if ly == i:
                    up[y] -= 1
                elif ly == i + 1 and self._needs_demote(y):
                    self._enqueue(y)
        self._enqueue(x)
        if self.listener is not None:
            self.listener(self, x, i, i - 1)

    def settle(self) -> None:
        """Pop dirty nodes FIFO and move them one level until none violates."""
        cap = self.graph.n * self.L
        moves = 0
        queue, queued = self._queue, self._queued
        while queue:
            x = queue.popleft()
            queued.discard(x)
            if self._needs_promote(x):
                self._promote(x)
            elif self._needs_demote(x):
                self._demote(x)
            else:
                continue
            moves += 1
            if moves > cap:
                raise InternalError(f"settle exceeded {cap} moves in layer {self.index}")
        self.total_moves += moves

    def _flush(self, inserted: Optional[EdgeKey] = None) -> ChangeLog:
        records = []
        if inserted is not None:
            records.append(LevelChange(inserted, None, self.edge_level(*inserted), self.index))
        for e, (old, new) in self._pending.items():
            if e != inserted:
                records.append(LevelChange(e, old, new, self.index))
        self._pending = {}
        return ChangeLog(records)

    def on_insert(self, u: int, v: int) -> ChangeLog:
        """Restore the rules after edge {u, v} was added to the graph."""
        lu, lv = self.level[u], self.level[v]
        if lu >= 2:
            self._add_nbr(v, lu)
        if lv >= 2:
            self._add_nbr(u, lv)
        if self._needs_promote(u):
            self._enqueue(u)
        if self._needs_promote(v):
            self._enqueue(v)
        if self._queue:
            self.settle()
        return self._flush(edge_key(u, v))

    def on_delete(self, u: int, v: int) -> ChangeLog:
        """Restore the rules after edge {u, v} was removed from the graph."""
        lu, lv = self.level[u], self.level[v]
        if lu >= 2:
            self._remove_nbr(v, lu)
        if lv >= 2:
            self._remove_nbr(u, lv)
        self._tail.pop(edge_key(u, v), None)
        if self._needs_demote(u):
            self._enqueue(u)
        if self._needs_demote(v):
            self._enqueue(v)
        if self._queue:
            self.settle()
        return self._flush()

    def quick_insert(self, u: int, v: int) -> bool:
        """Fast path for ``on_insert``: True if nothing moved or changed."""
        lev = self.level
        if lev[u] != 1 or lev[v] != 1:
            return False
        adj = self.graph._adj
        return len(adj[u]) <= self.hi and len(adj[v]) <= self.hi

    def quick_delete(self, u: int, v: int) -> bool:
        """Fast path for ``on_delete`` when both endpoints sit at level 1."""
        lev = self.level
        if lev[u] != 1 or lev[v] != 1:
            return False
        self._tail.pop((u, v) if u < v else (v, u), None)
        return True

    def load_levels(self, levels: list[int]) -> None:
        """Replace all levels at once and rebuild counts from the graph."""
        if len(levels) != self.graph.n or any(not 1 <= x <= self.L for x in levels):
            raise InvalidArgument("levels must give each node a value in [1, L]")
        n = self.graph.n
        self.level = list(levels)
        self._cnt = [[0] * (self.L + 1) for _ in range(n)]
        self._elev = [0] * n
        self._up = [0] * n
        for a, b in self.graph.edges():
            la, lb = self.level[a], self.level[b]
            if la >= 2:
                self._cnt[b][la] += 1
                self._elev[b] += 1
            if lb >= 2:
                self._cnt[a][lb] += 1
                self._elev[a] += 1
        for u in range(n):
            lu = self.level[u]
            if lu >= 2:
                self._up[u] = sum(self._cnt[u][lu:])
        self.elevated = sum(1 for x in self.level if x >= 2)
        self._tail = {}


def decomp_init(graph: DynGraph, params: DecompParams, **kwargs) -> LayerDecomposition:
    return LayerDecomposition(graph, params, **kwargs)


def static_peel(graph: DynGraph, d: Number, L: int) -> LayerDecomposition:
    """Peel ``graph`` into a (1, d, L)-decomposition.

    Z_1 = V and Z_{i+1} holds the nodes of Z_i whose degree inside G[Z_i]
    exceeds d. The result is a snapshot over a copy of ``graph``.
    """
    d = as_fraction(d)
    snapshot = graph.copy()
    edges = list(snapshot.edges())
    snapshot_levels = [1] * snapshot.n
    alive = set(range(snapshot.n))
    for i in range(1, L):
        deg = dict.fromkeys(alive, 0)
        for a, b in edges:
            if a in alive and b in alive:
                deg[a] += 1
                deg[b] += 1
        alive = {u for u, k in deg.items() if k > d}
        if not alive:
            break
        for u in alive:
            snapshot_levels[u] = i + 1
    return LayerDecomposition(snapshot, DecompParams(beta=1, d=d, L=L), levels=snapshot_levels)
