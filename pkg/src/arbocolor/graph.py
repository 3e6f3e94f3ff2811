"""Mutable simple graph over a fixed vertex set."""

from __future__ import annotations

from typing import Iterable, Iterator, Tuple

from .errors import DuplicateEdge, InvalidArgument, MissingEdge

EdgeKey = Tuple[int, int]


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical key of the undirected edge {u, v}."""
    if u == v:
        raise InvalidArgument(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class DynGraph:
    """Simple undirected graph with vertices ``0 .. n-1``.

    Neighbor sets are insertion-ordered dicts, so iteration order depends only
    on the update sequence. A degree histogram keeps ``max_degree`` O(1)
    amortized.
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise InvalidArgument(f"vertex count must be >= 1, got {n!r}")
        self.n = n
        self.m = 0
        self._adj: list[dict[int, None]] = [{} for _ in range(n)]
        self._deg_hist = [n]
        self._max_deg = 0

    def _check_vertex(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise InvalidArgument(f"vertex {u} out of range [0, {self.n})")

    def _bump(self, u: int, delta: int) -> None:
        d = len(self._adj[u])
        old = d - delta
        self._deg_hist[old] -= 1
        if d == len(self._deg_hist):
            self._deg_hist.append(0)
        self._deg_hist[d] += 1
        if d > self._max_deg:
            self._max_deg = d
        while self._max_deg > 0 and self._deg_hist[self._max_deg] == 0:
            self._max_deg -= 1

    def insert_edge(self, u: int, v: int) -> EdgeKey:
        self._check_vertex(u)
        self._check_vertex(v)
        e = edge_key(u, v)
        if v in self._adj[u]:
            raise DuplicateEdge(f"edge {e} already present")
        self._adj[u][v] = None
        self._adj[v][u] = None
        self.m += 1
        self._bump(u, 1)
        self._bump(v, 1)
        return e

    def delete_edge(self, u: int, v: int) -> EdgeKey:
        self._check_vertex(u)
        self._check_vertex(v)
        e = edge_key(u, v)
        if v not in self._adj[u]:
            raise MissingEdge(f"edge {e} not present")
        del self._adj[u][v]
        del self._adj[v][u]
        self.m -= 1
        self._bump(u, -1)
        self._bump(v, -1)
        return e

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def neighbors(self, u: int):
        return self._adj[u].keys()

    def max_degree(self) -> int:
        return self._max_deg

    def edges(self) -> Iterator[EdgeKey]:
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def copy(self) -> "DynGraph":
        g = DynGraph(self.n)
        for u, v in self.edges():
            g.insert_edge(u, v)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DynGraph":
        g = cls(n)
        for u, v in edges:
            g.insert_edge(u, v)
        return g

    def validate(self) -> list[str]:
        """Full scan of the structural invariants; returns problems found."""
        problems = []
        total = 0
        for u, nbrs in enumerate(self._adj):
            total += len(nbrs)
            for v in nbrs:
                if v == u:
                    problems.append(f"self-loop at {u}")
                elif u not in self._adj[v]:
                    problems.append(f"asymmetric adjacency {u}->{v}")
        if total != 2 * self.m:
            problems.append(f"edge count {self.m} != half degree sum {total / 2}")
        true_max = max((len(a) for a in self._adj), default=0)
        if true_max != self._max_deg:
            problems.append(f"cached max degree {self._max_deg} != {true_max}")
        return problems

    def __repr__(self) -> str:
        return f"DynGraph(n={self.n}, m={self.m})"
