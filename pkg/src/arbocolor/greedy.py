"""Static (Delta + 2·alpha - 1)-edge coloring by min-degree peeling.

Phase I peels edges at a minimum-degree node; phase II walks the peel order
backwards and gives each edge a color free at both endpoints among the edges
colored so far.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .colorset import ColorSet, new_element
from .errors import MissingEdge
from .graph import DynGraph, EdgeKey, edge_key


def phi(g: DynGraph, u: int, v: int) -> int:
    """min(deg(u), deg(v)) for a present edge."""
    if not g.has_edge(u, v):
        raise MissingEdge(f"edge {edge_key(u, v)} not present")
    return min(g.degree(u), g.degree(v))


@dataclass
class PeelOrder:
    edges: list[EdgeKey] = field(default_factory=list)
    residual_degrees: list[tuple[int, int]] = field(default_factory=list)
    bucket_ops: int = 0

    def __len__(self) -> int:
        return len(self.edges)


def peel_order(g: DynGraph) -> PeelOrder:
    """Peel every edge, a minimum-degree node at a time.

    Ties go to the smallest node id, and a node's edges leave in neighbor-id
    order. Degree buckets live in one heap of (degree, node) entries with lazy
    deletion; each edge removal pushes at most one entry, so ``bucket_ops``
    (pushes plus pops) stays below 2(n + m).
    """
    n = g.n
    deg = [g.degree(u) for u in range(n)]
    adj = [set(g.neighbors(u)) for u in range(n)]
    heap = [(deg[u], u) for u in range(n) if deg[u] > 0]
    heapq.heapify(heap)
    out = PeelOrder(bucket_ops=len(heap))
    while heap:
        d, u = heapq.heappop(heap)
        out.bucket_ops += 1
        if d != deg[u] or d == 0:
            continue
        for v in sorted(adj[u]):
            out.edges.append(edge_key(u, v))
            a, b = edge_key(u, v)
            out.residual_degrees.append((deg[a], deg[b]))
            adj[v].discard(u)
            deg[u] -= 1
            deg[v] -= 1
            if deg[v] > 0:
                heapq.heappush(heap, (deg[v], v))
                out.bucket_ops += 1
        adj[u].clear()
    return out


def clever_greedy(g: DynGraph, order: PeelOrder | None = None) -> dict[EdgeKey, int]:
    """Proper edge coloring with every color at most Delta + 2·alpha - 1."""
    if order is None:
        order = peel_order(g)
    at = [ColorSet() for _ in range(g.n)]
    chi: dict[EdgeKey, int] = {}
    for e in reversed(order.edges):
        u, v = e
        c = new_element(at[u], at[v])
        at[u].insert(c)
        at[v].insert(c)
        chi[e] = c
    return chi
