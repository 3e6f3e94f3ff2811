"""Brute-force verifiers, kept independent of the structures they check.

Nothing here reads cached counters of the engine unless the check is *about*
that cache (level-mismatch, mirror-mismatch); everything else is recomputed
from the graph, the color map and the raw level arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .errors import UnsupportedSize
from .graph import DynGraph, EdgeKey

MAX_ORACLE_N = 20


class Kind(str, enum.Enum):
    IMPROPER_PAIR = "improper-pair"
    UNCOLORED = "uncolored"
    PALETTE_EXCEEDED = "palette-exceeded"
    DECOMP_PROMOTE = "decomp-promote"
    DECOMP_DEMOTE = "decomp-demote"
    MIRROR_MISMATCH = "mirror-mismatch"
    GOOD_COLORING = "good-coloring"
    LEVEL_MISMATCH = "level-mismatch"


@dataclass(frozen=True)
class Violation:
    kind: Kind
    detail: dict = field(default_factory=dict)

    def __str__(self) -> str:
        inner = " ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{self.kind.value}: {inner}"


GraphLike = Union[DynGraph, tuple]


def _n_edges(g: GraphLike) -> tuple[int, list[EdgeKey]]:
    if isinstance(g, DynGraph):
        return g.n, list(g.edges())
    n, edges = g
    return n, [tuple(sorted(e)) for e in edges]


def exact_arboricity(g: GraphLike) -> int:
    """max over |S| >= 2 of ceil(|E(G[S])| / (|S| - 1)), by subset enumeration."""
    n, edges = _n_edges(g)
    if n > MAX_ORACLE_N:
        raise UnsupportedSize(f"exact arboricity limited to n <= {MAX_ORACLE_N}, got {n}")
    if not edges:
        return 0
    adj = [0] * n
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    total = 1 << n
    inside = np.zeros(total, dtype=np.int64)
    for bit in range(n):
        lo = 1 << bit
        subsets = np.arange(lo, dtype=np.int64)
        inside[lo : 2 * lo] = inside[:lo] + np.bitwise_count(subsets & adj[bit])
    sizes = np.bitwise_count(np.arange(total, dtype=np.int64)).astype(np.int64)
    keep = sizes >= 2
    e, s = inside[keep], sizes[keep] - 1
    return int(((e + s - 1) // s).max())


def is_proper_coloring(
    g: GraphLike, chi: Mapping[EdgeKey, Optional[int]], allow_partial: bool = False
) -> list[Violation]:
    """Adjacent colored edges must differ; all edges colored unless partial."""
    n, edges = _n_edges(g)
    out = []
    seen: dict[tuple[int, int], EdgeKey] = {}
    for e in edges:
        c = chi.get(e)
        if c is None:
            if not allow_partial:
                out.append(Violation(Kind.UNCOLORED, {"edge": e}))
            continue
        for x in e:
            other = seen.get((x, c))
            if other is not None:
                out.append(Violation(Kind.IMPROPER_PAIR, {"edges": (other, e), "vertex": x, "color": c}))
            else:
                seen[(x, c)] = e
    return out


def verify_decomposition(g: DynGraph, dec, params=None, deep: bool = False) -> list[Violation]:
    """Recheck both decomposition rules from raw levels and adjacency.

    Also compares cached up-degrees with fresh counts; ``deep`` extends the
    cache comparison to every per-level neighbor count and edge level.
    """
    params = params if params is not None else dec.params
    L = params.L
    promote_cap = math.floor(params.beta * params.d)
    demote_floor = params.d
    lev = np.asarray(dec.level, dtype=np.int64)
    out = []
    bad_range = np.nonzero((lev < 1) | (lev > L))[0]
    for u in bad_range:
        out.append(Violation(Kind.LEVEL_MISMATCH, {"node": int(u), "level": int(lev[u]), "L": L}))
    edges = np.array(list(g.edges()), dtype=np.int64).reshape(-1, 2)
    a, b = edges[:, 0], edges[:, 1]
    la, lb = lev[a], lev[b]
    n = g.n
    up = np.bincount(a, weights=lb >= la, minlength=n) + np.bincount(b, weights=la >= lb, minlength=n)
    below = np.bincount(a, weights=lb >= la - 1, minlength=n) + np.bincount(
        b, weights=la >= lb - 1, minlength=n
    )
    up = up.astype(np.int64)
    below = below.astype(np.int64)
    for u in np.nonzero((lev < L) & (up > promote_cap))[0]:
        out.append(
            Violation(Kind.DECOMP_PROMOTE, {"node": int(u), "level": int(lev[u]), "deg": int(up[u]), "cap": promote_cap})
        )
    for u in np.nonzero(lev > 1)[0]:
        if below[u] < demote_floor:
            out.append(
                Violation(
                    Kind.DECOMP_DEMOTE,
                    {"node": int(u), "level": int(lev[u]), "deg": int(below[u]), "d": str(demote_floor)},
                )
            )
    for u in range(n):
        cached = dec.up_degree(u)
        if cached != up[u]:
            out.append(Violation(Kind.LEVEL_MISMATCH, {"node": u, "cached_up": cached, "fresh_up": int(up[u])}))
    if deep:
        for u in range(n):
            fresh = [0] * L
            for y in g.neighbors(u):
                fresh[dec.level[y] - 1] += 1
            cached = dec.nbr_level_count(u)
            if cached != fresh:
                out.append(Violation(Kind.LEVEL_MISMATCH, {"node": u, "cached": cached, "fresh": fresh}))
        for x, y in g.edges():
            want = min(dec.level[x], dec.level[y])
            if dec.edge_level(x, y) != want:
                out.append(Violation(Kind.LEVEL_MISMATCH, {"edge": (x, y), "cached": dec.edge_level(x, y), "fresh": want}))
    return out


def _layer_of_edge(layers, L: int, x: int, y: int) -> int:
    for j, layer in enumerate(layers, start=1):
        if layer.level[x] < L or layer.level[y] < L:
            return j
    return len(layers)


def verify_good_coloring(eng) -> list[Violation]:
    """Every colored edge: color <= deg(head) + 2·beta·(1+eps)·alpha_tilde(layer)."""
    eps = Fraction(eng.epsilon)
    beta = 2 + 3 * eps
    g = eng.graph
    out = []
    for e, c in eng.chi.items():
        if eng.mode == "full":
            j = _layer_of_edge(eng.layers, eng.L, *e)
            alpha_j = (1 + eps) ** (j - 1)
        else:
            j = 1
            alpha_j = Fraction(eng.config.alpha_bound)
        head = eng.layers[j - 1].head(*e)
        limit = g.degree(head) + 2 * beta * (1 + eps) * alpha_j
        if c > limit:
            out.append(
                Violation(Kind.GOOD_COLORING, {"edge": e, "color": c, "head": head, "layer": j, "limit": float(limit)})
            )
    return out


def verify_color_state(eng) -> list[Violation]:
    """Full scan of the per-node color sets against the color map."""
    g = eng.graph
    chi = eng.chi
    state = eng.colors
    out = []
    for e, c in chi.items():
        if not g.has_edge(*e):
            out.append(Violation(Kind.MIRROR_MISMATCH, {"edge": e, "problem": "colored edge not in graph"}))
            continue
        for x in e:
            if state.colors_at[x].get_payload(c) != e:
                out.append(Violation(Kind.MIRROR_MISMATCH, {"edge": e, "vertex": x, "color": c}))
    for u in range(g.n):
        for c, f in state.colors_at[u].items():
            if chi.get(f) != c or u not in f:
                out.append(Violation(Kind.MIRROR_MISMATCH, {"vertex": u, "color": c, "payload": f}))
    for j, layer in enumerate(eng.layers, start=1):
        lev = layer.level
        for u in range(g.n):
            want = sorted(
                chi[(min(u, y), max(u, y))]
                for y in g.neighbors(u)
                if lev[y] >= lev[u] and (min(u, y), max(u, y)) in chi
            )
            have = list(state.up_colors(u, j))
            if want != have:
                out.append(Violation(Kind.MIRROR_MISMATCH, {"vertex": u, "layer": j, "want": want, "have": have}))
    true_max = max(chi.values(), default=0)
    if state.max_color != true_max:
        out.append(Violation(Kind.MIRROR_MISMATCH, {"cached_max": state.max_color, "max": true_max}))
    return out


def bad_edges_by_scan(eng, w: int) -> list[EdgeKey]:
    """Edges into ``w`` whose color exceeds the good-coloring limit, by full scan."""
    eps = Fraction(eng.epsilon)
    beta = 2 + 3 * eps
    deg = eng.graph.degree(w)
    out = []
    for y in eng.graph.neighbors(w):
        e = (min(w, y), max(w, y))
        c = eng.chi.get(e)
        if c is None:
            continue
        j = _layer_of_edge(eng.layers, eng.L, *e)
        if eng.layers[j - 1].head(*e) != w:
            continue
        if c > deg + 2 * beta * (1 + eps) * (1 + eps) ** (j - 1):
            out.append(e)
    return sorted(out)


def brute_new_element(s_i: Iterable[int], s_j: Iterable[int]) -> int:
    """Smallest c in [|s_i| + |s_j| + 1] outside both sets, by linear scan."""
    a, b = set(s_i), set(s_j)
    for c in range(1, len(a) + len(b) + 2):
        if c not in a and c not in b:
            return c
    raise AssertionError("pigeonhole guarantees a free color")


def full_palette_bound(delta: int, alpha: int, epsilon) -> Fraction:
    """Delta + 2·beta·(1+eps)^2·alpha."""
    eps = Fraction(epsilon)
    return delta + 2 * (2 + 3 * eps) * (1 + eps) ** 2 * alpha


def warmup_palette_bound(delta: int, alpha: int, epsilon) -> Fraction:
    """Delta + 2·beta·(1+eps)·alpha."""
    eps = Fraction(epsilon)
    return delta + 2 * (2 + 3 * eps) * (1 + eps) * alpha


def check_palette(max_color: int, bound: Fraction, **detail) -> list[Violation]:
    if max_color > bound:
        return [Violation(Kind.PALETTE_EXCEEDED, {"max_color": max_color, "bound": float(bound), **detail})]
    return []


def verify_top_level_empty(eng, alpha: int) -> list[Violation]:
    """The first layer whose guess is at least ``alpha`` keeps every node below L."""
    eps = Fraction(eng.epsilon)
    for j, layer in enumerate(eng.layers, start=1):
        if (1 + eps) ** (j - 1) >= alpha:
            top = [u for u, lv in enumerate(layer.level) if lv >= eng.L]
            if top:
                return [Violation(Kind.DECOMP_PROMOTE, {"layer": j, "alpha": alpha, "top_level_nodes": top})]
            return []
    return []
