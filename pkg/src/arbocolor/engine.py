"""Dynamic edge coloring driven by low out-degree orientations.

Two modes share one engine:

* ``warmup``: a single decomposition with d = 2(1+eps)·alpha for a known
  arboricity bound. Insertions run one recoloring cascade whose length is at
  most L; deletions never recolor.
* ``full``: a decomposition system with one layer per arboricity guess. The
  engine keeps every colored edge *good*:
  ``color(e) <= deg(head) + 2·beta·(1+eps)·alpha_tilde(layer(e))``, which
  bounds the palette by the current max degree and arboricity.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .colorset import ColorSet, new_element
from .decomposition import (
    ChangeLog,
    DecompParams,
    LayerDecomposition,
    Number,
    as_fraction,
    level_count,
    static_peel,
)
from .errors import InternalError, InvalidConfig, InvalidInput, MissingEdge
from .graph import DynGraph, EdgeKey, edge_key
from .metrics import MetricsRow
from .system import DecompositionSystem


class ColorState:
    """Partial edge coloring plus the per-node color sets used to extend it.

    ``colors_at[u]`` holds the colors on edges at ``u`` with a back-pointer to
    the edge. ``up[u][j]`` holds the colors on edges from ``u`` to neighbors at
    or above u's level in layer ``j``; it exists only while u sits above level
    1 there, since at level 1 that set equals ``colors_at[u]``.
    """

    def __init__(self, n: int):
        self.n = n
        self.chi: dict[EdgeKey, int] = {}
        self.colors_at = [ColorSet() for _ in range(n)]
        self.up: list[dict[int, ColorSet]] = [{} for _ in range(n)]
        self._count: dict[int, int] = {}
        self.max_color = 0
        self._layers: dict[int, LayerDecomposition] = {}

    def attach(self, layer: LayerDecomposition) -> None:
        """Track up-colors for ``layer`` (which may already hold levels)."""
        j = layer.index
        self._layers[j] = layer
        lev = layer.level
        adj = layer.graph._adj
        chi = self.chi
        for x in range(self.n):
            self.up[x].pop(j, None)
            lx = lev[x]
            if lx < 2:
                continue
            s = ColorSet()
            for y in adj[x]:
                if lev[y] >= lx:
                    c = chi.get((x, y) if x < y else (y, x))
                    if c is not None:
                        s.insert(c)
            self.up[x][j] = s

    def color_of(self, e: EdgeKey) -> Optional[int]:
        return self.chi.get(e)

    def up_colors(self, u: int, j: int) -> ColorSet:
        s = self.up[u].get(j)
        return self.colors_at[u] if s is None else s

    def assign(self, e: EdgeKey, c: int) -> None:
        u, v = e
        self.colors_at[u].insert(c, e)
        self.colors_at[v].insert(c, e)
        self.chi[e] = c
        layers = self._layers
        for x, y in ((u, v), (v, u)):
            for j, s in self.up[x].items():
                lev = layers[j].level
                if lev[y] >= lev[x]:
                    s.insert(c)
        self._count[c] = self._count.get(c, 0) + 1
        if c > self.max_color:
            self.max_color = c

    def clear(self, e: EdgeKey) -> int:
        c = self.chi.pop(e)
        u, v = e
        self.colors_at[u].delete(c)
        self.colors_at[v].delete(c)
        layers = self._layers
        for x, y in ((u, v), (v, u)):
            for j, s in self.up[x].items():
                lev = layers[j].level
                if lev[y] >= lev[x]:
                    s.delete(c)
        left = self._count[c] - 1
        if left:
            self._count[c] = left
        else:
            del self._count[c]
            if c == self.max_color:
                while self.max_color > 0 and self.max_color not in self._count:
                    self.max_color -= 1
        return c

    def on_move(self, layer: LayerDecomposition, x: int, old: int, new: int) -> None:
        """Listener: node ``x`` moved from level ``old`` to ``new`` in ``layer``."""
        j = layer.index
        lev = layer.level
        chi = self.chi
        up = self.up
        rising = new > old
        if old == 1:
            own = ColorSet()
            up[x][j] = own
        elif new == 1:
            del up[x][j]
            own = None
        else:
            own = up[x][j]
        for y in layer.graph._adj[x]:
            ly = lev[y]
            c = chi.get((x, y) if x < y else (y, x))
            if c is None:
                continue
            if own is not None:
                if old == 1:
                    if ly >= 2:
                        own.insert(c)
                elif rising:
                    if ly == old:
                        own.delete(c)
                elif ly == new:
                    own.insert(c)
            if ly >= 2:
                if rising:
                    if ly == new:
                        up[y][j].insert(c)
                elif ly == old:
                    up[y][j].delete(c)


@dataclass
class EngineConfig:
    n: int
    mode: str = "full"
    epsilon: Number = Fraction(1, 2)
    alpha_bound: Optional[int] = None
    check_potential: bool = True

    def __post_init__(self):
        if self.mode not in ("warmup", "full"):
            raise InvalidConfig(f"mode must be 'warmup' or 'full', got {self.mode!r}")
        self.epsilon = as_fraction(self.epsilon)
        if not 0 < self.epsilon < 1:
            raise InvalidConfig(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.mode == "warmup":
            if self.alpha_bound is None or self.alpha_bound < 1:
                raise InvalidConfig("warmup mode needs alpha_bound >= 1")
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidConfig(f"n must be >= 1, got {self.n!r}")


@dataclass
class CascadeTrace:
    """Per-update record of the potentials seen along conflict chains."""

    steps: list = field(default_factory=list)


class Engine:
    """Maintains a proper coloring of a dynamic graph; see module docstring."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.mode = config.mode
        self.epsilon: Fraction = config.epsilon
        self.beta: Fraction = 2 + 3 * self.epsilon
        self.graph = DynGraph(config.n)
        self.colors = ColorState(config.n)
        self.L = level_count(config.n, self.epsilon)
        if self.mode == "full":
            self.system: Optional[DecompositionSystem] = DecompositionSystem(
                self.graph, self.epsilon, listener=self.colors.on_move
            )
            self.layers = self.system.layers
            self.decomp: Optional[LayerDecomposition] = None
        else:
            self.system = None
            d = 2 * (1 + self.epsilon) * config.alpha_bound
            params = DecompParams.dynamic(config.n, self.epsilon, d)
            self.decomp = LayerDecomposition(self.graph, params, listener=self.colors.on_move)
            self.layers = [self.decomp]
        for layer in self.layers:
            self.colors.attach(layer)
        # floor(beta * d_j): the slack allowed above deg(head) in layer j
        self._slack = [layer.hi for layer in self.layers]
        self.steps = 0
        self.peak_color = 0
        self.max_degree_seen = 0
        self.total_recolored = 0
        self.total_uncolored = 0
        self.last_cascade = CascadeTrace()

    # -- layer helpers ---------------------------------------------------

    def node_layer(self, u: int) -> int:
        return self.system.node_layer(u) if self.system is not None else 1

    def edge_layer(self, u: int, v: int) -> int:
        return self.system.edge_layer(u, v) if self.system is not None else 1

    def layer(self, j: int) -> LayerDecomposition:
        return self.layers[j - 1]

    def alpha_tilde(self, j: int) -> Fraction:
        if self.system is not None:
            return self.system.alpha_tilde(j)
        return Fraction(self.config.alpha_bound)

    def threshold_slack(self, j: int) -> Fraction:
        """2·beta·(1+eps)·alpha_tilde(j), the exact good-coloring slack."""
        return 2 * self.beta * (1 + self.epsilon) * self.alpha_tilde(j)

    def potential(self, u: int, v: int) -> int:
        """L·(layer(f) - 1) + level of f in that layer."""
        j = self.edge_layer(u, v)
        return self.L * (j - 1) + self.layers[j - 1].edge_level(u, v)

    def head(self, u: int, v: int) -> int:
        j = self.edge_layer(u, v)
        return self.layers[j - 1].head(u, v)

    # -- observables -----------------------------------------------------

    def max_color_used(self) -> int:
        return self.colors.max_color

    def color_of(self, u: int, v: int) -> Optional[int]:
        e = edge_key(u, v)
        if not self.graph.has_edge(*e):
            raise MissingEdge(f"edge {e} not present")
        return self.colors.chi.get(e)

    @property
    def chi(self) -> dict[EdgeKey, int]:
        return self.colors.chi

    # -- updates ---------------------------------------------------------

    def _update_decomp(self, op: str, u: int, v: int) -> ChangeLog:
        if self.system is not None:
            return self.system.update(op, u, v)
        layer = self.decomp
        if op == "I":
            return layer.on_insert(u, v)
        return layer.on_delete(u, v)

    def collect_bad_edges(self, w: int) -> list[EdgeKey]:
        """Edges into ``w`` that broke the good-coloring rule when deg(w) dropped.

        Call right after a deletion at ``w`` and before the decompositions
        settle. Good coloring before the deletion leaves one candidate color
        per layer: deg(w) + 1 + floor(slack_j).
        """
        if self.system is None:
            return []
        deg = self.graph.degree(w)
        at_w = self.colors.colors_at[w]
        bad = []
        for j, slack in enumerate(self._slack, start=1):
            f = at_w.get_payload(deg + 1 + slack)
            if f is None:
                continue
            if self.system.edge_layer(*f) != j:
                continue
            if self.layers[j - 1].head(*f) != w:
                continue
            bad.append(f)
        return bad

    def insert(self, u: int, v: int) -> MetricsRow:
        t0 = time.perf_counter_ns()
        e = self.graph.insert_edge(u, v)
        log = self._update_decomp("I", u, v)
        pending: dict[EdgeKey, None] = {}
        if self.system is not None:
            for f in log.edges():
                if f in self.colors.chi:
                    self.colors.clear(f)
                pending[f] = None
        pending[e] = None
        size = len(pending)
        recolored = self._extend(pending)
        return self._row("I", recolored, size, log, t0)

    def delete(self, u: int, v: int) -> MetricsRow:
        t0 = time.perf_counter_ns()
        e = edge_key(u, v)
        if not self.graph.has_edge(*e):
            raise MissingEdge(f"edge {e} not present")
        if e in self.colors.chi:
            self.colors.clear(e)
        self.graph.delete_edge(u, v)
        pending: dict[EdgeKey, None] = {}
        if self.system is not None:
            for w in e:
                for f in self.collect_bad_edges(w):
                    pending[f] = None
        log = self._update_decomp("D", u, v)
        recolored = 0
        size = 0
        if self.system is not None:
            for f in log.edges():
                pending[f] = None
            for f in pending:
                if f in self.colors.chi:
                    self.colors.clear(f)
            size = len(pending)
            recolored = self._extend(pending) if pending else 0
        return self._row("D", recolored, size, log, t0)

    def apply(self, op: str, u: int, v: int) -> MetricsRow:
        if op == "I":
            return self.insert(u, v)
        if op == "D":
            return self.delete(u, v)
        raise InvalidInput(f"unknown op {op!r}")

    def _row(self, op, recolored, size, log, t0) -> MetricsRow:
        self.steps += 1
        self.total_recolored += recolored
        self.total_uncolored += size
        mc = self.colors.max_color
        if mc > self.peak_color:
            self.peak_color = mc
        delta = self.graph.max_degree()
        if delta > self.max_degree_seen:
            self.max_degree_seen = delta
        return MetricsRow(
            step=self.steps,
            op=op,
            recolored=recolored,
            uncolored=size,
            levels_changed=len(log.level_changed_edges()),
            max_color=mc,
            delta_t=delta,
            alpha_cert=None,
            wall_nanos=time.perf_counter_ns() - t0,
        )

    def _extend(self, pending: dict[EdgeKey, None]) -> int:
        """Color every edge in ``pending`` (all uncolored), LIFO.

        Each edge gets a color missing from its tail's up-colors and its head's
        colors; a clash at the tail uncolors that edge, which joins the queue.
        Returns the number of color assignments.
        """
        if self.mode == "full":
            cap = self.L * self.L * len(pending) + len(pending)
        else:
            cap = self.L
        colors = self.colors
        colors_at = colors.colors_at
        trace = CascadeTrace()
        self.last_cascade = trace
        check = self.config.check_potential
        count = 0
        while pending:
            f, _ = pending.popitem()
            j = self.edge_layer(*f)
            layer = self.layers[j - 1]
            u, v = layer.reorient(*f)
            c = new_element(colors.up_colors(u, j), colors_at[v])
            clash = colors_at[u].get_payload(c)
            if clash is not None:
                if check:
                    self._check_descent(f, clash, trace)
                colors.clear(clash)
                pending[clash] = None
            colors.assign(f, c)
            count += 1
            if count > cap:
                raise InternalError(f"cascade exceeded {cap} recolorings")
        return count

    def _check_descent(self, f: EdgeKey, clash: EdgeKey, trace: CascadeTrace) -> None:
        if self.system is not None:
            before, after = self.potential(*f), self.potential(*clash)
        else:
            before, after = self.decomp.edge_level(*f), self.decomp.edge_level(*clash)
        trace.steps.append((f, before, clash, after))
        if after >= before:
            raise InternalError(f"cascade potential did not drop: {f}:{before} -> {clash}:{after}")

    # -- fault injection -------------------------------------------------

    def set_color(self, u: int, v: int, c: int, mirror: bool = True) -> None:
        """Overwrite a color without any checks (tests and fault injection).

        With ``mirror=False`` only the color map changes, leaving the per-node
        sets stale; this is how improper states are staged.
        """
        e = edge_key(u, v)
        if not mirror:
            self.colors.chi[e] = c
            return
        if e in self.colors.chi:
            self.colors.clear(e)
        self.colors.assign(e, c)


def engine_init(config: EngineConfig) -> Engine:
    return Engine(config)


def structural_extend(
    graph: DynGraph,
    chi: ColorState,
    e: EdgeKey,
    epsilon: Number,
    alpha: Optional[int] = None,
) -> int:
    """Color the single uncolored edge ``e`` by a short recoloring cascade.

    ``chi`` must color every other edge of ``graph`` properly within
    Delta + 2(1+eps)·alpha colors. A static (1, 2(1+eps)·alpha, L) peeling
    steers the cascade, so at most L colors change. ``chi`` is updated in
    place; returns the number of edges (re)colored.
    """
    from .oracles import exact_arboricity, is_proper_coloring

    eps = as_fraction(epsilon)
    e = edge_key(*e)
    if not graph.has_edge(*e):
        raise InvalidInput(f"edge {e} not in graph")
    if e in chi.chi:
        raise InvalidInput(f"edge {e} is already colored")
    if alpha is None:
        alpha = exact_arboricity(graph)
    alpha = max(alpha, 1)
    d = 2 * (1 + eps) * alpha
    palette = graph.max_degree() + d
    others = [f for f in graph.edges() if f != e]
    if any(f not in chi.chi for f in others) or len(chi.chi) != len(others):
        raise InvalidInput("coloring must cover exactly the edges other than e")
    if any(c > palette for c in chi.chi.values()):
        raise InvalidInput(f"coloring uses colors above Delta + 2(1+eps)alpha = {float(palette):.3f}")
    if is_proper_coloring(graph, chi.chi, allow_partial=True):
        raise InvalidInput("coloring is not proper")

    L = level_count(graph.n, eps)
    dec = static_peel(graph, d, L)
    for x in range(graph.n):
        chi.up[x].clear()
    chi._layers.clear()
    chi.attach(dec)
    pending = {e: None}
    count = 0
    while pending:
        f, _ = pending.popitem()
        u, v = dec.reorient(*f)
        c = new_element(chi.up_colors(u, dec.index), chi.colors_at[v])
        clash = chi.colors_at[u].get_payload(c)
        if clash is not None:
            if dec.edge_level(*clash) >= dec.edge_level(*f):
                raise InternalError("cascade level did not drop")
            chi.clear(clash)
            pending[clash] = None
        chi.assign(f, c)
        count += 1
        if count > L:
            raise InternalError(f"cascade exceeded {L} recolorings")
    return count


def coloring_state(n: int, colors: dict[EdgeKey, int]) -> ColorState:
    """Build a ``ColorState`` holding ``colors`` (no layers attached)."""
    state = ColorState(n)
    for e, c in colors.items():
        state.assign(edge_key(*e), c)
    return state
