"""A stack of decompositions, one per geometric guess of the arboricity."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .decomposition import (
    ChangeLog,
    DecompParams,
    LayerDecomposition,
    LevelChange,
    MoveListener,
    Number,
    as_fraction,
    level_count,
)
from .errors import InvalidArgument
from .graph import DynGraph, EdgeKey, edge_key


class DecompositionSystem:
    """K = L decompositions of one graph; layer ``j`` uses d_j = 2(1+eps)^j.

    Layers are indexed from 1 to match the arboricity guesses
    ``alpha_tilde(j) = (1+eps)^(j-1)``.
    """

    def __init__(self, graph: DynGraph, epsilon: Number, listener: Optional[MoveListener] = None):
        self.graph = graph
        self.epsilon = as_fraction(epsilon)
        self.L = level_count(graph.n, self.epsilon)
        self.K = self.L
        self.beta = 2 + 3 * self.epsilon
        self.layers: list[LayerDecomposition] = []
        for j in range(1, self.K + 1):
            params = DecompParams(beta=self.beta, d=self.d(j), L=self.L, epsilon=self.epsilon)
            self.layers.append(LayerDecomposition(graph, params, index=j, listener=listener))

    def alpha_tilde(self, j: int) -> Fraction:
        if not 1 <= j <= self.K:
            raise InvalidArgument(f"layer {j} outside [1, {self.K}]")
        return (1 + self.epsilon) ** (j - 1)

    def d(self, j: int) -> Fraction:
        return 2 * (1 + self.epsilon) * self.alpha_tilde(j)

    def layer(self, j: int) -> LayerDecomposition:
        return self.layers[j - 1]

    def node_layer(self, u: int) -> int:
        """Smallest j whose decomposition keeps u below the top level."""
        top = self.L
        for layer in self.layers:
            if layer.level[u] < top:
                return layer.index
        # unreachable while the last guess exceeds n
        return self.K

    def edge_layer(self, u: int, v: int) -> int:
        top = self.L
        for layer in self.layers:
            lev = layer.level
            if lev[u] < top or lev[v] < top:
                return layer.index
        return self.K

    def update(self, op: str, u: int, v: int, per_layer: Optional[list] = None) -> ChangeLog:
        """Settle every layer after the graph gained (``"I"``) or lost (``"D"``) {u, v}.

        Returns the merged log: the inserted edge first, then every edge whose
        level changed in some layer, in ascending layer order. When
        ``per_layer`` is a list, each layer's own log is appended to it.
        """
        records: list[LevelChange] = []
        if op == "I":
            e = edge_key(u, v)
            records.append(LevelChange(e, None, self.layers[0].edge_level(u, v), 1))
            for layer in self.layers:
                if layer.quick_insert(u, v):
                    if per_layer is not None:
                        per_layer.append(ChangeLog([LevelChange(e, None, 1, layer.index)]))
                    continue
                log = layer.on_insert(u, v)
                if per_layer is not None:
                    per_layer.append(log)
                records.extend(r for r in log.records if not r.is_new)
        elif op == "D":
            for layer in self.layers:
                if layer.quick_delete(u, v):
                    if per_layer is not None:
                        per_layer.append(ChangeLog())
                    continue
                log = layer.on_delete(u, v)
                if per_layer is not None:
                    per_layer.append(log)
                records.extend(log.records)
        else:
            raise InvalidArgument(f"unknown update op {op!r}")
        return ChangeLog(records)


def system_init(graph: DynGraph, epsilon: Number, **kwargs) -> DecompositionSystem:
    return DecompositionSystem(graph, epsilon, **kwargs)
