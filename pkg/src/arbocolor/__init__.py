"""Dynamic edge coloring with palettes bounded by max degree plus arboricity."""

from .colorset import ColorSet, new_element
from .decomposition import ChangeLog, DecompParams, LayerDecomposition, LevelChange, decomp_init, level_count, static_peel
from .engine import Engine, EngineConfig, coloring_state, engine_init, structural_extend
from .errors import (
    ArbocolorError,
    DuplicateEdge,
    DuplicateElement,
    InternalError,
    InvalidArgument,
    InvalidConfig,
    InvalidInput,
    MissingEdge,
    MissingElement,
    TraceParseError,
    UnsupportedSize,
)
from .graph import DynGraph, edge_key
from .greedy import PeelOrder, clever_greedy, peel_order, phi
from .metrics import MetricsRow, Summary, summarize
from .system import DecompositionSystem, system_init

__all__ = [
    "ArbocolorError",
    "ChangeLog",
    "ColorSet",
    "DecompParams",
    "DecompositionSystem",
    "DuplicateEdge",
    "DuplicateElement",
    "DynGraph",
    "Engine",
    "EngineConfig",
    "InternalError",
    "InvalidArgument",
    "InvalidConfig",
    "InvalidInput",
    "LayerDecomposition",
    "LevelChange",
    "MetricsRow",
    "MissingEdge",
    "MissingElement",
    "PeelOrder",
    "Summary",
    "TraceParseError",
    "UnsupportedSize",
    "clever_greedy",
    "coloring_state",
    "decomp_init",
    "edge_key",
    "engine_init",
    "level_count",
    "new_element",
    "peel_order",
    "phi",
    "static_peel",
    "structural_extend",
    "summarize",
    "system_init",
]
