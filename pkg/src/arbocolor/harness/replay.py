"""Replay traces through the engine with periodic verification; static runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Collection, Optional

from ..decomposition import as_fraction
from ..engine import Engine, EngineConfig
from ..errors import InvalidArgument, InvalidInput, TraceParseError
from ..graph import DynGraph, EdgeKey, edge_key
from ..greedy import clever_greedy
from ..metrics import MetricsRow
from ..oracles import (
    MAX_ORACLE_N,
    Violation,
    check_palette,
    exact_arboricity,
    full_palette_bound,
    is_proper_coloring,
    verify_color_state,
    verify_decomposition,
    verify_good_coloring,
    verify_top_level_empty,
    warmup_palette_bound,
)
from .trace import Trace

EXACT_ALPHA_MAX_N = 14
CHECKS = ("proper", "decomp", "good", "palette")

Injector = Callable[[Engine, int], None]


@dataclass
class ReplayResult:
    rows: list[MetricsRow] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    failed_step: Optional[int] = None
    engine: Optional[Engine] = None
    verified_steps: int = 0

    @property
    def status(self) -> int:
        return 1 if self.violations else 0

    @property
    def ok(self) -> bool:
        return not self.violations


def default_verify_every(n: int) -> int:
    return 1 if n <= 64 else 32


def check_engine(
    eng: Engine,
    alpha_hat: Optional[int],
    delta_peak: int,
    exact: bool = False,
    deep: bool = False,
    checks: Collection[str] = CHECKS,
) -> list[Violation]:
    """Run the selected oracles (all by default) against the engine state."""
    out = []
    if "proper" in checks:
        out += is_proper_coloring(eng.graph, eng.chi)
    if "decomp" in checks:
        for layer in eng.layers:
            out += verify_decomposition(eng.graph, layer, deep=deep)
        if exact and alpha_hat is not None and eng.mode == "full":
            out += verify_top_level_empty(eng, alpha_hat)
    if "good" in checks and eng.mode == "full":
        out += verify_good_coloring(eng)
    if "palette" in checks:
        if eng.mode == "full":
            if alpha_hat is not None:
                delta = eng.graph.max_degree()
                bound = full_palette_bound(delta, alpha_hat, eng.epsilon)
                out += check_palette(eng.max_color_used(), bound, delta=delta)
        else:
            bound = warmup_palette_bound(delta_peak, eng.config.alpha_bound, eng.epsilon)
            out += check_palette(eng.max_color_used(), bound, delta_max=delta_peak)
    if deep:
        out += verify_color_state(eng)
    return out


def replay(
    trace: Trace,
    verify_every: Optional[int] = None,
    mode: Optional[str] = None,
    epsilon=None,
    alpha: Optional[int] = None,
    exact_alpha: bool = False,
    deep: bool = False,
    inject: Optional[Injector] = None,
    check_potential: bool = True,
    checks: Collection[str] = CHECKS,
) -> ReplayResult:
    """Run the trace; verify every ``verify_every`` steps and after the last one.

    Stops at the first step with violations. ``inject(engine, step)`` runs
    after each update and before its checks (fault injection). ``checks``
    selects among ``CHECKS``.
    """
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise InvalidInput(f"unknown checks {sorted(unknown)}; choose from {CHECKS}")
    mode = mode or trace.mode
    eps = as_fraction(epsilon) if epsilon is not None else trace.epsilon
    alpha_bound = alpha if alpha is not None else trace.alpha
    if mode == "warmup" and alpha_bound is None:
        alpha_bound = trace.cert
    k = verify_every if verify_every is not None else default_verify_every(trace.n)
    if k < 1:
        raise InvalidInput(f"verify_every must be >= 1, got {k}")
    use_oracle = exact_alpha and trace.n <= EXACT_ALPHA_MAX_N
    eng = Engine(EngineConfig(trace.n, mode=mode, epsilon=eps, alpha_bound=alpha_bound, check_potential=check_potential))
    result = ReplayResult(engine=eng)
    delta_peak = 0
    total = len(trace.events)
    for step, ev in enumerate(trace.events, start=1):
        row = eng.apply(ev.op, ev.u, ev.v)
        delta_peak = max(delta_peak, row.delta_t)
        if inject is not None:
            inject(eng, step)
        verify = step % k == 0 or step == total
        alpha_hat = exact_arboricity(eng.graph) if use_oracle and verify else trace.cert
        result.rows.append(_with_alpha(row, alpha_hat))
        if verify:
            result.verified_steps += 1
            found = check_engine(eng, alpha_hat, delta_peak, exact=use_oracle, deep=deep, checks=checks)
            if found:
                result.violations = found
                result.failed_step = step
                break
    return result


def _with_alpha(row: MetricsRow, alpha_hat: Optional[int]) -> MetricsRow:
    if alpha_hat is None:
        return row
    return MetricsRow(**{**row.__dict__, "alpha_cert": alpha_hat})


# -- static graphs and colorings ------------------------------------------------


def parse_graph(text: str) -> DynGraph:
    """``n=<int>`` then one ``u v`` edge per line; ``#`` comments allowed."""
    g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if g is None:
            key, sep, value = line.partition("=")
            if key.strip() != "n" or not sep:
                raise TraceParseError(f"line {lineno}: expected 'n=<int>' header")
            try:
                g = DynGraph(int(value))
            except InvalidArgument as exc:
                raise TraceParseError(f"line {lineno}: {exc}") from None
            except ValueError:
                raise TraceParseError(f"line {lineno}: bad node count {value!r}") from None
            continue
        parts = line.split()
        try:
            u, v = (int(p) for p in parts)
            g.insert_edge(u, v)
        except (ValueError, KeyError) as exc:
            raise TraceParseError(f"line {lineno}: bad edge {line!r} ({exc})") from None
    if g is None:
        raise TraceParseError("missing 'n=<int>' header")
    return g


def format_graph(g: DynGraph) -> str:
    return "\n".join([f"n={g.n}", *(f"{a} {b}" for a, b in sorted(g.edges()))]) + "\n"


def parse_coloring(text: str) -> dict[EdgeKey, int]:
    """One ``u v c`` line per colored edge."""
    chi: dict[EdgeKey, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            u, v, c = (int(p) for p in line.split())
            e = edge_key(u, v)
        except ValueError as exc:
            raise TraceParseError(f"line {lineno}: bad coloring line {line!r} ({exc})") from None
        if e in chi:
            raise TraceParseError(f"line {lineno}: edge {e} colored twice")
        chi[e] = c
    return chi


def format_coloring(chi: dict[EdgeKey, int]) -> str:
    return "".join(f"{a} {b} {c}\n" for (a, b), c in sorted(chi.items()))


@dataclass(frozen=True)
class StaticReport:
    n: int
    m: int
    max_color: int
    delta: int
    alpha: Optional[int]
    bound: Optional[int]
    proper: bool

    @property
    def ok(self) -> bool:
        within = self.bound is None or self.m == 0 or self.max_color <= self.bound
        return self.proper and within

    def lines(self) -> list[str]:
        return [
            f"max_color={self.max_color}",
            f"delta={self.delta}",
            f"alpha={'n/a' if self.alpha is None else self.alpha}",
            f"bound={'n/a' if self.bound is None else self.bound}",
            f"proper={'pass' if self.proper else 'fail'}",
            f"result={'pass' if self.ok else 'fail'}",
        ]


def static_report(g: DynGraph, chi: dict[EdgeKey, int]) -> StaticReport:
    alpha = exact_arboricity(g) if g.n <= MAX_ORACLE_N else None
    delta = g.max_degree()
    return StaticReport(
        n=g.n,
        m=sum(1 for _ in g.edges()),
        max_color=max(chi.values(), default=0),
        delta=delta,
        alpha=alpha,
        bound=None if alpha is None else delta + 2 * alpha - 1,
        proper=not is_proper_coloring(g, chi),
    )


def run_static(graph_path, out_path=None) -> StaticReport:
    """Color the graph file's graph greedily; optionally write the coloring."""
    with open(graph_path, encoding="utf-8") as fh:
        g = parse_graph(fh.read())
    chi = clever_greedy(g)
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_coloring(chi))
    return static_report(g, chi)
