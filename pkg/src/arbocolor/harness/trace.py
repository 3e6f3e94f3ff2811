"""Update traces: the text format and the seeded generators."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from ..decomposition import as_fraction
from ..errors import InvalidArgument, TraceParseError
from ..graph import EdgeKey, edge_key

MODES = ("warmup", "full")
KINDS = ("forest-union", "star-heavy", "erdos-renyi", "sliding-window", "clique-then-drain")


@dataclass(frozen=True)
class TraceEvent:
    op: str
    u: int
    v: int

    def line(self) -> str:
        return f"{self.op} {self.u} {self.v}"


@dataclass
class Trace:
    n: int
    epsilon: Fraction = Fraction(1, 2)
    mode: str = "full"
    alpha: Optional[int] = None
    cert: Optional[int] = None
    events: list[TraceEvent] = field(default_factory=list)

    def __post_init__(self):
        self.epsilon = as_fraction(self.epsilon)

    def header(self) -> str:
        parts = [f"n={self.n}", f"eps={decimal_text(self.epsilon)}", f"mode={self.mode}"]
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha}")
        if self.cert is not None:
            parts.append(f"cert={self.cert}")
        return " ".join(parts)

    def to_text(self) -> str:
        return "\n".join([self.header(), *(ev.line() for ev in self.events)]) + "\n"

    def __len__(self) -> int:
        return len(self.events)


def decimal_text(x: Fraction) -> str:
    """Exact decimal rendering of a terminating fraction."""
    x = Fraction(x)
    den, twos, fives = x.denominator, 0, 0
    while den % 2 == 0:
        den, twos = den // 2, twos + 1
    while den % 5 == 0:
        den, fives = den // 5, fives + 1
    if den != 1:
        raise InvalidArgument(f"{x} has no finite decimal form")
    digits = max(twos, fives)
    scaled = x * 10**digits
    text = str(abs(scaled.numerator))
    sign = "-" if x < 0 else ""
    if digits == 0:
        return sign + text
    text = text.rjust(digits + 1, "0")
    head, tail = text[:-digits], text[-digits:].rstrip("0")
    return sign + head + ("." + tail if tail else "")


def validate(trace: Trace) -> None:
    """Raise ``TraceParseError`` unless the trace replays cleanly."""
    if not isinstance(trace.n, int) or trace.n < 1:
        raise TraceParseError(f"n must be >= 1, got {trace.n!r}")
    if not 0 < trace.epsilon < 1:
        raise TraceParseError(f"eps must lie in (0, 1), got {trace.epsilon}")
    if trace.mode not in MODES:
        raise TraceParseError(f"mode must be one of {MODES}, got {trace.mode!r}")
    if trace.mode == "warmup" and (trace.alpha is None or trace.alpha < 1):
        raise TraceParseError("warmup traces need alpha >= 1")
    if trace.alpha is not None and trace.alpha < 1:
        raise TraceParseError("alpha must be >= 1")
    if trace.cert is not None and trace.cert < 0:
        raise TraceParseError("cert must be >= 0")
    live: set[EdgeKey] = set()
    for i, ev in enumerate(trace.events, start=1):
        if ev.op not in ("I", "D"):
            raise TraceParseError(f"event {i}: unknown op {ev.op!r}")
        if not (0 <= ev.u < trace.n and 0 <= ev.v < trace.n):
            raise TraceParseError(f"event {i}: vertex out of range in {ev.line()}")
        if ev.u == ev.v:
            raise TraceParseError(f"event {i}: self-loop {ev.line()}")
        e = edge_key(ev.u, ev.v)
        if ev.op == "I":
            if e in live:
                raise TraceParseError(f"event {i}: insert of present edge {e}")
            live.add(e)
        else:
            if e not in live:
                raise TraceParseError(f"event {i}: delete of absent edge {e}")
            live.remove(e)


def _int_field(key: str, value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise TraceParseError(f"line {lineno}: {key} must be an integer, got {value!r}") from None


def parse_trace(text: str) -> Trace:
    header: Optional[dict[str, str]] = None
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = {}
            for tok in line.split():
                key, sep, value = tok.partition("=")
                if not sep or key in header:
                    raise TraceParseError(f"line {lineno}: bad header token {tok!r}")
                header[key] = value
            unknown = set(header) - {"n", "eps", "mode", "alpha", "cert"}
            if unknown or not {"n", "eps", "mode"} <= set(header):
                raise TraceParseError(f"line {lineno}: header needs n, eps, mode (got {sorted(header)})")
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("I", "D"):
            raise TraceParseError(f"line {lineno}: expected 'I u v' or 'D u v', got {line!r}")
        events.append(TraceEvent(parts[0], _int_field("u", parts[1], lineno), _int_field("v", parts[2], lineno)))
    if header is None:
        raise TraceParseError("missing header line")
    try:
        eps = Fraction(header["eps"])
    except ValueError:
        raise TraceParseError(f"eps must be a decimal, got {header['eps']!r}") from None
    trace = Trace(
        n=_int_field("n", header["n"], 1),
        epsilon=eps,
        mode=header["mode"],
        alpha=_int_field("alpha", header["alpha"], 1) if "alpha" in header else None,
        cert=_int_field("cert", header["cert"], 1) if "cert" in header else None,
        events=events,
    )
    validate(trace)
    return trace


def load_trace(path) -> Trace:
    with open(path, encoding="utf-8") as fh:
        return parse_trace(fh.read())


def save_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trace.to_text())


# -- generators ---------------------------------------------------------------


class _Forest:
    """Edge set kept acyclic; union-find rebuilt lazily after deletions."""

    def __init__(self, n: int):
        self.n = n
        self.edges: set[EdgeKey] = set()
        self._parent = list(range(n))
        self._dirty = False

    def _find(self, x: int) -> int:
        p = self._parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def _rebuild(self) -> None:
        self._parent = list(range(self.n))
        for a, b in self.edges:
            self._parent[self._find(a)] = self._find(b)
        self._dirty = False

    def joinable(self, u: int, v: int) -> bool:
        if self._dirty:
            self._rebuild()
        return self._find(u) != self._find(v)

    def add(self, e: EdgeKey) -> None:
        if self._dirty:
            self._rebuild()
        self.edges.add(e)
        self._parent[self._find(e[0])] = self._find(e[1])

    def remove(self, e: EdgeKey) -> None:
        self.edges.remove(e)
        self._dirty = True


class _Live:
    """Live edge set: insertion order for ``oldest``, swap-remove array for O(1) sampling."""

    def __init__(self):
        self.order: dict[EdgeKey, None] = {}
        self._arr: list[EdgeKey] = []
        self._pos: dict[EdgeKey, int] = {}

    def __contains__(self, e) -> bool:
        return e in self.order

    def __len__(self) -> int:
        return len(self.order)

    def add(self, e: EdgeKey) -> None:
        self.order[e] = None
        self._pos[e] = len(self._arr)
        self._arr.append(e)

    def remove(self, e: EdgeKey) -> None:
        del self.order[e]
        i = self._pos.pop(e)
        last = self._arr.pop()
        if last != e:
            self._arr[i] = last
            self._pos[last] = i

    def sample(self, rng: random.Random) -> EdgeKey:
        return self._arr[rng.randrange(len(self._arr))]

    def oldest(self) -> EdgeKey:
        return next(iter(self.order))


def degeneracy(n: int, edges: Iterable[EdgeKey]) -> int:
    """Max over the min-degree peeling of the degree at removal (>= arboricity)."""
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    deg = [len(s) for s in adj]
    buckets: dict[int, set[int]] = {}
    for u in range(n):
        buckets.setdefault(deg[u], set()).add(u)
    removed = [False] * n
    best = 0
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets.get(d):
            d += 1
        u = buckets[d].pop()
        removed[u] = True
        best = max(best, d)
        for v in adj[u]:
            if not removed[v]:
                buckets[deg[v]].discard(v)
                deg[v] -= 1
                buckets.setdefault(deg[v], set()).add(v)
    return best


def _random_absent_pair(rng, n, live, accept=None, tries=64, scan_limit=128):
    """Rejection-sample an absent pair; small graphs fall back to a full scan."""
    for _ in range(tries):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = edge_key(u, v)
        if e not in live and (accept is None or accept(e)):
            return e
    if n > scan_limit:
        return None
    pool = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if (u, v) not in live and (accept is None or accept((u, v)))
    ]
    return rng.choice(pool) if pool else None


def _check_knobs(kind, n, T, knobs):
    if kind not in KINDS:
        raise InvalidArgument(f"unknown trace kind {kind!r}; choose from {KINDS}")
    if not isinstance(n, int) or n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n!r}")
    if not isinstance(T, int) or T < 0:
        raise InvalidArgument(f"T must be >= 0, got {T!r}")
    allowed = {
        "forest-union": {"k", "p_delete"},
        "star-heavy": {"p_delete", "p_star"},
        "erdos-renyi": {"p"},
        "sliding-window": {"w"},
        "clique-then-drain": {"clique"},
    }[kind]
    extra = set(knobs) - allowed
    if extra:
        raise InvalidArgument(f"{kind} does not take knobs {sorted(extra)}")
    for key in ("p_delete", "p_star", "p"):
        if key in knobs and not 0 <= knobs[key] <= 1:
            raise InvalidArgument(f"{key} must lie in [0, 1], got {knobs[key]}")
    if "k" in knobs and (not isinstance(knobs["k"], int) or knobs["k"] < 1):
        raise InvalidArgument(f"k must be >= 1, got {knobs['k']}")
    if "w" in knobs and (not isinstance(knobs["w"], int) or knobs["w"] < 1):
        raise InvalidArgument(f"w must be >= 1, got {knobs['w']}")
    if "clique" in knobs and not 2 <= knobs["clique"] <= n:
        raise InvalidArgument(f"clique size must lie in [2, n], got {knobs['clique']}")


def gen_trace(
    kind: str,
    n: int,
    T: int,
    seed: int = 0,
    epsilon=Fraction(1, 2),
    mode: str = "full",
    alpha: Optional[int] = None,
    **knobs,
) -> Trace:
    """A deterministic trace of ``T`` events on ``n`` nodes with an arboricity certificate.

    Knobs by kind: forest-union ``k`` (forests, default 2) and ``p_delete``;
    star-heavy ``p_star`` and ``p_delete``; erdos-renyi ``p`` (target edge
    density, default 6/(n-1) for average degree near 6); sliding-window ``w`` (live edges kept, default 2n);
    clique-then-drain ``clique`` (size, default min(n, 8)).
    """
    _check_knobs(kind, n, T, knobs)
    rng = random.Random(f"{kind}:{n}:{T}:{seed}:{sorted(knobs.items())}")
    gen = {
        "forest-union": _gen_forest_union,
        "star-heavy": _gen_star_heavy,
        "erdos-renyi": _gen_erdos_renyi,
        "sliding-window": _gen_sliding_window,
        "clique-then-drain": _gen_clique_drain,
    }[kind]
    events, cert = gen(rng, n, T, **knobs)
    if mode == "warmup" and alpha is None:
        alpha = max(cert, 1)
    trace = Trace(n=n, epsilon=epsilon, mode=mode, alpha=alpha, cert=cert, events=events)
    validate(trace)
    return trace


def _stuck(kind):
    return InvalidArgument(f"{kind}: no legal event available for these knobs")


def _gen_forest_union(rng, n, T, k=2, p_delete=0.25):
    forests = [_Forest(n) for _ in range(k)]
    owner: dict[EdgeKey, int] = {}
    live = _Live()
    events = []
    while len(events) < T:
        e = None
        if not (live and rng.random() < p_delete):
            f = rng.randrange(k)
            e = _random_absent_pair(rng, n, live, lambda x: forests[f].joinable(*x))
            if e is not None:
                forests[f].add(e)
                owner[e] = f
                live.add(e)
                events.append(TraceEvent("I", *e))
                continue
        if not live:
            raise _stuck("forest-union")
        e = live.sample(rng)
        forests[owner.pop(e)].remove(e)
        live.remove(e)
        events.append(TraceEvent("D", *e))
    return events, k


def _gen_star_heavy(rng, n, T, p_star=0.5, p_delete=0.25):
    forest = _Forest(n)
    live = _Live()
    events = []
    while len(events) < T:
        if not (live and rng.random() < p_delete):
            e = None
            if rng.random() < p_star:
                missing = [v for v in range(1, n) if (0, v) not in live]
                if missing:
                    e = (0, rng.choice(missing))
            if e is None:
                e = _random_absent_pair(rng, n, live, lambda x: x[0] != 0 and forest.joinable(*x))
                if e is not None:
                    forest.add(e)
            if e is not None:
                live.add(e)
                events.append(TraceEvent("I", *e))
                continue
        if not live:
            raise _stuck("star-heavy")
        e = live.sample(rng)
        if e[0] != 0:
            forest.remove(e)
        live.remove(e)
        events.append(TraceEvent("D", *e))
    return events, (2 if n > 2 else 1)


class _BlockCert:
    """Arboricity upper bound over time: degeneracy of the union of all edges
    live during each block of steps (every snapshot is a subgraph of it)."""

    def __init__(self, n: int, block: int):
        self.n = n
        self.block = max(block, 1)
        self.union: set[EdgeKey] = set()
        self.best = 0
        self.steps = 0

    def step(self, live, inserted: Optional[EdgeKey]) -> None:
        if inserted is not None:
            self.union.add(inserted)
        self.steps += 1
        if self.steps % self.block == 0:
            self.close(live)

    def close(self, live) -> int:
        if self.union:
            self.best = max(self.best, degeneracy(self.n, self.union))
        self.union = set(live)
        return self.best


def _gen_erdos_renyi(rng, n, T, p=None):
    p = min(1.0, 6 / max(n - 1, 1)) if p is None else p
    live = _Live()
    cert = _BlockCert(n, n)
    events = []
    if n < 2 and T:
        raise _stuck("erdos-renyi")
    if p == 0 and T:
        raise _stuck("erdos-renyi")
    while len(events) < T:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = edge_key(u, v)
        if e in live:
            if rng.random() < 1 - p:
                live.remove(e)
                events.append(TraceEvent("D", *e))
                cert.step(live.order, None)
        elif rng.random() < p:
            live.add(e)
            events.append(TraceEvent("I", *e))
            cert.step(live.order, e)
    return events, cert.close(live.order)


def _gen_sliding_window(rng, n, T, w=None):
    w = 2 * n if w is None else w
    live = _Live()
    cert = _BlockCert(n, n)
    events = []
    while len(events) < T:
        e = None
        if len(live) < w:
            e = _random_absent_pair(rng, n, live)
        if e is not None:
            live.add(e)
            events.append(TraceEvent("I", *e))
            cert.step(live.order, e)
            continue
        if not live:
            raise _stuck("sliding-window")
        e = live.oldest()
        live.remove(e)
        events.append(TraceEvent("D", *e))
        cert.step(live.order, None)
    return events, cert.close(live.order)


def _gen_clique_drain(rng, n, T, clique=None):
    k = min(n, 8) if clique is None else clique
    if k < 2:
        if T:
            raise _stuck("clique-then-drain")
        return [], 0
    events = []
    while len(events) < T:
        nodes = sorted(rng.sample(range(n), k))
        pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]
        rng.shuffle(pairs)
        for e in pairs:
            events.append(TraceEvent("I", *e))
        rng.shuffle(pairs)
        for e in pairs:
            events.append(TraceEvent("D", *e))
    return events[:T], (k + 1) // 2
