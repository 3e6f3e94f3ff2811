"""Acceptance suite: one test per criterion, reported as PASS/FAIL lines.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary ends with an
"acceptance criteria" section listing every criterion.
"""

import random
import time
from fractions import Fraction

import pytest

from arbocolor import (
    ColorSet,
    DynGraph,
    Engine,
    EngineConfig,
    clever_greedy,
    coloring_state,
    level_count,
    new_element,
    peel_order,
    structural_extend,
    summarize,
)
from arbocolor.harness.replay import replay
from arbocolor.harness.trace import KINDS, gen_trace
from arbocolor.oracles import exact_arboricity, is_proper_coloring

from graphs import complete, hub_tree_trace, path, petersen, random_graph, star

HUB_SHAPES = ((12, 2), (12, 3), (24, 2))

EPSILONS = (Fraction(1, 10), Fraction(1, 2))


def _fail_msg(res, label):
    return f"{label}: step {res.failed_step}: " + "; ".join(str(v) for v in res.violations[:3])


@pytest.mark.criterion(1, "properness and totality over all trace families")
def test_criterion_1_properness_totality(note):
    start = time.perf_counter()
    runs = steps = 0
    for kind in KINDS:
        for n in (8, 16, 64, 256):
            for seed in range(5):
                for eps in EPSILONS:
                    res = replay(gen_trace(kind, n, 20 * n, seed=seed, epsilon=eps), checks=("proper",))
                    assert res.ok, _fail_msg(res, f"{kind} n={n} seed={seed} eps={eps}")
                    runs += 1
                    steps += res.verified_steps
    elapsed = time.perf_counter() - start
    note(f"{runs} replays, {steps} verified steps, {elapsed:.1f}s")
    assert elapsed < 120


@pytest.mark.criterion(2, "adaptive palette bound Delta_t + 2 beta (1+eps)^2 alpha_t")
def test_criterion_2_adaptive_palette(note):
    runs = 0
    for kind in KINDS:
        for n in (8, 14, 64, 256):
            for seed in range(2):
                for eps in EPSILONS:
                    t = gen_trace(kind, n, 20 * n, seed=seed, epsilon=eps)
                    res = replay(t, checks=("palette",), exact_alpha=True)
                    assert res.ok, _fail_msg(res, f"{kind} n={n} seed={seed} eps={eps}")
                    runs += 1
    note(f"{runs} replays; exact oracle for n <= 14, certificate above")


def _warmup_runs():
    for k in (1, 2, 3):
        for n in (16, 64, 256):
            for seed in range(3):
                for eps in EPSILONS:
                    t = gen_trace("forest-union", n, 10 * n, seed=seed, epsilon=eps, mode="warmup", k=k)
                    assert t.alpha == k
                    yield k, n, eps, replay(t, checks=("proper", "decomp"))
    # forest-union traces rarely push nodes above level 1; hub trees do.
    for branch, depth in HUB_SHAPES:
        for eps in EPSILONS:
            t = hub_tree_trace(branch, depth, rounds=200, seed=branch + depth, epsilon=eps)
            yield 1, t.n, eps, replay(t, checks=("proper", "decomp"))


@pytest.mark.criterion(3, "warmup palette bound Delta_max + 2 beta (1+eps) k")
def test_criterion_3_warmup_palette(note):
    worst = Fraction(0)
    for k, n, eps, res in _warmup_runs():
        assert res.ok, _fail_msg(res, f"k={k} n={n} eps={eps}")
        beta = 2 + 3 * eps
        peak = max(r.max_color for r in res.rows)
        delta_max = max(r.delta_t for r in res.rows)
        bound = delta_max + 2 * beta * (1 + eps) * k
        assert peak <= bound, (k, n, eps, peak, bound)
        worst = max(worst, Fraction(peak) / bound)
    note(f"max color / bound peaks at {float(worst):.3f}")


@pytest.mark.criterion(4, "warmup recourse: inserts <= L, deletes = 0")
def test_criterion_4_warmup_recourse(note):
    peak = 0
    for k, n, eps, res in _warmup_runs():
        L = level_count(n, eps)
        for r in res.rows:
            if r.op == "I":
                assert 1 <= r.recolored <= L, (k, n, eps, r)
                peak = max(peak, r.recolored)
            else:
                assert r.recolored == 0, (k, n, eps, r)
    note(f"largest insertion recourse {peak}")


@pytest.mark.criterion(5, "full-mode cascade <= L^2|S| + |S| with strictly falling potential")
def test_criterion_5_cascade(note):
    conflicts = 0
    worst = 0.0
    traces = [
        (f"{kind} n={n} seed={seed}", gen_trace(kind, n, 20 * n, seed=seed, epsilon=eps))
        for kind in KINDS
        for n in (16, 64)
        for seed in range(2)
        for eps in EPSILONS
    ]
    traces += [
        (f"hub {branch}x{depth}", hub_tree_trace(branch, depth, rounds=200, seed=1, epsilon=eps, mode="full"))
        for branch, depth in HUB_SHAPES
        for eps in EPSILONS
    ]
    for label, t in traces:
        eng = Engine(EngineConfig(t.n, epsilon=t.epsilon, check_potential=True))
        L = eng.L
        for ev in t.events:
            row = eng.apply(ev.op, ev.u, ev.v)  # raises InternalError if potential fails to drop
            assert row.recolored <= L * L * row.uncolored + row.uncolored, (label, t.epsilon, row)
            for _f, before, _g, after in eng.last_cascade.steps:
                assert after < before
                conflicts += 1
            if row.uncolored:
                worst = max(worst, row.recolored / row.uncolored)
    note(f"{conflicts} conflicts checked; max recolored/|S| = {worst:.2f}")


@pytest.mark.criterion(6, "amortized recourse ceiling L^4 (eps = 0.5)")
def test_criterion_6_amortized(note):
    eps = Fraction(1, 2)
    report = []
    for n in (64, 256, 1024):
        L = level_count(n, eps)
        avgs = []
        for kind in ("erdos-renyi", "sliding-window", "forest-union", "clique-then-drain"):
            res = replay(gen_trace(kind, n, 10_000, seed=0, epsilon=eps), checks=("proper",), verify_every=500)
            assert res.ok, _fail_msg(res, f"{kind} n={n}")
            avg = summarize(res.rows).avg_recolored
            avgs.append(avg)
            if n == 256:
                assert avg <= L**4, (kind, avg, L**4)
        report.append(f"n={n}: worst family avg {max(avgs):.3f} (L^4={L**4})")
    note(", ".join(report))


@pytest.mark.criterion(7, "decomposition validity every layer; top level empty at j* for n <= 14")
def test_criterion_7_decomposition(note):
    runs = 0
    for kind in KINDS:
        for n, seeds in ((8, 3), (14, 3), (64, 1)):
            for seed in range(seeds):
                for eps in EPSILONS:
                    t = gen_trace(kind, n, 20 * n, seed=seed, epsilon=eps)
                    res = replay(t, checks=("decomp",), exact_alpha=n <= 14, verify_every=1 if n <= 14 else 8)
                    assert res.ok, _fail_msg(res, f"{kind} n={n} seed={seed} eps={eps}")
                    runs += 1
    note(f"{runs} replays")


@pytest.mark.criterion(8, "static greedy: proper, max color <= Delta + 2 alpha - 1, linear bucket work")
def test_criterion_8_static_greedy(note):
    rng = random.Random(8)
    graphs = [complete(3), complete(4), complete(5), star(5), path(10), petersen()]
    graphs += [random_graph(rng, n_max=12, n_min=1) for _ in range(200)]
    for g in graphs:
        order = peel_order(g)
        chi = clever_greedy(g, order)
        assert is_proper_coloring(g, chi) == []
        if chi:
            assert max(chi.values()) <= g.max_degree() + 2 * exact_arboricity(g) - 1
        assert order.bucket_ops <= 10 * (g.n + g.m)
    note(f"{len(graphs)} graphs")


def _random_valid_coloring(rng, g, palette):
    chi = {}
    used = [set() for _ in range(g.n)]
    edges = list(g.edges())
    rng.shuffle(edges)
    for a, b in edges:
        free = [c for c in range(1, palette + 1) if c not in used[a] and c not in used[b]]
        if not free:
            return clever_greedy(g)
        c = rng.choice(free)
        chi[(a, b)] = c
        used[a].add(c)
        used[b].add(c)
    return chi


@pytest.mark.criterion(9, "structural extension recolors <= L edges within Delta + 2(1+eps) alpha")
def test_criterion_9_structural(note):
    rng = random.Random(9)
    done = 0
    peak = 0
    while done < 100:
        g = random_graph(rng, n_max=12, n_min=2)
        if g.m == 0:
            continue
        eps = EPSILONS[done % 2]
        alpha = exact_arboricity(g)
        palette = g.max_degree() + 2 * (1 + eps) * alpha
        e = rng.choice(sorted(g.edges()))
        h = g.copy()
        h.delete_edge(*e)
        base = _random_valid_coloring(rng, h, int(palette))
        chi = coloring_state(g.n, base)
        count = structural_extend(g, chi, e, eps)
        assert count <= level_count(g.n, eps)
        assert is_proper_coloring(g, chi.chi) == []
        assert max(chi.chi.values()) <= palette
        peak = max(peak, count)
        done += 1
    note(f"{done} instances, max recolored {peak}")


@pytest.mark.criterion(10, "order-statistic set differential (1e5 ops, 1e4 new_element)")
def test_criterion_10_colorset_differential(note):
    start = time.perf_counter()
    rng = random.Random(10)
    sets = [ColorSet() for _ in range(4)]
    refs = [set() for _ in range(4)]
    universe = 300
    for _ in range(100_000):
        i = rng.randrange(4)
        s, ref = sets[i], refs[i]
        x = rng.randint(1, universe)
        op = rng.random()
        if op < 0.3:
            if x not in ref:
                s.insert(x)
                ref.add(x)
        elif op < 0.5:
            if x in ref:
                s.delete(x)
                ref.remove(x)
        elif op < 0.75:
            assert s.contains(x) == (x in ref)
        else:
            y = rng.randint(1, universe)
            lo, hi = min(x, y), max(x, y)
            assert s.count_in_range(lo, hi) == sum(1 for z in ref if lo <= z <= hi)
    for _ in range(10_000):
        a = set(rng.sample(range(1, 80), rng.randint(0, 40)))
        b = set(rng.sample(range(1, 80), rng.randint(0, 40)))
        c = new_element(ColorSet(a), ColorSet(b))
        assert c not in a and c not in b and 1 <= c <= len(a) + len(b) + 1
    elapsed = time.perf_counter() - start
    note(f"{elapsed:.1f}s")
    assert elapsed < 30
