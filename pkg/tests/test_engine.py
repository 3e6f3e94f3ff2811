import random
from fractions import Fraction

import pytest

from arbocolor import (
    DynGraph,
    Engine,
    EngineConfig,
    InvalidConfig,
    InvalidInput,
    MissingEdge,
    clever_greedy,
    coloring_state,
    engine_init,
    level_count,
    structural_extend,
)
from arbocolor.oracles import (
    bad_edges_by_scan,
    exact_arboricity,
    is_proper_coloring,
    verify_color_state,
    verify_decomposition,
    verify_good_coloring,
)


def full(n, eps=Fraction(1, 2)):
    return Engine(EngineConfig(n, mode="full", epsilon=eps))


def test_init_full_empty():
    eng = engine_init(EngineConfig(8, mode="full", epsilon=0.5))
    assert eng.max_color_used() == 0 and eng.chi == {}


def test_init_warmup_single_layer_d6():
    eng = Engine(EngineConfig(8, mode="warmup", epsilon=0.5, alpha_bound=2))
    assert len(eng.layers) == 1
    assert eng.layers[0].params.d == 6


def test_warmup_requires_alpha():
    with pytest.raises(InvalidConfig):
        EngineConfig(8, mode="warmup", epsilon=0.5)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=0), dict(n=4, epsilon=0), dict(n=4, epsilon=1), dict(n=4, mode="turbo")],
)
def test_bad_configs(kwargs):
    with pytest.raises(InvalidConfig):
        EngineConfig(**kwargs)


@pytest.mark.parametrize("mode", ["full", "warmup"])
def test_first_edge_color_one(mode):
    eng = Engine(EngineConfig(4, mode=mode, epsilon=0.5, alpha_bound=1))
    row = eng.insert(0, 1)
    assert eng.color_of(0, 1) == 1 and row.recolored == 1
    assert eng.max_color_used() == 1


def test_second_edge_shared_vs_disjoint():
    eng = full(5)
    eng.insert(0, 1)
    eng.insert(1, 2)
    assert eng.color_of(1, 2) == 2
    eng.insert(3, 4)
    assert eng.color_of(3, 4) == 1


def test_warmup_star_bound():
    k = 12
    eng = Engine(EngineConfig(k + 1, mode="warmup", epsilon=0.5, alpha_bound=1))
    for i in range(1, k + 1):
        eng.insert(0, i)
        assert eng.color_of(0, i) <= i
    assert eng.max_color_used() <= k + 10


def test_color_of_missing_edge():
    with pytest.raises(MissingEdge):
        full(3).color_of(0, 1)


def test_delete_only_edge():
    for mode in ("full", "warmup"):
        eng = Engine(EngineConfig(3, mode=mode, epsilon=0.5, alpha_bound=1))
        eng.insert(0, 1)
        row = eng.delete(0, 1)
        assert eng.chi == {} and row.recolored == 0


def test_delete_missing_edge():
    with pytest.raises(MissingEdge):
        full(3).delete(0, 1)


def test_triangle_fixture():
    eng = full(3)
    for e in [(0, 1), (1, 2), (0, 2)]:
        eng.insert(*e)
    assert eng.max_color_used() == 3
    assert is_proper_coloring(eng.graph, eng.chi) == []


def _gamma_setup(color):
    # w = 5 with neighbors 0..4; all levels 1, so f = (0, 5) has tail 0, head 5
    eng = full(6, Fraction(1, 10))
    for u in range(5):
        eng.insert(u, 5)
    eng.set_color(0, 5, color)
    assert verify_good_coloring(eng) == []
    assert eng.head(0, 5) == 5 and eng.edge_layer(0, 5) == 1
    return eng


def test_gamma_threshold_not_bad():
    eng = _gamma_setup(7)
    row = eng.delete(4, 5)  # deg(5) = 4, limit 4 + 2*2.3*1.1 = 9.06
    assert eng.color_of(0, 5) == 7
    assert row.uncolored == 0


def test_gamma_threshold_bad_is_recolored():
    eng = _gamma_setup(10)
    row = eng.delete(4, 5)
    assert eng.color_of(0, 5) != 10
    assert row.uncolored == 1 and row.recolored >= 1
    assert verify_good_coloring(eng) == []
    assert is_proper_coloring(eng.graph, eng.chi) == []


def test_collect_bad_edges_candidate_matches_scan():
    eng = _gamma_setup(10)
    eng.colors.clear((4, 5))
    eng.graph.delete_edge(4, 5)
    assert eng.collect_bad_edges(5) == [(0, 5)] == bad_edges_by_scan(eng, 5)


def test_collect_bad_edges_isolated():
    eng = full(3)
    eng.insert(0, 1)
    eng.colors.clear((0, 1))
    eng.graph.delete_edge(0, 1)
    assert eng.collect_bad_edges(1) == []


def test_potential_formula():
    eng = full(16)
    eng.insert(0, 1)
    assert eng.potential(0, 1) == 1
    assert eng.L == 9
    eng.layers[0].load_levels([9] * 16)
    eng.layers[1].load_levels([3, 3] + [1] * 14)
    assert eng.edge_layer(0, 1) == 2
    assert eng.potential(0, 1) == 12


def test_potential_bounded_by_L_squared():
    rng = random.Random(5)
    eng = full(10, Fraction(1, 10))
    for _ in range(200):
        u, v = rng.sample(range(10), 2)
        if eng.graph.has_edge(u, v):
            eng.delete(u, v)
        else:
            eng.insert(u, v)
        for e in eng.graph.edges():
            assert 1 <= eng.potential(*e) <= eng.L**2


def test_full_dense_churn_invariants():
    rng = random.Random(11)
    eng = full(10, Fraction(1, 10))
    for step in range(400):
        u, v = rng.sample(range(10), 2)
        row = eng.delete(u, v) if eng.graph.has_edge(u, v) else eng.insert(u, v)
        assert row.recolored <= eng.L**2 * row.uncolored + row.uncolored
        assert is_proper_coloring(eng.graph, eng.chi) == []
        assert verify_good_coloring(eng) == []
        assert verify_color_state(eng) == []
        for layer in eng.layers:
            assert verify_decomposition(eng.graph, layer, deep=True) == []


def test_cascade_potential_descends():
    rng = random.Random(2)
    eng = full(9, Fraction(1, 10))
    conflicts = 0
    for _ in range(300):
        u, v = rng.sample(range(9), 2)
        eng.delete(u, v) if eng.graph.has_edge(u, v) else eng.insert(u, v)
        for _f, before, _g, after in eng.last_cascade.steps:
            assert after < before
            conflicts += 1
    assert conflicts > 0


def test_warmup_insert_recourse_within_L():
    rng = random.Random(4)
    n = 12
    eng = Engine(EngineConfig(n, mode="warmup", epsilon=Fraction(1, 2), alpha_bound=3))
    L = level_count(n, Fraction(1, 2))
    for _ in range(300):
        u, v = rng.sample(range(n), 2)
        if eng.graph.has_edge(u, v):
            assert eng.delete(u, v).recolored == 0
        elif exact_arboricity_after(eng.graph, u, v) <= 3:
            assert eng.insert(u, v).recolored <= L


def exact_arboricity_after(g, u, v):
    h = g.copy()
    h.insert_edge(u, v)
    return exact_arboricity(h)


def test_set_color_without_mirror_stages_improper_state():
    eng = full(3)
    eng.insert(0, 1)
    eng.insert(1, 2)
    eng.set_color(1, 2, eng.color_of(0, 1), mirror=False)
    assert is_proper_coloring(eng.graph, eng.chi)


# -- structural extension ---------------------------------------------------


def test_structural_single_edge():
    g = DynGraph.from_edges(2, [(0, 1)])
    chi = coloring_state(2, {})
    assert structural_extend(g, chi, (0, 1), 0.5) == 1
    assert chi.chi == {(0, 1): 1}


def test_structural_path_middle():
    g = DynGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    chi = coloring_state(4, {(0, 1): 1, (2, 3): 1})
    assert structural_extend(g, chi, (1, 2), 0.5) == 1
    # both endpoints hold color 1, so the count-based search sees [1, 2] as
    # full and returns 3; 2 would also be free
    assert chi.chi[(1, 2)] == 3
    assert is_proper_coloring(g, chi.chi) == []


def test_structural_rejects_bad_preconditions():
    g = DynGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(InvalidInput):  # improper
        structural_extend(g, coloring_state(4, {(0, 1): 1, (2, 3): 1}), (0, 1), 0.5)
    with pytest.raises(InvalidInput):  # not a missing edge
        structural_extend(g, coloring_state(4, {(0, 1): 1, (1, 2): 2}), (0, 3), 0.5)
    with pytest.raises(InvalidInput):  # another edge uncolored too
        structural_extend(g, coloring_state(4, {(0, 1): 1}), (1, 2), 0.5)
    with pytest.raises(InvalidInput):  # palette above Delta + 2(1+eps)alpha = 5
        structural_extend(g, coloring_state(4, {(0, 1): 9, (2, 3): 1}), (1, 2), 0.5)


def test_structural_random_instances():
    rng = random.Random(9)
    eps = Fraction(1, 2)
    for _ in range(40):
        n = 10
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45]
        if not edges:
            continue
        g = DynGraph.from_edges(n, edges)
        alpha = exact_arboricity(g)
        e = rng.choice(edges)
        h = g.copy()
        h.delete_edge(*e)
        base = clever_greedy(h)
        chi = coloring_state(n, base)
        count = structural_extend(g, chi, e, eps)
        assert count <= level_count(n, eps)
        assert is_proper_coloring(g, chi.chi) == []
        assert max(chi.chi.values()) <= g.max_degree() + 2 * (1 + eps) * alpha
