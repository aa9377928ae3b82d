import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oddhom.andrasfai import AndrasfaiParams, andrasfai_graph
from oddhom.budget import Budget, BudgetExceeded
from oddhom.cycles import (INF, DWitness, build_disjoint_system, check_lemma_N, check_prop_CD,
                           check_short_cycle_systems, contains_cycle, contains_D, decompose_walk,
                           find_even_path_bipartite, find_path_on_vertices, is_bipartite,
                           is_D_witness, iter_cycles, odd_girth, odd_path_at_most, parity_distances,
                           shortest_odd_cycle)
from oddhom.graph import (blow_up, complete_bipartite, complete_graph, cycle_graph, disjoint_union,
                          is_cycle, is_path, make_graph, path_graph)

from oracles import (brute_odd_girth, brute_odd_path, brute_path_on, cycle_lengths, graphs,
                     random_graph, walk_parity_distance)


def A(k, r):
    return andrasfai_graph(AndrasfaiParams(k, r))


# -- parity distances ----------------------------------------------------------

def test_c5_parity_distances():
    t = parity_distances(cycle_graph(5))
    assert t.even(0, 2) == 2 and t.odd(0, 2) == 3


def test_k2_has_no_even_walk_between_ends():
    t = parity_distances(complete_graph(2))
    assert t.odd(0, 1) == 1 and t.even(0, 1) == INF
    assert t.even(0, 0) == 0 and t.odd(0, 0) == INF


def test_bipartite_same_side_has_no_odd_walk():
    t = parity_distances(complete_bipartite(3, 4))
    assert all(t.odd(u, v) == INF for u in range(3) for v in range(3))


@settings(max_examples=80)
@given(graphs(max_n=8))
def test_parity_distances_match_walk_enumeration(g):
    t = parity_distances(g)
    for u, v in itertools.product(range(g.n), repeat=2):
        for p in (0, 1):
            assert t.dist(u, v, p) == walk_parity_distance(g, u, v, p)


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=7))
def test_parity_triangle_inequality(g):
    t = parity_distances(g)
    for u, v, w in itertools.product(range(g.n), repeat=3):
        for q, r in itertools.product((0, 1), repeat=2):
            assert t.dist(u, w, (q + r) % 2) <= t.dist(u, v, q) + t.dist(v, w, r)


# -- odd girth and fixed-length cycles ----------------------------------------

@pytest.mark.parametrize("g,expected", [
    (complete_graph(4), 3),
    (cycle_graph(4), INF),
    (cycle_graph(9), 9),
    (A(3, 3), 7),
    (make_graph(0, []), INF),
])
def test_odd_girth_examples(g, expected):
    assert odd_girth(g) == expected


@settings(max_examples=80)
@given(graphs(max_n=9))
def test_odd_girth_matches_cycle_enumeration(g):
    og = odd_girth(g)
    assert og == brute_odd_girth(g)
    assert is_bipartite(g) == (og == INF)
    cyc = shortest_odd_cycle(g)
    if og == INF:
        assert cyc is None
    else:
        assert len(cyc) == og and is_cycle(g, cyc)


@settings(max_examples=60)
@given(graphs(max_n=8))
def test_contains_cycle_matches_networkx(g):
    lengths = cycle_lengths(g)
    for ell in range(3, g.n + 1):
        c = contains_cycle(g, ell)
        assert (c is not None) == (ell in lengths)
        if c is not None:
            assert len(c) == ell and is_cycle(g, c)


@settings(max_examples=30)
@given(graphs(max_n=7))
def test_iter_cycles_counts_each_cycle_once(g):
    from oracles import to_nx
    import networkx as nx
    expected = sum(1 for c in nx.simple_cycles(to_nx(g)) if len(c) == 5)
    assert len(list(iter_cycles(g, 5))) == expected


def test_odd_girth_vs_contains_cycle_up_to_16():
    rng = random.Random(7)
    for _ in range(40):
        g = random_graph(rng, rng.randint(5, 16), 0.2)
        og = odd_girth(g)
        for ell in range(3, 17, 2):
            shorter = any(contains_cycle(g, l) for l in range(3, ell + 1, 2))
            assert (og <= ell) == shorter


def test_contains_cycle_examples():
    assert contains_cycle(cycle_graph(7), 7) is not None
    assert contains_cycle(A(3, 3), 5) is None
    c = contains_cycle(blow_up(cycle_graph(5), 2), 5)
    assert c is not None and len({v // 2 for v in c}) == 5


def test_blow_up_c5_is_triangle_free():
    g = blow_up(cycle_graph(5), 3)
    assert g.n == 15 and g.is_regular() and g.min_degree() == 6
    assert not any(g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
                   for a, b, c in itertools.combinations(range(15), 3))
    assert contains_cycle(g, 3) is None


def test_budget_abort_is_distinct():
    with pytest.raises(BudgetExceeded):
        contains_cycle(A(3, 6), 9, budget=5)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("ODD_HOM_BUDGET", "3")
    with pytest.raises(BudgetExceeded):
        contains_cycle(A(3, 6), 9)
    monkeypatch.delenv("ODD_HOM_BUDGET")
    assert Budget().limit > 3


# -- D_l ------------------------------------------------------------------------

def explicit_D3():
    # triangles 0,1,2 and 6,7,8 joined by 0-3-4-5-6
    return make_graph(9, [(0, 1), (1, 2), (2, 0), (6, 7), (7, 8), (8, 6), (0, 3), (3, 4), (4, 5), (5, 6)])


def test_D3_found():
    g = explicit_D3()
    w = contains_D(g, 3)
    assert w is not None and is_D_witness(g, w, 3) and w.vertices == set(range(9))


def test_D3_ignores_pendant():
    base = explicit_D3()
    g = make_graph(10, base.edges() + [(4, 9)])
    w = contains_D(g, 3)
    assert w is not None and 9 not in w.vertices and is_D_witness(g, w, 3)


def test_D_absent():
    assert contains_D(cycle_graph(11), 3) is None
    assert contains_D(cycle_graph(11), 11) is None
    # triangles joined by a path of length 3 are not a D_3
    g = make_graph(8, [(0, 1), (1, 2), (2, 0), (5, 6), (6, 7), (7, 5), (0, 3), (3, 4), (4, 5)])
    assert contains_D(g, 3) is None
    with pytest.raises(ValueError):
        contains_D(g, 4)


def test_D_witness_rejects_shared_vertices():
    g = explicit_D3()
    assert not is_D_witness(g, DWitness([0, 1, 2], [0, 1, 2], [0, 3, 4, 5, 6]), 3)


# -- paths ------------------------------------------------------------------------

def test_path_examples():
    p = find_path_on_vertices(cycle_graph(5), 5)
    assert p is not None and is_path(cycle_graph(5), p) and len(p) == 5
    assert find_path_on_vertices(complete_bipartite(1, 3), 4) is None
    assert find_path_on_vertices(complete_bipartite(1, 3), 3) is not None


def test_erdos_gallai_random_instances():
    rng = random.Random(11)
    hits = 0
    for _ in range(300):
        g = random_graph(rng, 10, rng.uniform(0.1, 0.6))
        for t in range(1, 10):
            found = find_path_on_vertices(g, t + 1)
            if t <= 4:
                assert (found is not None) == brute_path_on(g, t + 1)
            if found is not None:
                assert is_path(g, found) and len(found) == t + 1
            if 2 * g.num_edges >= t * g.n:
                hits += 1
                assert found is not None
    assert hits > 100


def test_even_bipartite_path_examples():
    g = complete_bipartite(3, 3)
    p = find_even_path_bipartite(g, [0, 1, 2], [3, 4, 5], 4)
    assert p is not None and len(p) == 5 and p[0] < 3 and p[-1] < 3 and is_path(g, p)
    single = complete_bipartite(1, 1)
    assert find_even_path_bipartite(single, [0], [1], 2) is None
    with pytest.raises(ValueError):
        find_even_path_bipartite(g, [0, 1], [1, 3], 2)
    with pytest.raises(ValueError):
        find_even_path_bipartite(g, [0, 1, 2], [3, 4, 5], 3)


def test_even_bipartite_path_dense_instances():
    rng = random.Random(5)
    tried = 0
    while tried < 40:
        a, b = rng.randint(4, 8), rng.randint(2, 6)
        if b > a:
            a, b = b, a
        t = rng.choice([2, 4])
        if b < t:
            continue
        edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < 0.8]
        if len(edges) <= (a + b) * t:
            continue
        tried += 1
        g = make_graph(a + b, edges)
        p = find_even_path_bipartite(g, range(a), range(a, a + b), t)
        assert p is not None and len(p) == t + 1 and is_path(g, p) and p[0] < a and p[-1] < a


@settings(max_examples=60)
@given(graphs(min_n=2, max_n=7), st.data())
def test_odd_path_at_most_matches_brute_force(g, data):
    u, v = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    L = data.draw(st.sampled_from([1, 3, 5]))
    p = odd_path_at_most(g, u, v, L)
    assert (p is not None) == brute_odd_path(g, u, v, L)
    if p is not None:
        assert is_path(g, p) and (len(p) - 1) % 2 == 1 and len(p) - 1 <= L


# -- walk decomposition ---------------------------------------------------------

def test_decompose_simple_path():
    d = decompose_walk([0, 1, 2, 3])
    assert d.kind == "path" and d.vertices == [0, 1, 2, 3] and d.indices == [0, 1, 2, 3]


def test_decompose_finds_triangle_in_k4_walk():
    d = decompose_walk([0, 1, 2, 0, 1, 3])
    assert d.kind == "cycle" and sorted(d.vertices) == [0, 1, 2]
    assert d.indices == sorted(d.indices)


def test_decompose_even_loops_give_odd_path():
    # C_6 plus chord 0-3; walk 0,1,2,3,0,5 has the even loop 0..3..0 erased
    g = make_graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])
    walk = [0, 1, 2, 3, 0, 5]
    d = decompose_walk(walk)
    assert d.kind == "path" and d.vertices == [0, 5] and is_path(g, d.vertices)


@pytest.mark.parametrize("walk", [[0], [0, 1, 2], [0, 1, 0], [0, 0, 1, 2]])
def test_decompose_rejects(walk):
    with pytest.raises(ValueError):
        decompose_walk(walk)


# -- lemma checkers -------------------------------------------------------------

def test_lemma_N_on_c7_blow_up():
    g = blow_up(cycle_graph(7), 20)
    rep = check_lemma_N(g, 3, Fraction(1, 10) - Fraction(1, 1000), force=True)
    assert rep.get("density").status == "pass"
    assert rep.get("common_neighbours").status == "pass"


def test_lemma_N_on_c7_pairs():
    rep = check_lemma_N(cycle_graph(7), 3, Fraction(1, 100), force=True)
    assert rep.get("common_neighbours").status == "pass"
    assert "max_common=0" in rep.get("common_neighbours").detail


def test_lemma_N_on_andrasfai():
    rep = check_lemma_N(A(3, 4), 3, Fraction(1, 100), force=True)
    assert rep.get("density").status == "pass"
    assert rep.get("common_neighbours").status == "pass"
    assert "exhaustive" in rep.get("density").detail


def test_lemma_N_precondition_failure_on_k4():
    rep = check_lemma_N(complete_graph(4), 3, Fraction(1, 10))
    assert rep.get("pre.order").status == "fail"
    assert rep.get("density").status == "skip"


def test_disjoint_system_vacuous_on_andrasfai_blow_up():
    rep = check_short_cycle_systems(blow_up(A(4, 3), 3), 4, Fraction(1, 100))
    assert rep.passed and rep.get("system.vacuous").status == "pass"


def test_disjoint_system_parameter_errors():
    k3 = complete_graph(3)
    with pytest.raises(ValueError):
        build_disjoint_system(k3, 2, Fraction(1, 10), [0, 1, 2])
    with pytest.raises(ValueError):
        build_disjoint_system(cycle_graph(4), 3, Fraction(1, 10), [0, 1, 2, 3])


def test_disjoint_system_synthetic_shortfall():
    # triangle 0,1,2; vertex i sees fresh 3+3i..5+3i; each fresh vertex sees one of 12..14
    edges = [(0, 1), (1, 2), (2, 0)]
    for i in range(3):
        for j in range(3):
            edges.append((i, 3 + 3 * i + j))
            edges.append((3 + 3 * i + j, 12 + j))
    g = make_graph(15, edges)
    s = build_disjoint_system(g, 3, Fraction(1, 10), [0, 1, 2])
    assert s.M == [[3, 4, 5], [6, 7, 8], [9, 10, 11]]
    assert s.m == [3, 6, 9]
    # all m_i share the neighbour 12, so every L_i is empty
    assert s.L == [[], [], []]
    assert s.threshold == 3 and s.shortfall == "L_1"


# -- freeness of the Andrasfai family ---------------------------------------------

@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_prop_CD_on_andrasfai(k, r):
    assert check_prop_CD(A(k, r), k).passed


@pytest.mark.parametrize("k,r,w", [(2, 3, 3), (3, 3, 2), (3, 5, 2), (4, 2, 3), (5, 2, 2)])
def test_prop_CD_on_blow_ups(k, r, w):
    assert check_prop_CD(blow_up(A(k, r), w), k).passed


def test_prop_CD_detects_cycles():
    rep = check_prop_CD(disjoint_union(cycle_graph(5), path_graph(2)), 3)
    assert rep.get("C5_free").status == "fail"
