import math
from fractions import Fraction

import networkx as nx
import pytest

from oddhom.andrasfai import (AndrasfaiParams, andrasfai_graph, cycle_through, hamiltonian_cycle,
                              is_adjacent_offset, neighbor_indices, rotation_is_automorphism,
                              verify_andrasfai)
from oddhom.cycles import INF, odd_girth
from oddhom.graph import complete_graph, cycle_graph, is_cycle, min_degree_ratio

from oracles import to_nx

GRID = [(k, r) for k in range(2, 7) for r in range(1, 7)]


def geometric_adjacency(k, r):
    """Adjacency from real circle distance, compared with the exact rule."""
    n = (2 * k - 1) * (r - 1) + 2
    lo, hi = (k - 1) / (2 * k - 1), k / (2 * k - 1)
    return {(i, j) for i in range(n) for j in range(i + 1, n)
            if lo < min(j - i, n - (j - i)) / n < hi}


def test_small_cases():
    c5 = andrasfai_graph(AndrasfaiParams(2, 2))
    assert nx.is_isomorphic(to_nx(c5), to_nx(cycle_graph(5)))
    assert c5.edges() == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    assert andrasfai_graph(AndrasfaiParams(3, 1)) == complete_graph(2)
    g = andrasfai_graph(AndrasfaiParams(3, 3))
    assert g.n == 12 and g.is_regular() and g.min_degree() == 3
    assert min_degree_ratio(g) == Fraction(1, 4)


@pytest.mark.parametrize("k,r", GRID)
def test_structure_grid(k, r):
    p = AndrasfaiParams(k, r)
    g = andrasfai_graph(p)
    assert g.n == (2 * k - 1) * (r - 1) + 2 == p.n
    assert set(g.degrees()) == {r}
    assert set(g.neighbors(0)) == set(neighbor_indices(p))
    assert rotation_is_automorphism(g)
    assert odd_girth(g) == (2 * k + 1 if r >= 2 else INF)
    assert min_degree_ratio(g) > Fraction(1, 2 * k - 1)
    assert set(g.edges()) == geometric_adjacency(k, r)


@pytest.mark.parametrize("k,r,expected", [(3, 3, {5, 6, 7}), (2, 2, {2, 3}), (4, 1, {1})])
def test_neighbor_indices(k, r, expected):
    assert set(neighbor_indices(AndrasfaiParams(k, r))) == expected


def test_hamiltonian_examples():
    assert hamiltonian_cycle(AndrasfaiParams(3, 3)) == [0, 5, 10, 3, 8, 1, 6, 11, 4, 9, 2, 7]
    assert hamiltonian_cycle(AndrasfaiParams(2, 2)) == [0, 2, 4, 1, 3]
    p = AndrasfaiParams(2, 3)
    assert (p.n, p.step, math.gcd(p.n, p.step)) == (8, 3, 1)
    with pytest.raises(ValueError):
        hamiltonian_cycle(AndrasfaiParams(3, 1))


@pytest.mark.parametrize("k,r", [(k, r) for k, r in GRID if r >= 2])
def test_hamiltonian_grid(k, r):
    p = AndrasfaiParams(k, r)
    g = andrasfai_graph(p)
    seq = hamiltonian_cycle(p, g)
    assert sorted(seq) == list(range(p.n)) and is_cycle(g, seq)
    assert {seq[s * (2 * k - 1) + 1] for s in range(r)} == set(g.neighbors(seq[0]))


def test_offsets_symmetric():
    p = AndrasfaiParams(4, 5)
    assert all(is_adjacent_offset(p, d) == is_adjacent_offset(p, p.n - d) for d in range(1, p.n))


def test_invalid_params():
    with pytest.raises(ValueError):
        AndrasfaiParams(1, 3)
    with pytest.raises(ValueError):
        AndrasfaiParams(3, 0)


def test_cycle_through():
    g = andrasfai_graph(AndrasfaiParams(3, 3))
    c = cycle_through(g, 0, 6, 7)
    assert c is not None and is_cycle(g, c) and 6 in c and len(c) == 7
    assert cycle_through(g, 0, 6, 5) is None


@pytest.mark.parametrize("k,r", [(3, 3), (2, 4), (5, 2)])
def test_verify_examples(k, r):
    rep = verify_andrasfai(AndrasfaiParams(k, r))
    assert rep.passed and rep.exit_code() == 0
    assert rep.get("odd_girth").witness == 2 * k + 1


def test_verify_r1_skips():
    rep = verify_andrasfai(AndrasfaiParams(3, 1))
    assert rep.passed and rep.get("hamiltonian").status == "skip"
