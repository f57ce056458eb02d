from collections import Counter
from itertools import combinations_with_replacement

import networkx as nx
import pytest

from xyswap.graphs import (
    automorphism_count,
    betti1,
    brute_force_automorphisms,
    enumerate_decorated,
    enumerate_plain,
    enumerate_trees,
    shadow,
    stats,
)

SMALL = [(1, 1), (2, 1), (1, 2), (3, 0), (4, 0), (5, 0), (2, 2), (1, 3), (3, 1)]


# --- an independent oracle ---------------------------------------------------

def _vertex_kinds(n, cap):
    """Every black vertex (g_i, D) with g_i + sum(h + 1) <= cap that is not a bare leaf."""
    slots = [(label, h) for label in range(1, n + 1) for h in range(cap)]
    kinds = set()
    for k in range(1, cap + 1):
        for D in combinations_with_replacement(slots, k):
            used = sum(h + 1 for _, h in D)
            for g in range(cap - used + 1):
                if g + used >= 2:
                    kinds.add((g, tuple(sorted(D))))
    return sorted(kinds)


def _oracle_decorated(n, g):
    # each black vertex costs weight - 1 >= 1 of a budget of g + n - 1; this only prunes
    budget = g + n - 1
    kinds = [(k, k[0] + sum(h + 1 for _, h in k[1]) - 1) for k in _vertex_kinds(n, budget + 1)]
    found = set()

    def grow(start, left, acc):
        if acc:
            _check(acc)
        for i in range(start, len(kinds)):
            kind, cost = kinds[i]
            if cost <= left:
                acc.append(kind)
                grow(i, left - cost, acc)
                acc.pop()

    def _check(blacks):
        G = nx.MultiGraph()
        G.add_nodes_from(("w", i) for i in range(1, n + 1))
        for b, (_, D) in enumerate(blacks):
            for label, _ in D:
                G.add_edge(("b", b), ("w", label))
        if not nx.is_connected(G):
            return
        b1 = G.number_of_edges() - G.number_of_nodes() + 1
        genus = sum(gi for gi, _ in blacks) + sum(h for _, D in blacks for _, h in D) + b1
        if genus == g:
            found.add(tuple(sorted(blacks)))

    grow(0, budget, [])
    return found


@pytest.mark.parametrize("n,g", [(1, 1), (1, 2), (2, 1), (3, 0), (4, 0), (2, 2)])
def test_decorated_matches_exhaustive_oracle(n, g):
    ours = {gr.blacks for gr in enumerate_decorated(n, g)}
    assert ours == _oracle_decorated(n, g)


def test_decorated_counts():
    assert len(enumerate_decorated(1, 1)) == 3
    split = Counter(betti1(gr) for gr in enumerate_decorated(1, 2))
    assert len(enumerate_decorated(1, 2)) == 12
    assert [split[b] for b in range(3)] == [6, 4, 2]


@pytest.mark.parametrize("n,g", SMALL)
def test_decorated_graph_conditions(n, g):
    graphs = enumerate_decorated(n, g)
    assert len(set(graphs)) == len(graphs)
    for gr in graphs:
        assert gr.genus == g
        st = stats(gr)
        assert all(r >= 1 for r in st.valences)
        for gi, D in gr.blacks:
            assert D and gi + sum(h + 1 for _, h in D) >= 2


@pytest.mark.parametrize("n,g", SMALL)
def test_automorphisms_agree_with_brute_force(n, g):
    for gr in enumerate_decorated(n, g):
        if len(gr.edges()) <= 5:
            assert automorphism_count(gr) == brute_force_automorphisms(gr)


@pytest.mark.parametrize("n,e", [(1, 4), (2, 3), (3, 2)])
def test_plain_automorphisms_agree_with_brute_force(n, e):
    for gr in enumerate_plain(n, e):
        if len(gr.edges()) <= 5:
            assert automorphism_count(gr) == brute_force_automorphisms(gr)


def test_plain_one_label_shapes():
    graphs = enumerate_plain(1, 3)
    by_shape = {gr.blacks: automorphism_count(gr) for gr in graphs}
    assert by_shape == {(): 1, ((1, 1),): 2, ((1, 1, 1),): 6, ((1, 1), (1, 1)): 8}
    assert sorted(betti1(gr) for gr in graphs) == [0, 1, 2, 2]


def test_plain_two_labels():
    graphs = enumerate_plain(2, 2)
    assert [automorphism_count(gr) for gr in graphs] == [1, 2, 2, 2, 2, 2]


def test_shadow_drops_leaves_and_decorations():
    for gr in enumerate_decorated(1, 2):
        sh = shadow(gr)
        assert all(len(b) >= 2 for b in sh.blacks)
        assert betti1(sh) == betti1(gr)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 4), (4, 29), (5, 311)])
def test_tree_counts(n, count):
    # hypertrees on n labelled vertices
    trees = enumerate_trees(n)
    assert len(trees) == count
    assert all(betti1(t) == 0 for t in trees)


def test_betti_numbers():
    loop = enumerate_plain(1, 1)[-1]
    assert loop.blacks == ((1, 1),) and betti1(loop) == 1
    assert betti1(enumerate_trees(4)[0]) == 0


def test_structured_form():
    gr = enumerate_decorated(1, 1)[-1]
    data = gr.to_structured()
    assert data == {"n": 1, "g": 1, "b1": 1, "aut": 2, "blacks": [[0, [[1, 0], [1, 0]]]]}
