import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_graph

from cocitemap.cocitation import BinaryNetwork
from cocitemap.cpm import (canonical, communities_brute_force, degeneracy_order, enumerate_maximal_cliques,
                           k_clique_communities, percolation_path)


def complete(nodes):
    return list(itertools.combinations(sorted(nodes), 2))


def maximal_cliques_brute(g):
    adj = g.adjacency
    nodes = sorted(g.nodes)
    cliques = []
    for r in range(1, len(nodes) + 1):
        for c in itertools.combinations(nodes, r):
            if all(b in adj[a] for a, b in itertools.combinations(c, 2)):
                cliques.append(frozenset(c))
    return canonical(c for c in cliques if not any(c < d for d in cliques))


@st.composite
def graphs(draw, max_nodes=20):
    n = draw(st.integers(0, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return BinaryNetwork.from_edges(0, [p for p, k in zip(pairs, keep) if k], range(n))


def test_k4_single_clique():
    g = BinaryNetwork.from_edges(0, complete("abcd"))
    assert enumerate_maximal_cliques(g).cliques == [frozenset("abcd")]


def test_two_triangles_sharing_an_edge():
    g = BinaryNetwork.from_edges(0, [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")])
    assert enumerate_maximal_cliques(g).cliques == [frozenset("abc"), frozenset("bcd")]


def test_maximal_cliques_match_subset_enumeration():
    rng = random.Random(5)
    for _ in range(30):
        g = random_graph(rng, 12, 0.5)
        assert enumerate_maximal_cliques(g).cliques == maximal_cliques_brute(g)


@given(graphs(12))
def test_maximal_cliques_property(g):
    assert enumerate_maximal_cliques(g).cliques == maximal_cliques_brute(g)


def test_min_size_filters():
    g = BinaryNetwork.from_edges(0, complete(range(4)) + [(4, 5)])
    assert enumerate_maximal_cliques(g, min_size=3).cliques == [frozenset(range(4))]


def test_budget_exhaustion_is_flagged_and_still_maximal():
    rng = random.Random(1)
    g = random_graph(rng, 40, 0.5)
    exact = enumerate_maximal_cliques(g)
    approx = enumerate_maximal_cliques(g, budget=20)
    assert not exact.approximate
    assert approx.approximate
    adj = g.adjacency
    for c in approx.cliques:
        assert all(b in adj[a] for a, b in itertools.combinations(c, 2))
        assert not set.intersection(*(adj[v] for v in c)) - c
    # every node still lies in some clique
    assert frozenset().union(*approx.cliques) == g.nodes


def test_degeneracy_order_is_a_permutation():
    rng = random.Random(3)
    g = random_graph(rng, 25, 0.3)
    order = degeneracy_order(g.adjacency)
    assert sorted(order) == sorted(g.nodes)


def test_canonical_cases():
    assert k_clique_communities(BinaryNetwork.from_edges(0, complete(range(5))), 4).communities == \
        [frozenset(range(5))]
    two = BinaryNetwork.from_edges(0, complete({0, 1, 2, 3}) + complete({2, 3, 4, 5}))
    assert k_clique_communities(two, 4).communities == [frozenset({0, 1, 2, 3}), frozenset({2, 3, 4, 5})]
    tri = BinaryNetwork.from_edges(0, complete({0, 1, 2, 3}) + complete({1, 2, 3, 4}))
    assert k_clique_communities(tri, 4).communities == [frozenset(range(5))]


def test_brute_force_edge_cases():
    assert communities_brute_force(BinaryNetwork.from_edges(0, []), 4).communities == []
    g = BinaryNetwork.from_edges(0, complete("abcd"), nodes="abcde")
    assert communities_brute_force(g, 4).communities == [frozenset("abcd")]
    assert k_clique_communities(g, 4).communities == [frozenset("abcd")]
    with pytest.raises(ValueError):
        communities_brute_force(BinaryNetwork.from_edges(0, [], range(21)), 4)
    with pytest.raises(ValueError):
        k_clique_communities(g, 2)


@given(graphs(16), st.sampled_from([3, 4, 5]))
def test_oracle_equivalence(g, k):
    assert k_clique_communities(g, k).communities == communities_brute_force(g, k).communities


@given(graphs(14), st.sampled_from([3, 4]), st.data())
def test_adding_an_edge_never_splits(g, k, data):
    missing = [p for p in itertools.combinations(sorted(g.nodes), 2) if p not in g.edges]
    if not missing:
        return
    extra = data.draw(st.sampled_from(missing))
    bigger = BinaryNetwork.from_edges(0, [*g.edges, extra], g.nodes)
    after = k_clique_communities(bigger, k).communities
    for c in k_clique_communities(g, k).communities:
        assert any(c <= d for d in after)


@given(graphs(12), st.sampled_from([3, 4]))
def test_members_are_percolation_connected(g, k):
    for c in k_clique_communities(g, k).communities:
        nodes = sorted(c)
        for a, b in zip(nodes, nodes[1:]):
            path = percolation_path(g, k, a, b, within=c)
            assert path is not None
            assert a in path[0] and b in path[-1]
            assert all(len(x & y) >= k - 1 for x, y in zip(path, path[1:]))
            assert all(x <= c for x in path)


@given(graphs(14))
def test_output_is_canonically_ordered(g):
    comms = k_clique_communities(g, 3).communities
    assert comms == sorted(comms, key=lambda c: (sorted(c), len(c)))
    assert len(set(comms)) == len(comms)
