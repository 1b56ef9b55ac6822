import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from homauto.graphcore import (
    Graph, ModeError, WeightedDigraph, categorical_product, cfi, complement, decomposition_width,
    disjoint_union, empty_graph, find_isomorphism, hom_count, hom_count_pinned, hom_count_sparse,
    hom_exists, is_isomorphic, is_path_decomposition, make_complete, make_cycle, make_kneser, make_path,
    make_star, path_decomposition, pathwidth,
)
from oracles import brute_hom, brute_iso, random_graph, trace_power


@st.composite
def graphs(draw, max_n=5, directed=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v] if directed else list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen, directed)


def test_undirected_edges_symmetric():
    G = Graph(3, [(0, 1)])
    assert G.has_edge(1, 0)
    assert G.num_edges == 1
    assert G.edge_list() == [(0, 1)]


def test_loops_rejected_undirected():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])


def test_json_round_trip():
    G = Graph(3, [(0, 1), (2, 2)], directed=True, colours=["a", "b", "a"])
    assert Graph.from_json(G.to_json()) == G


def test_malformed_json():
    with pytest.raises(ValueError):
        Graph.from_json({"edges": []})


@settings(max_examples=60, deadline=None)
@given(graphs(4), graphs(4))
def test_hom_count_matches_brute_force(F, G):
    assert hom_count(F, G) == brute_hom(F, G)


@settings(max_examples=40, deadline=None)
@given(graphs(3, directed=True), graphs(4, directed=True))
def test_directed_hom_count(F, G):
    assert hom_count(F, G) == brute_hom(F, G)


def test_pinned_count():
    P3 = make_path(3)
    C4 = make_cycle(4)
    assert hom_count_pinned(P3, C4, {1: 0}) == brute_hom(P3, C4, {1: 0}) == 4


def test_coloured_counts_respect_colours():
    F = Graph(2, [(0, 1)], directed=True, colours=["a", "b"])
    G = Graph(3, [(0, 1), (1, 2), (2, 0)], directed=True, colours=["a", "b", "b"])
    assert hom_count(F, G) == brute_hom(F, G) == 1


def test_mode_mismatch():
    with pytest.raises(ModeError):
        hom_count(make_path(2), make_cycle(3, directed=True))


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_cycle_hom_is_closed_walks(m):
    G = make_star(3)
    assert hom_count(make_cycle(m), G) == trace_power(G.adjacency_int(), m)


def test_hom_exists():
    assert hom_exists(make_cycle(4), make_complete(2))
    assert not hom_exists(make_cycle(5), make_complete(2))


def test_products_multiply_counts():
    F = make_path(3)
    G, H = make_cycle(3), make_star(2)
    assert hom_count(F, categorical_product(G, H)) == hom_count(F, G) * hom_count(F, H)
    assert hom_count(F, disjoint_union(G, H)) == hom_count(F, G) + hom_count(F, H)
    assert hom_count(F, 3 * G) == 3 * hom_count(F, G)


def test_complement():
    assert complement(make_complete(4)) == empty_graph(4)
    with pytest.raises(ModeError):
        complement(make_cycle(3, directed=True))


def test_kneser_petersen():
    P = make_kneser(2, 5)
    assert is_isomorphic(P, Graph.from_json({"n": 10, "edges": list(nx.petersen_graph().edges())}))


@settings(max_examples=40, deadline=None)
@given(graphs(5), st.randoms(use_true_random=False))
def test_isomorphism_of_relabelling(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    H = G.relabel(perm)
    iso = find_isomorphism(G, H)
    assert iso is not None
    assert {(iso[u], iso[v]) for u, v in G.edges} == H.edges


@settings(max_examples=40, deadline=None)
@given(graphs(5), graphs(5))
def test_isomorphism_matches_brute_force(G, H):
    assert is_isomorphic(G, H) == brute_iso(G, H)


@pytest.mark.parametrize("n", [3, 4])
def test_cfi_cycles(n):
    assert is_isomorphic(cfi(make_cycle(n), 0), make_cycle(n) + make_cycle(n))
    assert is_isomorphic(cfi(make_cycle(n), 1), make_cycle(2 * n))


def test_cfi_needs_connected():
    with pytest.raises(ValueError):
        cfi(empty_graph(2), 0)


@pytest.mark.parametrize("G,pw", [
    (make_path(5), 1),
    (make_cycle(5), 2),
    (make_complete(4), 3),
    (make_star(4), 1),
    (empty_graph(3), 0),
])
def test_pathwidth_examples(G, pw):
    assert pathwidth(G) == pw


@settings(max_examples=40, deadline=None)
@given(graphs(7))
def test_path_decomposition_valid_and_optimal(G):
    bags = path_decomposition(G)
    assert is_path_decomposition(G, bags)
    assert decomposition_width(bags) == pathwidth(G)


def test_path_decomposition_checker_rejects():
    G = make_path(3)
    assert not is_path_decomposition(G, [{0, 1}, {2}])
    assert not is_path_decomposition(G, [{0, 1}, {1, 2}, {0}])


@pytest.mark.parametrize("limit", [2, 12])
def test_sparse_counting_matches(limit):
    rng = random.Random(5)
    for _ in range(60):
        F = random_graph(rng, rng.randint(1, 7), 0.35)
        G = random_graph(rng, rng.randint(1, 5), 0.5)
        assert hom_count_sparse(F, G, limit) == hom_count(F, G)


def test_sparse_counting_long_path():
    P = make_path(40)
    G = make_cycle(5)
    # every vertex of C5 has degree 2
    assert hom_count_sparse(P, G) == 5 * 2 ** 39


def test_weighted_digraph_rejects_negative():
    with pytest.raises(ValueError):
        WeightedDigraph([[1, -1], [0, 0]])
