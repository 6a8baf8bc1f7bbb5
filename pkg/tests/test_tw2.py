import random

import networkx as nx
import pytest
from hypothesis import given

from conftest import build, complete, cycle, graphs, path
from tw2kernel.errors import PreconditionViolation
from tw2kernel.graph import Graph, components, contract_into
from tw2kernel.oracle import has_k4_minor_brute
from tw2kernel.tw2 import (K4Witness, TreeDecomposition, combine_around_clique, decompose,
                           is_smooth, smooth, try_width2, tw_at_most_2, validate,
                           verify_k4_model)


def subdivided_k4():
    g = complete(4)
    for u, v in list(g.edges()):
        w = g.add_vertex()
        g.remove_edge(u, v)
        g.add_edge(u, w)
        g.add_edge(w, v)
    return g


def random_tw2(rng, n):
    """Random 2-tree with edges dropped, relabelled at random."""
    g = Graph(range(n))
    if n >= 2:
        g.add_edge(0, 1)
    tri = [(0, 1)]
    for v in range(2, n):
        a, b = rng.choice(tri)
        g.add_edge(a, v)
        g.add_edge(b, v)
        tri += [(a, v), (b, v)]
    for e in g.edges():
        if rng.random() < 0.2:
            g.remove_edge(*e)
    return g


# recognition


def test_tree_has_width_at_most_one():
    star = build(6, [(0, i) for i in range(1, 6)])
    td = try_width2(star)
    assert isinstance(td, TreeDecomposition)
    assert validate(star, td) is None
    assert td.width <= 1


def test_k4_gives_singleton_witness():
    w = try_width2(complete(4))
    assert isinstance(w, K4Witness)
    assert sorted(len(p) for p in w.parts) == [1, 1, 1, 1]
    assert verify_k4_model(complete(4), w)


def test_c5_decomposes():
    td = try_width2(cycle(5))
    assert isinstance(td, TreeDecomposition) and validate(cycle(5), td) is None


def test_subdivided_k4_is_not_width_two():
    g = subdivided_k4()
    w = try_width2(g)
    assert isinstance(w, K4Witness) and verify_k4_model(g, w)


@given(graphs(max_n=8))
def test_recognition_agrees_with_partition_search(g):
    res = try_width2(g)
    if isinstance(res, K4Witness):
        assert verify_k4_model(g, res)
        assert has_k4_minor_brute(g)
    else:
        assert validate(g, res) is None
        assert not has_k4_minor_brute(g)
    assert tw_at_most_2(g) == (not isinstance(res, K4Witness))


@given(graphs(max_n=8))
def test_recognition_agrees_with_networkx_upper_bound(g):
    # a width-2 heuristic decomposition proves tw <= 2; it must never contradict us
    if g.n == 0:
        return
    width, _ = nx.algorithms.approximation.treewidth_min_fill_in(nx.Graph(
        list(g.edges())) if g.m else nx.empty_graph(g.vertices()))
    if width <= 2:
        assert tw_at_most_2(g)


# validation


def test_validate_reports_missing_edge_bag():
    g = complete(3)
    td = TreeDecomposition({0: {0, 1}, 1: {1, 2}}, [(0, 1)])
    bad = validate(g, td)
    assert bad is not None and bad.prop == "T2"


def test_validate_reports_disconnected_occurrence():
    g = path(3)
    td = TreeDecomposition({0: {0, 1}, 1: {1, 2}, 2: {0}}, [(0, 1), (1, 2)])
    bad = validate(g, td)
    assert bad is not None and bad.prop == "T3"


def test_validate_reports_wide_bag():
    g = complete(4)
    td = TreeDecomposition({0: {0, 1, 2, 3}})
    assert validate(g, td).prop == "width"


# smooth decompositions


def test_smooth_examples():
    tri = smooth(complete(3), decompose(complete(3)))
    assert len(tri) == 1 and list(tri.bags.values()) == [frozenset({0, 1, 2})]
    p4 = smooth(path(4), decompose(path(4)))
    assert len(p4) == 2 and is_smooth(p4)
    c5 = smooth(cycle(5), decompose(cycle(5)))
    assert len(c5) == 3 and is_smooth(c5) and validate(cycle(5), c5) is None


def test_smooth_needs_three_vertices():
    with pytest.raises(PreconditionViolation):
        smooth(path(2), decompose(path(2)))


@given(graphs(min_n=3, max_n=9))
def test_smooth_contract(g):
    if not tw_at_most_2(g):
        return
    sd = smooth(g, decompose(g))
    assert validate(g, sd) is None
    assert is_smooth(sd)
    assert len(sd) == g.n - 2


# K4 models


def test_verify_k4_model_examples():
    k4 = complete(4)
    assert verify_k4_model(k4, K4Witness(tuple(frozenset([v]) for v in range(4))))
    g = subdivided_k4()
    # branch vertices 0..3, subdivision vertex of edge u-v lies between them
    parts = [{0}, {1}, {2}, {3}]
    for w in range(4, g.n):
        a, b = sorted(g.neighbours(w))
        parts[a].add(w)
    assert verify_k4_model(g, K4Witness(tuple(frozenset(p) for p in parts)))
    tri = complete(3)
    assert not verify_k4_model(tri, K4Witness((frozenset([0]), frozenset([1]), frozenset([2]),
                                               frozenset([0]))))


def test_verify_rejects_disconnected_part():
    # K4 plus a pendant vertex 4 on 0; {3, 4} is not connected
    g = build(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
    good = K4Witness((frozenset([0, 4]), frozenset([1]), frozenset([2]), frozenset([3])))
    bad = K4Witness((frozenset([0]), frozenset([1]), frozenset([2]), frozenset([3, 4])))
    assert verify_k4_model(g, good)
    assert not verify_k4_model(g, bad)


# minor monotonicity


def test_minor_monotonicity():
    rng = random.Random(11)
    for _ in range(200):
        g = random_tw2(rng, rng.randint(3, 12))
        assert tw_at_most_2(g)
        v = rng.choice(g.vertices())
        assert tw_at_most_2(g.without({v}))
        if g.m:
            u, w = rng.choice(g.edges())
            h = g.copy()
            h.remove_edge(u, w)
            assert tw_at_most_2(h)
            assert tw_at_most_2(contract_into(g, {u, w}, u))


# clique gluing


def test_combine_two_triangles_at_a_vertex():
    g = build(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    parts = [decompose(g.induced({0})), decompose(g.induced({0, 1, 2})), decompose(g.induced({0, 3, 4}))]
    td = combine_around_clique(g, {0}, parts)
    assert validate(g, td) is None


def test_combine_without_components_keeps_the_part():
    g = complete(3)
    part = decompose(g)
    td = combine_around_clique(g, {0, 1, 2}, [part])
    assert validate(g, td) is None and len(td) == len(part)


def test_combine_disconnected_with_empty_clique():
    g = build(6, [(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)])
    parts = [decompose(g.induced(c)) for c in components(g)]
    td = combine_around_clique(g, set(), parts)
    assert validate(g, td) is None


def test_combine_rejects_non_clique_interface():
    g = cycle(4)
    u = {0, 2}
    parts = [decompose(g.induced(u))] + [decompose(g.induced({1, 0, 2})), decompose(g.induced({3, 0, 2}))]
    with pytest.raises(PreconditionViolation):
        combine_around_clique(g, u, parts)


def test_combine_on_random_clique_separations():
    rng = random.Random(5)
    for _ in range(100):
        g = random_tw2(rng, rng.randint(3, 10))
        for u in [{v} for v in g.vertices()] + [set(e) for e in g.edges()]:
            comps = components(g, g.vertex_set() - u)
            if any(not g.is_clique(g.neighbourhood(c)) for c in comps):
                continue
            parts = [decompose(g.induced(u))]
            parts += [decompose(g.induced(c | g.neighbourhood(c))) for c in comps]
            td = combine_around_clique(g, u, parts)
            assert validate(g, td) is None
