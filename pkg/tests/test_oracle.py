import random

import pytest

from conftest import complete
from tw2kernel.errors import ScaleExceeded
from tw2kernel.graph import Graph, contract_into
from tw2kernel.instance import ProblemInstance
from tw2kernel.oracle import all_solutions, equivalent, exact_tw2d, has_k4_minor_brute
from tw2kernel.tw2 import tw_at_most_2


def test_exact_tw2d_examples():
    assert exact_tw2d(complete(3)).size == 0
    assert exact_tw2d(complete(4)).size == 1
    assert exact_tw2d(complete(5)).size == 2


def test_equivalent_examples():
    k4_0 = ProblemInstance(complete(4), 0)
    assert equivalent(k4_0, k4_0)
    assert equivalent(ProblemInstance(complete(4), 1), ProblemInstance(Graph(), 1))
    assert not equivalent(k4_0, ProblemInstance(complete(3), 0))


def test_all_solutions_examples():
    tri = all_solutions(ProblemInstance(complete(3), 1))
    assert tri == [frozenset()] + [frozenset([v]) for v in range(3)]
    assert all_solutions(ProblemInstance(complete(4), 1)) == [frozenset([v]) for v in range(4)]
    assert all_solutions(ProblemInstance(complete(4), 0)) == []


def test_oracle_refuses_large_instances():
    with pytest.raises(ScaleExceeded):
        exact_tw2d(Graph(range(40)))


def test_size_zero_iff_recognised():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(0, 9)
        g = Graph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        assert (exact_tw2d(g).size == 0) == tw_at_most_2(g) == (not has_k4_minor_brute(g))


def test_minor_monotone():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(2, 9)
        g = Graph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.55])
        h = g.copy()
        if h.m and rng.random() < 0.5:
            u, v = rng.choice(h.edges())
            h = contract_into(h, {u, v}, u)
        else:
            h.remove_vertex(rng.choice(h.vertices()))
        assert exact_tw2d(h).size <= exact_tw2d(g).size
