import os
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tw2kernel.graph import Graph

os.environ.setdefault("TW2KERNEL_CHECKS", "1")

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, keep in zip(pairs, mask) if keep])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


def build(n, edges):
    return Graph(range(n), edges)


def cycle(n):
    return build(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return build(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return build(n, combinations(range(n), 2))


@pytest.fixture
def k4():
    return complete(4)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
