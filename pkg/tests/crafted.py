"""Crafted inputs shared between the module tests and the acceptance suite."""

import random
from itertools import combinations

from rulegen import partial_2tree
from tw2kernel.graph import Graph, components
from tw2kernel.oracle import is_limit_brute
from tw2kernel.tw2 import tw_at_most_2


def modulator_input(rng):
    """(g, t, x) with x a clique modulator of 1..3 vertices.

    Half the draws are flowers: triangles hung on all of x, which push
    Algorithm 1 towards its limit outcome.
    """
    t = rng.randint(0, 2)
    k = rng.randint(1, 3)
    if rng.random() < 0.5:
        g = partial_2tree(rng, rng.randint(4, 9), rng.uniform(0.6, 1.0), start=k)
        g = Graph(list(range(k)) + g.vertices(), g.edges())
        p = rng.uniform(0.2, 0.6)
        for x in range(k):
            for v in range(k, g.n):
                if rng.random() < p:
                    g.add_edge(x, v)
    else:
        g = Graph(range(k))
        for _ in range(rng.randint(t + 1, t + 3)):
            piece = [g.add_vertex() for _ in range(rng.choice((2, 3)))]
            for a, b in combinations(piece, 2):
                g.add_edge(a, b)
            for v in piece:
                for x in range(k):
                    if rng.random() < 0.8:
                        g.add_edge(v, x)
    for a, b in combinations(range(k), 2):
        g.add_edge(a, b)
    if g.n > 13:
        return modulator_input(rng)
    return g, t, frozenset(range(k))


def check_disjoint_modulator(g, t, x, res):
    """Post-conditions of Algorithm 1; returns a list of failures."""
    bad = []
    if len(res.y) > 3 * t + 3:
        bad.append(f"|Y| = {len(res.y)} > 3t+3")
    if res.y & x:
        bad.append("Y meets X")
    rest = g.vertex_set() - x - res.y
    if res.disjoint:
        if not tw_at_most_2(g, g.vertex_set() - res.y):
            bad.append("disjoint outcome but G - Y has treewidth > 2")
    else:
        for c in components(g, rest):
            h = g.without(c)
            if not is_limit_brute(h, t, x, len(x) - 1):
                bad.append(f"component {sorted(c)}: X not limit-(|X|-1) in G - C")
    return bad


def seeded(seed):
    return random.Random(seed)
