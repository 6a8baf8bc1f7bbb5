"""Brute-force ground truth for small instances.

Two independent pieces live here. `has_k4_minor_brute` searches connected
vertex partitions directly and never touches the elimination recognizer,
so it can be used to check that recognizer. The solution enumerators sweep
vertex subsets by size and test each remainder with the recognizer.
"""

from dataclasses import dataclass
from itertools import combinations

from .errors import ScaleExceeded
from .graph import components
from .tw2 import tw_at_most_2

MAX_ORACLE_N = 16


@dataclass(frozen=True)
class OracleResult:
    size: int
    modulator: frozenset
    exceeded: bool = False


EXCEEDS_CAP = OracleResult(size=-1, modulator=frozenset(), exceeded=True)


def _guard(g, limit):
    limit = MAX_ORACLE_N if limit is None else limit
    if g.n > limit:
        raise ScaleExceeded(f"{g.n} vertices is above the oracle limit of {limit}")


# K4 minors by partition search


def _component_has_k4_minor(g, comp):
    """A connected graph has a K4 minor iff some partition of its vertices
    into connected blocks has four pairwise adjacent blocks. Partitions are
    reached from singletons by merging adjacent blocks."""
    verts = sorted(comp)
    if len(verts) < 4:
        return False
    bit = {v: 1 << i for i, v in enumerate(verts)}
    nbr = [0] * len(verts)
    for i, v in enumerate(verts):
        for w in g.neighbours(v):
            nbr[i] |= bit[w]

    def reach(mask):
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= nbr[i]
            mask >>= 1
            i += 1
        return out

    seen = set()
    start = tuple(sorted(bit.values()))
    stack = [start]
    seen.add(start)
    while stack:
        blocks = stack.pop()
        touch = [reach(b) & ~b for b in blocks]
        k = len(blocks)
        adj = [[bool(touch[i] & blocks[j]) for j in range(k)] for i in range(k)]
        for a, b, c, d in combinations(range(k), 4):
            if (adj[a][b] and adj[a][c] and adj[a][d] and adj[b][c]
                    and adj[b][d] and adj[c][d]):
                return True
        if k <= 4:
            continue
        for i in range(k):
            for j in range(i + 1, k):
                if adj[i][j]:
                    merged = [blocks[x] for x in range(k) if x != i and x != j]
                    merged.append(blocks[i] | blocks[j])
                    key = tuple(sorted(merged))
                    if key not in seen:
                        seen.add(key)
                        stack.append(key)
    return False


def has_k4_minor_brute(g, limit=12):
    _guard(g, limit)
    return any(_component_has_k4_minor(g, c) for c in components(g))


# modulator search


def _subsets(vs, k):
    for combo in combinations(vs, k):
        yield frozenset(combo)


def exact_tw2d(g, cap=None, limit=None):
    """Minimum modulator, sweeping subsets by size then lexicographically.

    Returns EXCEEDS_CAP when every set of size <= cap fails.
    """
    _guard(g, limit)
    vs = g.vertices()
    top = len(vs) if cap is None else min(cap, len(vs))
    for k in range(top + 1):
        for s in _subsets(vs, k):
            if tw_at_most_2(g, g.vertex_set() - s):
                return OracleResult(size=k, modulator=s)
    return EXCEEDS_CAP


def is_yes(pi, limit=None):
    return not exact_tw2d(pi.graph, cap=pi.t, limit=limit).exceeded


def equivalent(pi1, pi2, limit=None):
    return is_yes(pi1, limit) == is_yes(pi2, limit)


def all_solutions(pi, limit=None):
    """Every S with |S| <= t and tw(G - S) <= 2, by size then lexicographic."""
    g = pi.graph
    _guard(g, limit)
    vs = g.vertices()
    out = []
    for k in range(min(pi.t, len(vs)) + 1):
        for s in _subsets(vs, k):
            if tw_at_most_2(g, g.vertex_set() - s):
                out.append(s)
    return out


def is_limit_brute(g, t, x, m, limit=None):
    """Every solution of (g, t) leaves at most m vertices of x undeleted."""
    from .instance import ProblemInstance

    x = frozenset(x) & g.vertex_set()
    return all(len(x - s) <= m for s in all_solutions(ProblemInstance(g, t), limit))
