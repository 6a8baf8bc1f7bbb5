"""Random crafted instances on which one specific reduction rule fires.

Each generator takes a random.Random and returns (before, ReducedInstance)
for a single application of its rule, or None when the sampled instance
does not qualify. Certificates are always explicit witnesses or trivially
small sets, never the trusted separator kind.
"""

from itertools import combinations

from tw2kernel.biconnected import apply_frequent_path_neighbour, apply_ladder
from tw2kernel.blockcut import BlockPath, apply_contract_leaf_block, apply_contract_neighbourless
from tw2kernel.decompose import (add_edge_event, apply_remove_limit0, component_removal_certificates,
                                 remove_component_event, tidy_modulator)
from tw2kernel.errors import RejectedApplication
from tw2kernel.graph import Graph, block_cut_tree, component_of, components, count_disjoint_paths
from tw2kernel.instance import (ProblemInstance, ReducedInstance, _separated_candidates, apply_event,
                                contract_component_event, contract_component_ok, no_solution_event,
                                reduce_trivial, solution_known_event)
from tw2kernel.limits import certify_limit, small_certificate
from tw2kernel.oracle import all_solutions, exact_tw2d
from tw2kernel.tw2 import tw_at_most_2


def random_graph(rng, n, p):
    return Graph(range(n), [e for e in combinations(range(n), 2) if rng.random() < p])


def partial_2tree(rng, n, keep=0.75, start=0):
    """Random 2-tree on start..start+n-1 with some edges dropped."""
    vs = list(range(start, start + n))
    g = Graph(vs)
    if n >= 2:
        g.add_edge(vs[0], vs[1])
    tri = [(vs[0], vs[1])] if n >= 2 else []
    for v in vs[2:]:
        a, b = rng.choice(tri)
        g.add_edge(a, v)
        g.add_edge(b, v)
        tri += [(a, v), (b, v)]
    for u, v in g.edges():
        if rng.random() > keep:
            g.remove_edge(u, v)
    return g


def _attach(rng, g, v, targets, p, keep_tw=None):
    """Join v to each target with probability p, skipping edges that would
    push tw(g[keep_tw]) above two."""
    for w in targets:
        if w != v and rng.random() < p and not g.has_edge(v, w):
            g.add_edge(v, w)
            if keep_tw is not None and not tw_at_most_2(g, keep_tw):
                g.remove_edge(v, w)


def _ok(pi, ev):
    return pi, ReducedInstance(apply_event(pi, ev), [ev])


# trivial-instance rules


def gen_solution_known(rng):
    n = rng.randint(5, 12)
    pi = ProblemInstance(random_graph(rng, n, rng.uniform(0.2, 0.7)), rng.randint(0, 3))
    sols = all_solutions(pi)
    if not sols:
        return None
    return _ok(pi, solution_known_event(pi, rng.choice(sols)))


def gen_no_solution(rng):
    """The two places the kernel emits this rule: t = 0 on a graph with a K4
    minor, and an exact modulator larger than t."""
    n = rng.randint(5, 12)
    g = random_graph(rng, n, rng.uniform(0.3, 0.8))
    if tw_at_most_2(g):
        return None
    if rng.random() < 0.5:
        pi = ProblemInstance(g, 0)
        out, events = reduce_trivial(pi)
        return pi, ReducedInstance(out, events)
    pi = ProblemInstance(g, rng.randint(1, 3))
    if exact_tw2d(g).size <= pi.t:
        return None
    return _ok(pi, no_solution_event(pi))


def gen_contract_component(rng):
    n = rng.randint(5, 12)
    g = random_graph(rng, n, rng.uniform(0.15, 0.5)) if rng.random() < 0.5 else partial_2tree(rng, n, 0.9)
    for extra in range(rng.randint(0, 3)):
        v = g.add_vertex()
        _attach(rng, g, v, g.vertices(), 0.6)
    if g.n > 15:
        return None
    pi = ProblemInstance(g, rng.randint(0, 3))
    cands = [frozenset([v]) for v in g.vertices()] + [frozenset(h) for h in _separated_candidates(g)]
    cands = [h for h in cands if contract_component_ok(g, h)]
    if not cands:
        return None
    return _ok(pi, contract_component_event(g, rng.choice(cands)))


# modulator rules


def gen_remove_limit0(rng):
    """v on t+1 disjoint K4s (triangles joined to v), plus noise, or a
    random instance run through the tidy-modulator step."""
    if rng.random() < 0.3:
        n = rng.randint(7, 12)
        g = random_graph(rng, n, rng.uniform(0.4, 0.8))
        pi = ProblemInstance(g, rng.randint(1, 2))
        x = exact_tw2d(g).modulator
        if len(x) <= pi.t or len(x) > 3:
            return None
        res = tidy_modulator(pi, x)
        if not isinstance(res, ReducedInstance) or res.events[0].rule != "remove-limit-0-subset":
            return None
        return pi, res
    t = rng.randint(1, 2)
    g = Graph([0])
    tris = []
    for i in range(t + 1):
        a, b, c = g.add_vertex(), g.add_vertex(), g.add_vertex()
        for u, w in ((a, b), (b, c), (a, c), (0, a), (0, b), (0, c)):
            g.add_edge(u, w)
        tris.append({a, b, c})
    for extra in range(rng.randint(0, 15 - g.n)):
        v = g.add_vertex()
        _attach(rng, g, v, g.vertices(), 0.3)
    for u, w in combinations(range(1, g.n), 2):
        if rng.random() < 0.05 and not g.has_edge(u, w):
            g.add_edge(u, w)
    pi = ProblemInstance(g, t)
    cert = certify_limit(g, t, {0}, tris)
    out, ev = apply_remove_limit0(pi, {0}, cert)
    return pi, ReducedInstance(out, [ev])


def gen_add_edge(rng):
    n = rng.randint(6, 12)
    t = rng.randint(0, 2)
    g = random_graph(rng, n, rng.uniform(0.4, 0.85))
    pi = ProblemInstance(g, t)
    pairs = [(a, b) for a, b in combinations(g.vertices(), 2)
             if not g.has_edge(a, b) and count_disjoint_paths(g, a, b, limit=t + 3) >= t + 3]
    if not pairs:
        return None
    a, b = rng.choice(pairs)
    return _ok(pi, add_edge_event(pi, a, b))


def gen_reduce_components(rng):
    """X a small clique, G - X a pile of small pieces each of which stays
    treewidth 2 with any single vertex of X."""
    k = rng.randint(2, 3)
    t = rng.randint(0, 2)
    xs = list(range(k))
    g = Graph(xs, combinations(xs, 2))
    while g.n < rng.randint(9, 15):
        kind = rng.choice(("edge", "vertex", "path"))
        size = {"edge": 2, "vertex": 1, "path": 3}[kind]
        if g.n + size > 15:
            break
        piece = [g.add_vertex() for _ in range(size)]
        for a, b in zip(piece, piece[1:]):
            g.add_edge(a, b)
        nb = rng.sample(xs, rng.randint(1, k))
        for v in piece:
            for x in nb:
                g.add_edge(v, x)
        rest = set(piece)
        if not all(tw_at_most_2(g, rest | {x}) for x in xs):
            for v in piece:
                g.remove_vertex(v)
    xset = frozenset(xs)
    if not all(tw_at_most_2(g, g.vertex_set() - (xset - {x})) for x in xs):
        return None
    pi = ProblemInstance(g, t)
    comps = [frozenset(c) for c in components(g, g.vertex_set() - xset)]
    rng.shuffle(comps)
    for c in comps:
        if component_removal_certificates(g, t, xset, c) is not None:
            return _ok(pi, remove_component_event(pi, xset, c))
    return None


# edge-removal rules


def _tidy_extra(rng, g, h, count, p):
    """Add `count` modulator vertices joined to h so that h + v has treewidth 2."""
    added = []
    for _ in range(count):
        v = g.add_vertex()
        _attach(rng, g, v, sorted(h), p, keep_tw=set(h) | {v})
        added.append(v)
    return added


def gen_frequent_path_neighbour(rng):
    length = rng.randint(5, 8)
    path = list(range(length))
    g = Graph(path, zip(path, path[1:]))
    for _ in range(rng.randint(0, 3)):
        w = g.add_vertex()
        _attach(rng, g, w, path, 0.35, keep_tw=set(g.vertices()))
    h = set(g.vertices())
    x = g.add_vertex()
    _attach(rng, g, x, path, 0.8, keep_tw=h | {x})
    _attach(rng, g, x, sorted(h - set(path)), 0.4, keep_tw=h | {x})
    others = _tidy_extra(rng, g, h, rng.randint(0, 2), 0.4)
    xs = frozenset([x] + others)
    for a, b in combinations(sorted(xs), 2):
        if rng.random() < 0.5:
            g.add_edge(a, b)
    if g.n > 15:
        return None
    on = [v for v in path if g.has_edge(v, x)]
    if len(on) < 4:
        return None
    vs = sorted(rng.sample(on, 4))
    v1, v2, _, v4 = vs
    piece = component_of(g, v2, g.vertex_set() - xs - {v1, v4})
    subject = g.neighbourhood(piece) & xs
    t = rng.randint(0, 2)
    pi = ProblemInstance(g, t)
    if len(subject) <= 1:
        cert = small_certificate(subject, 1)
    elif len(subject) == 2:
        hh = g.copy()
        hh.remove_edge(v2, x)
        cert = certify_limit(hh, t, subject, components(hh, hh.vertex_set() - subject))
        if cert is None:
            return None
    else:
        return None
    return pi, apply_frequent_path_neighbour(pi, xs, x, path, vs, cert)


def gen_ladder(rng):
    """A 9-rung ladder guarded at its corners; at least 18 vertices."""
    p = list(range(9))
    q = list(range(9, 18))
    g = Graph(range(18))
    for rail in (p, q):
        for a, b in zip(rail, rail[1:]):
            g.add_edge(a, b)
    for a, b in zip(p, q):
        g.add_edge(a, b)
    for i in range(8):
        r = rng.random()
        if r < 0.25:
            g.add_edge(p[i], q[i + 1])
        elif r < 0.5:
            g.add_edge(q[i], p[i + 1])
    corners = [p[0], p[-1], q[0], q[-1]]
    outside = [g.add_vertex() for _ in range(rng.randint(1, 3))]
    for v in outside:
        for c in corners:
            if rng.random() < 0.7:
                g.add_edge(v, c)
    for a, b in combinations(outside, 2):
        if rng.random() < 0.6:
            g.add_edge(a, b)
    for a, b in combinations(corners, 2):
        if rng.random() < 0.2 and not g.has_edge(a, b):
            g.add_edge(a, b)
    pi = ProblemInstance(g, rng.randint(0, 2))
    try:
        return pi, apply_ladder(pi, p, q, list(zip(p, q)))
    except RejectedApplication:
        return None


# block-cut rules


def _leaf_pair_instance(rng):
    """Pendant block whose private vertices see x1 and x2; t+1 edge gadgets
    joined to both make {x1, x2} limit-1 once the block is gone."""
    t = rng.randint(0, 2)
    g = partial_2tree(rng, rng.randint(2, 4), 0.9)
    if len(components(g)) != 1:
        return None
    a = rng.choice(g.vertices())
    block = [a] + [g.add_vertex() for _ in range(rng.randint(1, 2))]
    for u, v in combinations(block, 2):
        g.add_edge(u, v)
    c = frozenset(g.vertices())
    x1, x2 = g.add_vertex(), g.add_vertex()
    g.add_edge(x1, x2)
    private = block[1:]
    g.add_edge(private[0], x1)
    g.add_edge(private[-1], x2)
    for v in sorted(c - set(block)):
        if rng.random() < 0.3:
            g.add_edge(v, rng.choice((x1, x2)))
    for _ in range(t + 1 + rng.randint(0, 1)):
        u, v = g.add_vertex(), g.add_vertex()
        for e in ((u, v), (u, x1), (u, x2), (v, x1), (v, x2)):
            g.add_edge(*e)
    if g.n > 15:
        return None
    return ProblemInstance(g, t), [x1, x2], c


def gen_contract_leaf_block(rng):
    if rng.random() < 0.4:
        got = _leaf_pair_instance(rng)
        if got is None:
            return None
        pi, xs, c = got
        return _try_leaves(rng, pi, xs, c)
    n = rng.randint(5, 10)
    g = partial_2tree(rng, n, 0.7)
    if len(components(g)) != 1:
        return None
    h = set(g.vertices())
    xs = _tidy_extra(rng, g, h, rng.randint(1, 2), 0.3)
    if rng.random() < 0.5 and g.n < 15:
        # a second piece of G - X so the leaf's interface has company
        extra = [g.add_vertex() for _ in range(min(3, 15 - g.n))]
        for a, b in zip(extra, extra[1:]):
            g.add_edge(a, b)
        for v in extra:
            for x in xs:
                if rng.random() < 0.7:
                    g.add_edge(v, x)
    return _try_leaves(rng, ProblemInstance(g, rng.randint(0, 2)), xs, frozenset(h))


def _try_leaves(rng, pi, xs, c):
    g, t = pi.graph, pi.t
    bct = block_cut_tree(g.induced(c))
    leaves = bct.leaf_blocks()
    rng.shuffle(leaves)
    for i, a in leaves:
        b = bct.blocks[i]
        z = g.neighbourhood(b - {a}) - {a}
        if not z:
            continue
        if len(z) == 1:
            cert = small_certificate(z, 1)
        elif len(z) == 2:
            rest = g.without(b)
            cert = certify_limit(rest, t, z, components(rest, rest.vertex_set() - z))
            if cert is None:
                continue
        else:
            continue
        try:
            return pi, apply_contract_leaf_block(pi, xs, (), c, bct, b, a, cert)
        except RejectedApplication:
            continue
    return None


_SMALL_BLOCKS = ("edge", "triangle", "diamond", "square", "diamond-tip")


def _add_block(rng, g, a, kind):
    """Block from the library hanging at a; returns its far articulation."""
    if kind == "edge":
        b = g.add_vertex()
        g.add_edge(a, b)
        return b
    if kind == "triangle":
        b, w = g.add_vertex(), g.add_vertex()
        for u, v in ((a, b), (a, w), (b, w)):
            g.add_edge(u, v)
        return b
    if kind == "square":
        w1, b, w2 = g.add_vertex(), g.add_vertex(), g.add_vertex()
        for u, v in ((a, w1), (w1, b), (b, w2), (w2, a)):
            g.add_edge(u, v)
        return b
    # diamond: K4 minus an edge, ends on the missing edge or on a tip
    w1, w2, b = g.add_vertex(), g.add_vertex(), g.add_vertex()
    if kind == "diamond":
        edges = ((a, w1), (a, w2), (w1, w2), (b, w1), (b, w2))
    else:
        edges = ((a, w1), (a, b), (w1, b), (w1, w2), (b, w2))
    for u, v in edges:
        g.add_edge(u, v)
    return b


def gen_contract_neighbourless(rng):
    g = Graph()
    left = [g.add_vertex() for _ in range(rng.randint(1, 3))]
    for a, b in zip(left, left[1:]):
        g.add_edge(a, b)
    a1 = left[-1]
    mark = g.n
    a2 = _add_block(rng, g, a1, rng.choice(("edge", "triangle")))
    b1 = frozenset(range(mark, g.n)) | {a1}
    mark = g.n
    a3 = _add_block(rng, g, a2, rng.choice(_SMALL_BLOCKS))
    b2 = frozenset(range(mark, g.n)) | {a2}
    mark = g.n
    a4 = _add_block(rng, g, a3, rng.choice(_SMALL_BLOCKS))
    b3 = frozenset(range(mark, g.n)) | {a3}
    probe = g.induced(b2 | b3)
    if not probe.has_edge(a2, a4):
        probe.add_edge(a2, a4)
    if tw_at_most_2(probe):
        return None
    right = [g.add_vertex() for _ in range(rng.randint(1, 3))]
    g.add_edge(a4, right[0])
    for a, b in zip(right, right[1:]):
        g.add_edge(a, b)
    if g.n > 13:
        return None
    c = frozenset(g.vertices())
    interior = (b1 | b2 | b3) - {a1, a4}
    allowed = sorted(c - interior)
    xs = []
    for _ in range(rng.randint(1, 2)):
        x = g.add_vertex()
        _attach(rng, g, x, allowed, 0.6)
        xs.append(x)
    if len(xs) == 2 and rng.random() < 0.5:
        g.add_edge(*xs)
    pi = ProblemInstance(g, rng.randint(0, 2))
    bct = block_cut_tree(g.induced(c))
    path = BlockPath((a1, a2, a3, a4), (b1, b2, b3))
    try:
        return pi, apply_contract_neighbourless(pi, xs, (), c, bct, path)
    except RejectedApplication:
        return None


GENERATORS = {
    "solution-is-known": gen_solution_known,
    "no-existing-solution": gen_no_solution,
    "contract-component": gen_contract_component,
    "remove-limit-0-subset": gen_remove_limit0,
    "add-necessary-edge": gen_add_edge,
    "reduce-number-of-components": gen_reduce_components,
    "frequent-path-neighbour": gen_frequent_path_neighbour,
    "ladder": gen_ladder,
    "contract-leaf-block": gen_contract_leaf_block,
    "contract-neighbourless-blocks": gen_contract_neighbourless,
}


def applications(rule, rng, count, max_tries=20000):
    """Up to `count` (before, result) pairs for `rule`."""
    gen = GENERATORS[rule]
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        got = gen(rng)
        if got is not None and any(ev.rule == rule for ev in got[1].events):
            out.append(got)
    return out
