"""Reducing components of G - (X | Y) that consist of many blocks.

Three things can happen to a large block-cut tree: a leaf block is
contracted into its articulation, a vertex of Y with many neighbours in
the component yields a big biconnected piece for the biconnected
reductions, or a long bare stretch of blocks is found. Along a bare
stretch either some x in X touches at least 11 blocks (frequent path
neighbour on an x-edge) or three consecutive blocks see nothing outside
and the first is contracted.
"""

from dataclasses import dataclass

from .biconnected import apply_frequent_path_neighbour, reduce_biconnected
from .bounds import BICONNECTED_FACTOR, FREQUENT_X_BLOCKS, lbound, pbound
from .errors import InvariantViolation, PreconditionViolation, RejectedApplication
from .graph import block_cut_tree, components, max_disjoint_paths, shortest_path
from .instance import ReducedInstance, ReductionEvent, apply_event, is_modulator
from .limits import certify_limit, check_certificate, separator_certificate, small_certificate
from .tw2 import tw_at_most_2


def _modset(x):
    return frozenset(getattr(x, "x", x))


def _sepset(y):
    return frozenset(getattr(y, "y", y))


@dataclass(frozen=True)
class BlockPath:
    """a1, B1, a2, ..., Bk, a(k+1): articulations and block vertex sets."""

    arts: tuple
    blocks: tuple

    def __post_init__(self):
        if len(self.arts) != len(self.blocks) + 1:
            raise PreconditionViolation("a block path needs one more articulation than blocks")

    @property
    def k(self):
        return len(self.blocks)

    def vertices(self):
        out = set()
        for b in self.blocks:
            out |= b
        return out

    def interior(self):
        return self.vertices() - {self.arts[0], self.arts[-1]}

    def sub(self, i, j):
        """Blocks i..j-1 (0-based) with their articulations."""
        return BlockPath(self.arts[i:j + 1], self.blocks[i:j])


@dataclass(frozen=True)
class LeafApplication:
    block: frozenset
    a: int
    certificate: object


def _check_block_path(bct, p):
    blocks = set(bct.blocks)
    for i, b in enumerate(p.blocks):
        if b not in blocks:
            raise PreconditionViolation(f"block {i + 1} is not a block of the component")
        if p.arts[i] not in b or p.arts[i + 1] not in b or p.arts[i] == p.arts[i + 1]:
            raise PreconditionViolation(f"block {i + 1} does not hold both of its articulations")
    if len(set(p.arts)) != len(p.arts) or len(set(p.blocks)) != len(p.blocks):
        raise PreconditionViolation("block path is not simple")


def _contract_event(g, rule, part, keep, info=None):
    """Collapse the connected set `part` onto `keep` as an event."""
    part = set(part)
    gone = part - {keep}
    outside = g.neighbourhood(part) - {keep}
    added = [(keep, w) for w in sorted(outside) if not g.has_edge(keep, w)]
    return ReductionEvent(rule, removed_vertices=sorted(gone), added_edges=added, info=info or {})


def _component_context(g, xs, ys, c):
    z = xs | ys
    if xs & ys:
        raise PreconditionViolation("X and Y overlap")
    if not is_modulator(g, z):
        raise PreconditionViolation("X | Y is not a modulator")
    c = frozenset(c)
    if c not in {frozenset(d) for d in components(g, g.vertex_set() - z)}:
        raise PreconditionViolation("c is not a component of G - (X | Y)")
    return c


# contract leaf block


def _leaf_interface(g, b, a):
    return frozenset(g.neighbourhood(set(b) - {a}) - {a})


def _leaf_certificate(g, t, xs, ys, c, b, a):
    """A limit-1 certificate for N(B - a) - a in (G - B, t), or None."""
    z = _leaf_interface(g, b, a)
    if len(z) <= 1:
        return small_certificate(z, 1)
    if not z & ys:
        return separator_certificate(xs, ys, z)
    if len(z) == 2:
        h = g.without(b)
        return certify_limit(h, t, z, components(h, h.vertex_set() - z))
    return None


def contract_leaf_block_event(pi, x_mod, y_sep, c, bct, b, a, cert=None):
    g, t = pi.graph, pi.t
    xs, ys = _modset(x_mod), _sepset(y_sep)
    c = _component_context(g, xs, ys, c)
    if bct is None:
        bct = block_cut_tree(g.induced(c))
    b = frozenset(bct.blocks[b] if isinstance(b, int) else b)
    if b not in set(bct.blocks):
        raise RejectedApplication("not a block of the component")
    if a not in bct.articulations or bct.blocks.index(b) not in bct.articulation_blocks(a):
        raise RejectedApplication(f"{a} is not an articulation of the block")
    if len(bct.block_articulations(bct.blocks.index(b))) != 1:
        raise RejectedApplication("the block is not a leaf of the block-cut tree")
    z = _leaf_interface(g, b, a)
    if not z:
        raise RejectedApplication("leaf block without outside neighbours")
    if cert is None:
        cert = _leaf_certificate(g, t, xs, ys, c, b, a)
    if not _leaf_cert_holds(g, t, xs, ys, c, b, z, cert):
        raise RejectedApplication("interface is not certified limit-1")
    for x in sorted(z):
        probe = g.induced(b | {x})
        if not probe.has_edge(a, x):
            probe.add_edge(a, x)
        if not tw_at_most_2(probe):
            raise RejectedApplication(f"G[B + {x}] + {a}{x} has treewidth above two")
    return _contract_event(g, "contract-leaf-block", b, a,
                           {"block": sorted(b), "a": a, "interface": sorted(z),
                            "certificate": cert.derivation})


def _leaf_cert_holds(g, t, xs, ys, c, b, z, cert):
    if cert is None or not z <= cert.subject or cert.m > 1:
        return False
    if cert.derivation == "small":
        return len(cert.subject) <= 1
    if cert.derivation == "witnesses":
        return len(cert.subject) <= 2 and check_certificate(g.without(b), t, cert)
    if cert.derivation == "component-separator":
        return cert.basis == (xs, ys) and cert.subject <= g.neighbourhood(c) & xs
    return False


def apply_contract_leaf_block(pi, x_mod, y_sep, c, bct, b, a, cert=None):
    ev = contract_leaf_block_event(pi, x_mod, y_sep, c, bct, b, a, cert)
    return ReducedInstance(apply_event(pi, ev), [ev])


def detect_leaf_overflow(pi, x_mod, y_sep, c, bct):
    """A contractible leaf block when the tree has more than Lbound leaves."""
    g, t = pi.graph, pi.t
    xs, ys = _modset(x_mod), _sepset(y_sep)
    c = frozenset(c)
    nb_c = g.neighbourhood(c)
    y_c = nb_c & ys
    leaves = bct.leaf_blocks()
    if len(leaves) <= lbound(t, len(xs), len(y_c)):
        return None
    nbs = [g.neighbourhood(bct.blocks[i] - {a}) for i, a in leaves]
    excluded = set()
    for y in sorted(y_c):
        for z in sorted(nb_c - {y}):
            hit = [j for j, nb in enumerate(nbs) if y in nb and z in nb]
            if len(hit) <= t + 2:
                excluded.update(hit)
    for x in sorted(nb_c):
        hit = [j for j, nb in enumerate(nbs) if x in nb]
        if len(hit) <= 1:
            excluded.update(hit)
    for j, (i, a) in enumerate(leaves):
        if j in excluded:
            continue
        b = bct.blocks[i]
        z = nbs[j] - {a}
        if len(z) > 1 and z & ys:
            raise InvariantViolation("leaf outside the exclusion sets still sees Y")
        cert = _leaf_certificate(g, t, xs, ys, c, b, a)
        return LeafApplication(b, a, cert)
    raise InvariantViolation("leaf overflow but every leaf is excluded")


# paths through blocks


def _block_graph(c, b):
    return c.induced(b)


def single_block_path(c, b, a1, a2, u):
    """A simple a1 -> u -> a2 path inside block b (a1 != a2)."""
    h = _block_graph(c, b)
    if u in (a1, a2):
        return shortest_path(h, a1, a2)
    aux = h.next_id
    h.add_vertex(aux)
    h.add_edge(aux, a1)
    h.add_edge(aux, a2)
    paths = max_disjoint_paths(h, u, aux, limit=2)
    if len(paths) < 2:
        raise InvariantViolation("block plus auxiliary vertex is not biconnected")
    legs = [p[:-1] for p in paths]
    if legs[0][-1] != a1:
        legs.reverse()
    return legs[0][::-1] + legs[1][1:]


def path_through_neighbours(c, bct, p, u):
    """Simple a1 -> a(k+1) path in G[V(B(P))] through ceil(m/2) vertices of u.

    c is the component as a Graph. Blocks meeting u are taken in path order
    and every other one (first, third, ...) contributes a u-vertex.
    """
    _check_block_path(bct, p)
    u = set(u)
    meeting = [i for i, b in enumerate(p.blocks) if b & u]
    keep = set(meeting[0::2])
    out = [p.arts[0]]
    for i, b in enumerate(p.blocks):
        a1, a2 = p.arts[i], p.arts[i + 1]
        target = min(b & u) if i in keep else a1
        leg = single_block_path(c, b, a1, a2, target)
        if leg[0] != a1 or leg[-1] != a2:
            raise InvariantViolation("block leg has the wrong ends")
        out.extend(leg[1:])
    if len(set(out)) != len(out):
        raise InvariantViolation("joined path repeats a vertex")
    return out


# bare paths


def _big_y_piece(g, c, y):
    """Spanning tree of c with leaves not adjacent to y pruned, plus y."""
    h = g.induced(c)
    tree = {v: set() for v in c}
    root = min(c)
    seen = {root}
    order = [root]
    for v in order:
        for w in sorted(h.neighbours(v)):
            if w not in seen:
                seen.add(w)
                order.append(w)
                tree[v].add(w)
                tree[w].add(v)
    ny = g.neighbours(y)
    todo = sorted(v for v in c if len(tree[v]) <= 1 and v not in ny)
    while todo:
        v = todo.pop()
        if v not in tree or len(tree[v]) > 1 or v in ny or len(tree) == 1:
            continue
        for w in tree.pop(v):
            tree[w].discard(v)
            if len(tree[w]) <= 1 and w not in ny:
                todo.append(w)
    return frozenset(set(tree) | {y})


def _tree_components(bct, removed):
    nodes = [n for n in bct.nodes() if n not in removed]
    alive = set(nodes)
    seen = set()
    out = []
    for n in nodes:
        if n in seen:
            continue
        comp = [n]
        seen.add(n)
        for m in comp:
            for w in bct.neighbours(m):
                if w in alive and w not in seen:
                    seen.add(w)
                    comp.append(w)
        out.append(comp)
    return out


def _as_block_path(bct, comp):
    nodes = set(comp)
    ends = [n for n in comp if sum(1 for w in bct.neighbours(n) if w in nodes) <= 1]
    if any(kind != "A" for kind, _ in ends):
        raise InvariantViolation("a bare stretch ends in a block")
    start = min(ends, key=lambda n: n[1])
    order = [start]
    prev = None
    while len(order) < len(nodes):
        nxt = [w for w in bct.neighbours(order[-1]) if w in nodes and w != prev]
        prev = order[-1]
        order.append(nxt[0])
    arts = tuple(key for kind, key in order if kind == "A")
    blocks = tuple(bct.blocks[key] for kind, key in order if kind == "B")
    return BlockPath(arts, blocks)


def bare_path_sets(g, ys, bct):
    """D1, D2, D3 and the components of T - (D1 | D2 | D3)."""
    leaves = [n for n in bct.nodes() if bct.degree(n) <= 1]
    d1 = {n for n in bct.nodes() if bct.degree(n) >= 3}
    m = len(leaves)
    if m >= 2:
        if len(d1) > m - 2:
            raise InvariantViolation("more branching nodes than leaves allow")
        # T - D1 has exactly m - 1 + |C(T[D1])| components; 2|D1| + 1 fails at degree >= 4
        if len(_tree_components(bct, d1)) > min(len(d1) + m - 1, 2 * m - 3) and d1:
            raise InvariantViolation("T - D1 has too many components")
    d2 = {("B", i) for i in range(len(bct.blocks)) if ("B", i) not in d1
          and sum(1 for w in bct.neighbours(("B", i)) if w not in d1) <= 1}
    d3 = {("B", i) for i, b in enumerate(bct.blocks) if ("B", i) not in d1 | d2
          and g.neighbourhood(b) & ys}
    return d1, d2, d3, _tree_components(bct, d1 | d2 | d3)


def find_bare_path(pi, x_mod, y_sep, c, bct, k):
    """A bare BlockPath with at least k blocks, or a ReducedInstance."""
    g, t = pi.graph, pi.t
    xs, ys = _modset(x_mod), _sepset(y_sep)
    c = _component_context(g, xs, ys, c)
    if k <= 0:
        raise PreconditionViolation("k must be positive")
    y_c = g.neighbourhood(c) & ys
    if len(bct.blocks) <= pbound(t, len(xs), len(y_c), k):
        raise PreconditionViolation("block count does not exceed Pbound")
    leaf = detect_leaf_overflow(pi, xs, ys, c, bct)
    if leaf is not None:
        return apply_contract_leaf_block(pi, xs, ys, c, bct, leaf.block, leaf.a, leaf.certificate)
    for y in sorted(y_c):
        if len(g.neighbours(y) & c) > BICONNECTED_FACTOR * len(xs):
            return reduce_biconnected(pi, x_mod, _big_y_piece(g, c, y))
    d1, d2, d3, comps = bare_path_sets(g, ys, bct)
    blocks_in = [sum(1 for kind, _ in comp if kind == "B") for comp in comps]
    best = max(range(len(comps)),
               key=lambda i: (blocks_in[i], -min(v for kind, key in comps[i]
                                                 for v in ([key] if kind == "A"
                                                           else bct.blocks[key]))))
    path = _as_block_path(bct, comps[best])
    if path.k < k:
        raise InvariantViolation(f"longest bare stretch has {path.k} < {k} blocks")
    bad = g.neighbourhood(path.interior()) - {path.arts[0], path.arts[-1]} - xs
    if bad:
        raise InvariantViolation("bare stretch sees vertices outside X")
    return path


# reductions along a bare path


def contract_neighbourless_event(pi, x_mod, y_sep, c, bct, p):
    g = pi.graph
    xs, ys = _modset(x_mod), _sepset(y_sep)
    c = _component_context(g, xs, ys, c)
    if p.k != 3:
        raise RejectedApplication("the rule works on exactly three blocks")
    _check_block_path(bct, p)
    a1, a2, _, a4 = p.arts
    if g.neighbourhood(p.interior()) != {a1, a4}:
        raise RejectedApplication("the three blocks see more than their two ends")
    probe = g.induced(p.blocks[1] | p.blocks[2])
    if not probe.has_edge(a2, a4):
        probe.add_edge(a2, a4)
    if tw_at_most_2(probe):
        # contract-component would apply to B2 | B3 here
        raise RejectedApplication("the instance is trivial around these blocks")
    return _contract_event(g, "contract-neighbourless-blocks", p.blocks[0], a1,
                           {"arts": list(p.arts), "blocks": [sorted(b) for b in p.blocks]})


def apply_contract_neighbourless(pi, x_mod, y_sep, c, bct, p):
    ev = contract_neighbourless_event(pi, x_mod, y_sep, c, bct, p)
    return ReducedInstance(apply_event(pi, ev), [ev])


def frequent_x_neighbour(pi, x_mod, y_sep, c, bct, p, x):
    """At least 11 blocks of a bare path see x: drop an x-edge."""
    g = pi.graph
    xs, ys = _modset(x_mod), _sepset(y_sep)
    hits = [b for b in p.blocks if x in g.neighbourhood(b)]
    if len(hits) < FREQUENT_X_BLOCKS:
        raise PreconditionViolation(f"only {len(hits)} blocks see {x}")
    comp = g.induced(c)
    q = path_through_neighbours(comp, bct, p, g.neighbours(x))
    on = [v for v in q if g.has_edge(v, x)]
    if len(on) < 6:
        raise InvariantViolation("path meets fewer than six neighbours of x")
    vs = on[1:5]
    cert = separator_certificate(xs, ys, g.neighbourhood(c) & xs)
    return apply_frequent_path_neighbour(pi, xs, x, q, vs, cert)


def reduce_linear(pi, x_mod, y_sep, c, bct, p):
    """Bare path with at least 30|X| + 3 blocks."""
    g = pi.graph
    xs = _modset(x_mod)
    if p.k < 30 * len(xs) + 3:
        raise PreconditionViolation("bare path too short")
    touched = set()
    for x in sorted(xs):
        hits = [i for i, b in enumerate(p.blocks) if x in g.neighbourhood(b)]
        if len(hits) >= FREQUENT_X_BLOCKS:
            return frequent_x_neighbour(pi, x_mod, y_sep, c, bct, p, x)
        touched.update(hits)
    for i in range(p.k - 2):
        if not touched & {i, i + 1, i + 2}:
            return apply_contract_neighbourless(pi, x_mod, y_sep, c, bct, p.sub(i, i + 3))
    raise InvariantViolation("no three consecutive blocks are free of X")


def reduce_blockcut(pi, x_mod, y_sep, c, bct=None):
    """One reduction inside component c whose block-cut tree is large."""
    g, t = pi.graph, pi.t
    xs, ys = _modset(x_mod), _sepset(y_sep)
    c = frozenset(c)
    if bct is None:
        bct = block_cut_tree(g.induced(c))
    k = 30 * len(xs) + 3
    y_c = g.neighbourhood(c) & ys
    if len(bct.blocks) <= pbound(t, len(xs), len(y_c), k):
        raise PreconditionViolation("block count does not exceed Pbound")
    res = find_bare_path(pi, x_mod, y_sep, c, bct, k)
    if isinstance(res, ReducedInstance):
        return res
    return reduce_linear(pi, x_mod, y_sep, c, bct, res)
