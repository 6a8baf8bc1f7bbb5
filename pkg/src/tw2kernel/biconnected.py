"""Shrinking large biconnected pieces of G - X.

Two edge-removal rules live here. The frequent path neighbour rule drops
x·v2 when a path of G - X meets N(x) four times around a piece that only
sees a limit-1 part of X. The ladder rule drops the middle rung of a
9-rung ladder that touches the rest of the graph only at its corners.

reduce_biconnected finds one of the two inside a big biconnected B by
walking a smooth decomposition of B: long linear stretches either carry
a vertex that sits in many bags (frequent path neighbour) or split into
two rails joined by rungs (ladder, or a vertex with four rung-neighbours).
"""

from dataclasses import dataclass, field

from .bounds import (BICONNECTED_FACTOR, FREQUENT_U_BASE, FREQUENT_U_FACTOR, LADDER_RUNGS,
                     LONG_PATH_BASE, LONG_PATH_PER_U, TREE_PER_LEAF)
from .errors import InvariantViolation, PreconditionViolation, RejectedApplication, checks_enabled
from .graph import component_of, is_biconnected, maximal_matching
from .instance import ReducedInstance, ReductionEvent, apply_event, is_trivial
from .limits import check_certificate, small_certificate
from .tw2 import decompose, smooth, tw_at_most_2

# first rung window used by the long-path recursion
_PREFIX = LONG_PATH_BASE
_CUT = LONG_PATH_PER_U


def _modset(x):
    return frozenset(getattr(x, "x", x))


def _check_path(g, path, avoid=frozenset()):
    if len(set(path)) != len(path):
        return "path repeats a vertex"
    if any(v not in g for v in path):
        return "path leaves the graph"
    if set(path) & avoid:
        return "path meets the modulator"
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            return f"{a}-{b} is not an edge"
    return None


def _is_tidy(g, x):
    rest = g.vertex_set() - x
    return tw_at_most_2(g, rest) and all(tw_at_most_2(g, rest | {v}) for v in x)


# frequent path neighbour


def _cert_holds(g, t, x_mod, subject, cert, v2, x):
    """Does cert show `subject` limit-1 for (G - v2x, t)?"""
    if cert is None or not subject <= cert.subject or cert.m > 1:
        return False
    if cert.derivation == "small":
        return len(cert.subject) <= 1
    if cert.derivation == "witnesses":
        h = g.copy()
        h.remove_edge(v2, x)
        return check_certificate(h, t, cert)
    if cert.derivation == "component-separator":
        # trusted by construction of Y; only its shape is re-checked here
        xs, ys = cert.basis
        if xs != x_mod or ys & xs or v2 in ys:
            return False
        piece = component_of(g, v2, g.vertex_set() - xs - ys)
        return cert.subject <= g.neighbourhood(piece) & xs
    return False


def frequent_path_neighbour_event(pi, x_mod, x, path, vs, cert):
    g = pi.graph
    xs = _modset(x_mod)
    path = list(path)
    vs = list(vs)
    if x not in xs:
        raise RejectedApplication(f"{x} is not in the modulator")
    if not _is_tidy(g, xs):
        raise RejectedApplication("the modulator is not tidy")
    bad = _check_path(g, path, xs)
    if bad:
        raise RejectedApplication(bad)
    if len(vs) != 4 or len(set(vs)) != 4:
        raise RejectedApplication("the rule needs four distinct path vertices")
    if any(v not in path for v in vs):
        raise RejectedApplication("a chosen vertex is not on the path")
    pos = [path.index(v) for v in vs]
    if pos != sorted(pos):
        raise RejectedApplication("chosen vertices are not in path order")
    if any(not g.has_edge(v, x) for v in vs):
        raise RejectedApplication(f"not every chosen vertex is a neighbour of {x}")
    v1, v2, _, v4 = vs
    piece = component_of(g, v2, g.vertex_set() - xs - {v1, v4})
    if not set(path[pos[0] + 1:pos[3]]) <= piece:
        raise InvariantViolation("open subpath split across components")
    subject = frozenset(g.neighbourhood(piece) & xs)
    if not _cert_holds(g, pi.t, xs, subject, cert, v2, x):
        raise RejectedApplication("interface is not certified limit-1")
    return ReductionEvent("frequent-path-neighbour", removed_edges=[(v2, x)],
                          info={"x": x, "modulator": sorted(xs), "path": path, "v": vs,
                                "interface": sorted(subject), "certificate": cert.derivation})


def apply_frequent_path_neighbour(pi, x_mod, x, path, vs, cert):
    ev = frequent_path_neighbour_event(pi, x_mod, x, path, vs, cert)
    return ReducedInstance(apply_event(pi, ev), [ev])


# ladder


def _non_crossing_holds(g, p, q, pi_idx, qi_idx):
    """{p_i, q_j} splits the rails' prefixes from their suffixes."""
    inside = set(p) | set(q)
    sep = {p[pi_idx], q[qi_idx]}
    before = set(p[:pi_idx]) | set(q[:qi_idx])
    after = set(p[pi_idx + 1:]) | set(q[qi_idx + 1:])
    if not before or not after:
        return True
    h = g.induced(inside)
    for a in before:
        reach = component_of(h, a, inside - sep)
        if reach & after:
            return False
    return True


def ladder_event(pi, p, q, rungs):
    g = pi.graph
    p, q = list(p), list(q)
    rungs = [tuple(r) for r in rungs]
    for path in (p, q):
        bad = _check_path(g, path)
        if bad:
            raise RejectedApplication(bad)
    if set(p) & set(q):
        raise RejectedApplication("rails share a vertex")
    for path in (p, q):
        idx = {v: i for i, v in enumerate(path)}
        for v in path:
            for w in g.neighbours(v):
                if w in idx and abs(idx[w] - idx[v]) > 1:
                    raise RejectedApplication(f"rail is not induced ({v}-{w})")
    if len(rungs) != LADDER_RUNGS:
        raise RejectedApplication(f"the rule needs exactly {LADDER_RUNGS} rungs")
    pp = [p.index(a) if a in p else -1 for a, _ in rungs]
    qq = [q.index(b) if b in q else -1 for _, b in rungs]
    if -1 in pp or -1 in qq:
        raise RejectedApplication("a rung endpoint is off its rail")
    if any(pp[i] >= pp[i + 1] or qq[i] >= qq[i + 1] for i in range(len(rungs) - 1)):
        raise RejectedApplication("rungs are not visited in order along both rails")
    if any(not g.has_edge(a, b) for a, b in rungs):
        raise RejectedApplication("a rung is not an edge")
    inside = set(p) | set(q)
    if not tw_at_most_2(g, inside):
        raise RejectedApplication("the ladder has treewidth above two")
    corners = {rungs[0][0], rungs[-1][0], rungs[0][1], rungs[-1][1]}
    leak = g.boundary(inside) - corners
    if leak:
        raise RejectedApplication(f"vertices {sorted(leak)} see outside the ladder")
    if checks_enabled():
        probe = g.induced(inside)
        for a, b in ((p[0], q[0]), (p[-1], q[-1])):
            probe.add_edge(a, b)
        if tw_at_most_2(probe):
            for a, b in rungs:
                if not _non_crossing_holds(g, p, q, p.index(a), q.index(b)):
                    raise InvariantViolation(f"rung {a}-{b} crosses another")
    mid = rungs[LADDER_RUNGS // 2]
    return ReductionEvent("ladder", removed_edges=[mid],
                          info={"p": p, "q": q, "rungs": [list(r) for r in rungs]})


def apply_ladder(pi, p, q, rungs):
    ev = ladder_event(pi, p, q, rungs)
    return ReducedInstance(apply_event(pi, ev), [ev])


# biconnected reduction instances


@dataclass
class BiconnectedReductionInstance:
    """(G, t, X, B, T*, chi, T) with L and U derived on demand.

    `td` is the smooth decomposition T* of G[B]; `nodes` is the working
    subtree T.
    """

    pi: object
    x: frozenset
    b: frozenset
    td: object
    nodes: frozenset
    _border: frozenset = field(default=None, repr=False)

    def __post_init__(self):
        self.x = frozenset(self.x)
        self.b = frozenset(self.b)
        self.nodes = frozenset(self.nodes)
        if self._border is None:
            self._border = frozenset(self.pi.graph.boundary(self.b))

    def t_neighbours(self, node):
        return [a for a in self.td.neighbours(node) if a in self.nodes]

    @property
    def leaves(self):
        return sorted(a for a in self.nodes if len(self.t_neighbours(a)) <= 1)

    def bag_union(self, nodes=None):
        out = set()
        for a in self.nodes if nodes is None else nodes:
            out |= self.td.bags[a]
        return out

    @property
    def u(self):
        return frozenset(self.bag_union() & self._border)

    def sub(self, nodes):
        return BiconnectedReductionInstance(self.pi, self.x, self.b, self.td, nodes, self._border)

    def violations(self):
        """Definition bullets that fail (empty list when the tuple is valid)."""
        out = []
        g = self.pi.graph
        if self.x & self.b:
            out.append("B meets X")
        if not is_biconnected(g, self.b):
            out.append("B is not biconnected")
        if not self.nodes:
            out.append("T is empty")
        elif not self.nodes <= set(self.td.nodes()):
            out.append("T is not inside T*")
        else:
            seen = {min(self.nodes)}
            todo = [min(self.nodes)]
            while todo:
                a = todo.pop()
                for c in self.t_neighbours(a):
                    if c not in seen:
                        seen.add(c)
                        todo.append(c)
            if seen != self.nodes:
                out.append("T is not connected")
            leaves = set(self.leaves)
            for a in self.nodes - leaves:
                if len(self.t_neighbours(a)) != self.td.degree(a):
                    out.append(f"inner node {a} lost a T* neighbour")
                    break
        return out

    def linear_order(self):
        """Nodes of a path-shaped T, starting at its smallest leaf."""
        leaves = self.leaves
        if len(leaves) != 2 and len(self.nodes) > 1:
            raise PreconditionViolation("T is not a path")
        order = [leaves[0]]
        prev = None
        while len(order) < len(self.nodes):
            nxt = [c for c in self.t_neighbours(order[-1]) if c != prev]
            prev = order[-1]
            order.append(nxt[0])
        return order


def _fpn_inside(bri, u, path, vs):
    """Frequent path neighbour with modulator X | {u} and interface {u}."""
    xs = bri.x | {u}
    return apply_frequent_path_neighbour(bri.pi, xs, u, path, vs, small_certificate({u}, 1))


def _bags(bri, order):
    return [bri.td.bags[a] for a in order]


def frequent_vertex_without_u(bri, order, u):
    """Seven bags all holding u and U within {u}: drop u·v4."""
    if len(order) != 7:
        raise PreconditionViolation("the core case needs exactly seven bags")
    bags = _bags(bri, order)
    if any(u not in bag for bag in bags):
        raise PreconditionViolation(f"{u} is missing from a bag")
    if not bri.sub(order).u <= {u}:
        raise PreconditionViolation("boundary vertices other than u")
    v = {}
    for i in range(6):
        shared = (bags[i] & bags[i + 1]) - {u}
        if len(shared) != 1:
            raise InvariantViolation("consecutive bags do not share u and one more vertex")
        (v[i + 2],) = shared
    path = [v[3], v[4], v[5], v[6]]
    return _fpn_inside(bri, u, path, path)


def frequent_vertex_with_u(bri, order, u):
    """Linear T with u in every bag and |T| >= 9|U| + 7."""
    bags = _bags(bri, order)
    if any(u not in bag for bag in bags):
        raise PreconditionViolation(f"{u} is missing from a bag")
    sub = bri.sub(order)
    uu = sub.u
    if len(order) < FREQUENT_U_FACTOR * len(uu) + FREQUENT_U_BASE:
        raise PreconditionViolation("linear stretch too short for its boundary")
    if uu <= {u}:
        return frequent_vertex_without_u(bri, order[:7], u)
    last = {}
    for i, bag in enumerate(bags):
        for w in bag & (uu - {u}):
            last[w] = i
    v = min(last, key=lambda w: (last[w], w))
    j = last[v] + 1  # 1-based index of b_v
    if j <= 9:
        return frequent_vertex_with_u(bri, order[j:], u)
    if set().union(*bags[:7]) & uu <= {u}:
        return frequent_vertex_without_u(bri, order[:7], u)
    raise InvariantViolation("no case of the frequent-vertex recursion applies")


def extract_parallel_paths(bri):
    """Two induced rails covering chi(T - L), for linear T with U empty."""
    if len(bri.nodes) < 3:
        raise PreconditionViolation("T needs at least three nodes")
    if len(bri.leaves) != 2:
        raise PreconditionViolation("T must have exactly two leaves")
    if bri.u:
        raise PreconditionViolation("U must be empty")
    g = bri.pi.graph
    order = bri.linear_order()
    bags = _bags(bri, order)
    first = bags[0] & bags[1]
    nxt = bags[1] & bags[2]
    if len(first) != 2 or len(nxt) != 2 or first == nxt:
        raise InvariantViolation("bag structure is not smooth around the first inner node")
    (p,) = first & nxt
    (q,) = first - {p}
    (r,) = nxt - {p}
    if not g.has_edge(q, r):
        raise InvariantViolation("single-step rails are not joined")
    rails = [[p], [q, r]]
    for k in range(2, len(order) - 1):
        ends = {rails[0][-1], rails[1][-1]}
        if bags[k - 1] & bags[k] != ends:
            raise InvariantViolation("rail ends do not match the separator")
        (r,) = bags[k] - ends
        out = bags[k] & bags[k + 1]
        if out == ends:
            raise InvariantViolation("inner bag with a private vertex")
        grow = 1 if rails[0][-1] in out else 0
        if not g.has_edge(rails[grow][-1], r):
            raise InvariantViolation("rail step is not an edge")
        rails[grow].append(r)
    pp, qq = rails
    if checks_enabled():
        inner = bri.bag_union(set(order[1:-1]))
        if set(pp) | set(qq) != inner or set(pp) & set(qq):
            raise InvariantViolation("rails do not partition chi(T - L)")
        for rail in (pp, qq):
            idx = {v: i for i, v in enumerate(rail)}
            for v in rail:
                if any(w in idx and abs(idx[w] - idx[v]) > 1 for w in g.neighbours(v)):
                    raise InvariantViolation("rail is not induced")
        if not {pp[0], qq[0]} <= bags[0] or not {pp[-1], qq[-1]} <= bags[-1]:
            raise InvariantViolation("rails do not end in the leaf bags")
    return pp, qq


def find_ladder(bri):
    """Linear T, U empty, |T| >= 86: a ladder or a vertex with four rungs."""
    if len(bri.nodes) < LONG_PATH_BASE:
        raise PreconditionViolation("T too short for the ladder search")
    g = bri.pi.graph
    pp, qq = extract_parallel_paths(bri)
    qset = set(qq)
    h_edges = [(a, b) for a in pp for b in g.neighbours(a) if b in qset]
    matching = maximal_matching(g, h_edges)
    pos = {v: i for i, v in enumerate(pp)}
    pos.update({v: i for i, v in enumerate(qq)})
    if len(matching) >= LADDER_RUNGS:
        pset = set(pp)
        rungs = sorted(((a, b) if a in pset else (b, a) for a, b in matching),
                       key=lambda e: pos[e[0]])
        if [pos[b] for _, b in rungs] != sorted(pos[b] for _, b in rungs):
            raise InvariantViolation("matched rungs cross")
        chosen = rungs[:LADDER_RUNGS - 1] + [rungs[-1]]
        (a0, b0), (a1, b1) = chosen[0], chosen[-1]
        return apply_ladder(bri.pi, pp[pos[a0]:pos[a1] + 1], qq[pos[b0]:pos[b1] + 1], chosen)
    h_nb = {}
    for a, b in h_edges:
        h_nb.setdefault(a, set()).add(b)
        h_nb.setdefault(b, set()).add(a)
    covered = sorted({v for e in matching for v in e})
    r = next((v for v in covered if len(h_nb.get(v, ())) >= 4), None)
    if r is None:
        raise InvariantViolation("small matching but no vertex with four rung-neighbours")
    rail = qq if r in set(pp) else pp
    hits = sorted(h_nb[r], key=lambda v: pos[v])[:4]
    path = rail[pos[hits[0]]:pos[hits[3]] + 1]
    return _fpn_inside(bri, r, path, hits)


def reduce_long_path(bri, order=None):
    """Linear T with |T| >= 118|U| + 86."""
    order = bri.linear_order() if order is None else list(order)
    sub = bri.sub(order)
    uu = sub.u
    if len(order) < LONG_PATH_PER_U * len(uu) + LONG_PATH_BASE:
        raise PreconditionViolation("linear stretch too short for its boundary")
    if not uu:
        return find_ladder(sub)
    bags = _bags(bri, order)
    last = {}
    for i, bag in enumerate(bags):
        for w in bag & uu:
            last[w] = i
    u = min(last, key=lambda w: (last[w], w))
    j = last[u] + 1
    if j <= _CUT:
        return reduce_long_path(bri, order[j:])
    head = set().union(*bags[:_PREFIX])
    if not head & uu:
        return find_ladder(bri.sub(order[:_PREFIX]))
    window = order[_PREFIX - 1:_CUT + 1]
    common = set.intersection(*(set(bri.td.bags[a]) for a in window))
    pick = sorted(common & head & uu) or sorted(common)
    if not pick:
        raise InvariantViolation("no vertex is shared by the whole window")
    wsub = bri.sub(window)
    if len(wsub.u) > 3:
        raise InvariantViolation("window carries more than three boundary vertices")
    return frequent_vertex_with_u(bri, window, pick[0])


def _rooted_at(bri, root):
    parent = {root: None}
    depth = {root: 0}
    todo = [root]
    for a in todo:
        for c in bri.t_neighbours(a):
            if c not in parent:
                parent[c] = a
                depth[c] = depth[a] + 1
                todo.append(c)
    return parent, depth


def reduce_big_tree(bri):
    """|T| >= 876|L| + 118|U| with at least two leaves."""
    err = PreconditionViolation
    while True:
        leaves = bri.leaves
        if len(leaves) < 2:
            raise err("T needs two leaves")
        if len(bri.nodes) < TREE_PER_LEAF * len(leaves) + LONG_PATH_PER_U * len(bri.u):
            raise err("T is too small for its leaves and boundary")
        err = InvariantViolation
        if len(leaves) == 2:
            return reduce_long_path(bri)
        parent, depth = _rooted_at(bri, leaves[0])
        branching = [a for a in bri.nodes if len(bri.t_neighbours(a)) > 2]
        b = min(branching, key=lambda a: (-depth[a], a))
        cut = set()
        for c in sorted(x for x in bri.t_neighbours(b) if parent.get(x) == b):
            arm = [b, c]
            while True:
                down = [x for x in bri.t_neighbours(arm[-1]) if x != arm[-2]]
                if not down:
                    break
                arm.append(down[0])
            sub = bri.sub(arm)
            if len(arm) >= LONG_PATH_PER_U * len(sub.u) + LONG_PATH_BASE:
                return reduce_long_path(sub)
            cut |= set(arm[1:])
        bri = bri.sub(bri.nodes - cut)


def check_biconnected_invariants(bri, tidy):
    """Boundary bound and the leaf-bag facts the recursion relies on."""
    g = bri.pi.graph
    border = bri.u
    if tidy and len(g.boundary(bri.b)) > 2 * len(bri.x):
        raise InvariantViolation("biconnected piece has more than 2|X| boundary vertices")
    if len(bri.td) < 2:
        return
    count = {}
    for a in bri.td.nodes():
        for v in bri.td.bags[a]:
            count[v] = count.get(v, 0) + 1
    for leaf in bri.leaves:
        private = {v for v in bri.td.bags[leaf] if count[v] == 1}
        if not private:
            raise InvariantViolation(f"leaf bag {leaf} has no private vertex")
        if not private <= border:
            raise InvariantViolation(f"private vertex of leaf bag {leaf} has no outside neighbour")


def reduce_biconnected(pi, x_mod, b):
    """Remove one edge of B by the frequent path neighbour or ladder rule.

    x_mod may be a plain set or a labelled modulator. Tidiness is needed by
    the frequent path neighbour rule and the boundary bound; the ladder
    route works without it.
    """
    g = pi.graph
    xs = _modset(x_mod)
    b = frozenset(b)
    if not b <= g.vertex_set() or b & xs:
        raise PreconditionViolation("B must be a vertex set of G - X")
    if len(b) < BICONNECTED_FACTOR * len(xs) + 2:
        raise PreconditionViolation(f"B has {len(b)} vertices, below 1988|X|+2")
    if not is_biconnected(g, b):
        raise PreconditionViolation("B is not biconnected")
    if not tw_at_most_2(g, g.vertex_set() - xs):
        raise PreconditionViolation("X is not a modulator")
    if g.min_degree() < 3 or pi.t == 0 or (checks_enabled() and is_trivial(pi)):
        raise PreconditionViolation("the instance is trivial")
    tidy = getattr(x_mod, "tidy", None)
    if tidy is None:
        tidy = _is_tidy(g, xs)
    h = g.induced(b)
    td = smooth(h, decompose(h))
    bri = BiconnectedReductionInstance(pi, xs, b, td, frozenset(td.nodes()))
    check_biconnected_invariants(bri, tidy)
    res = reduce_big_tree(bri)
    (ev,) = res.events
    for e in ev.removed_edges:
        if set(e) <= xs:
            raise InvariantViolation("an edge inside G[X] was removed")
        if not set(e) & b:
            raise InvariantViolation("removed edge does not touch B")
    return res
