"""Treewidth-2 machinery: recognition with a certificate either way, tree
decomposition validation, smooth decompositions, K4 minor models and
gluing decompositions along clique separators.

Recognition uses low-degree elimination: a graph has treewidth at most two
exactly when it can be emptied by deleting vertices of degree at most one
and bypassing vertices of degree two (joining their two neighbours).
"""

import heapq
from dataclasses import dataclass

from .errors import PreconditionViolation, InvariantViolation, checks_enabled
from .graph import is_connected, components


class TreeDecomposition:
    """A tree of bags. Node ids are ints; bags are frozensets of vertex ids.

    Empty bags are allowed and kept.
    """

    def __init__(self, bags=None, edges=()):
        self.bags = {}
        self._adj = {}
        for node, bag in (bags or {}).items():
            self.add_node(bag, node)
        for a, b in edges:
            self.add_edge(a, b)

    def add_node(self, bag, node=None):
        if node is None:
            node = max(self.bags, default=-1) + 1
        if node in self.bags:
            raise PreconditionViolation(f"node {node} already present")
        self.bags[node] = frozenset(bag)
        self._adj[node] = set()
        return node

    def add_edge(self, a, b):
        if a == b or a not in self.bags or b not in self.bags:
            raise PreconditionViolation(f"bad tree edge {a}-{b}")
        self._adj[a].add(b)
        self._adj[b].add(a)

    def remove_node(self, node):
        for other in self._adj.pop(node):
            self._adj[other].discard(node)
        del self.bags[node]

    def nodes(self):
        return sorted(self.bags)

    def neighbours(self, node):
        return sorted(self._adj[node])

    def degree(self, node):
        return len(self._adj[node])

    def tree_edges(self):
        return sorted((a, b) for a, ns in self._adj.items() for b in ns if a < b)

    @property
    def width(self):
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def vertex_union(self):
        out = set()
        for b in self.bags.values():
            out |= b
        return out

    def occurrences(self, v):
        """χ⁻¹(v): the nodes whose bag contains v."""
        return sorted(n for n, b in self.bags.items() if v in b)

    def copy(self):
        return type(self)(dict(self.bags), self.tree_edges())

    def __len__(self):
        return len(self.bags)

    def __repr__(self):
        return f"{type(self).__name__}(nodes={len(self.bags)}, width={self.width})"


class SmoothDecomposition(TreeDecomposition):
    """Width-2 decomposition whose bags all have 3 vertices and whose adjacent
    bags share exactly 2."""


@dataclass(frozen=True)
class K4Witness:
    """Four disjoint connected vertex sets, pairwise joined by an edge."""

    parts: tuple

    def vertices(self):
        return frozenset().union(*self.parts)


@dataclass(frozen=True)
class Violation:
    prop: str
    detail: str

    def __str__(self):
        return f"{self.prop}: {self.detail}"


# elimination


def _adjacency(g, within=None):
    if within is None:
        return {v: set(ns) for v, ns in g._adj.items()}
    within = set(within)
    return {v: g._adj[v] & within for v in within}


def _eliminate(adj, track_branches=False):
    """Destructively eliminate low-degree vertices from adj.

    Returns (order, branches). `order` lists (v, neighbours at elimination).
    Whatever is left in adj is the stalled core (all degrees >= 3). When
    tracking, branches[v] is the set of original vertices contracted into
    core vertex v, which keeps the core a minor of the input.
    """
    branches = {v: {v} for v in adj} if track_branches else None
    # vertices of degree <= 1 go first, so forests come out with width <= 1
    heap = [(len(ns) == 2, v) for v, ns in adj.items() if len(ns) <= 2]
    heapq.heapify(heap)
    order = []
    while heap:
        _, v = heapq.heappop(heap)
        ns = adj.get(v)
        if ns is None or len(ns) > 2:
            continue
        del adj[v]
        for w in ns:
            adj[w].discard(v)
        if len(ns) == 2:
            a, b = sorted(ns)
            adj[a].add(b)
            adj[b].add(a)
            if track_branches:
                branches[a] |= branches.pop(v)
        elif track_branches:
            branches.pop(v)
        order.append((v, frozenset(ns)))
        for w in ns:
            if len(adj[w]) <= 2:
                heapq.heappush(heap, (len(adj[w]) == 2, w))
    return order, branches


def tw_at_most_2(g, within=None):
    """Boolean treewidth test on g or on g[within]."""
    adj = _adjacency(g, within)
    _eliminate(adj)
    return not adj


def _edges_tw_at_most_2(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    _eliminate(adj)
    return not adj


def _decomposition_from_order(order):
    td = TreeDecomposition()
    pos = {v: i for i, (v, _) in enumerate(order)}
    for i, (v, ns) in enumerate(order):
        td.add_node(ns | {v}, i)
    roots = []
    for i, (v, ns) in enumerate(order):
        if ns:
            td.add_edge(i, min(pos[w] for w in ns))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        td.add_edge(a, b)
    return td


def _minimal_obstruction(edges):
    """Shrink an edge list with treewidth > 2 to an edge-minimal one.

    Chunks of edges are dropped greedily while the remainder keeps
    treewidth > 2; the final single-edge pass makes the result minimal,
    hence a subdivision of K4.
    """
    edges = list(edges)
    chunk = max(1, len(edges) // 2)
    while True:
        i = 0
        while i < len(edges):
            trial = edges[:i] + edges[i + chunk:]
            if not _edges_tw_at_most_2(trial):
                edges = trial
            else:
                i += chunk
        if chunk == 1:
            return edges
        chunk = max(1, chunk // 2)


def _witness_from_subdivision(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    branch = sorted(v for v, ns in adj.items() if len(ns) == 3)
    if len(branch) != 4 or any(len(ns) not in (2, 3) for ns in adj.values()):
        raise InvariantViolation("minimal obstruction is not a K4 subdivision")
    rank = {v: i for i, v in enumerate(branch)}
    parts = [{v} for v in branch]
    for b in branch:
        for first in sorted(adj[b]):
            path = []
            prev, cur = b, first
            while cur not in rank:
                path.append(cur)
                prev, cur = cur, next(w for w in adj[cur] if w != prev)
            owner = min(rank[b], rank[cur])
            parts[owner].update(path)
    return K4Witness(tuple(frozenset(p) for p in parts))


def find_k4_witness(g, within=None):
    """A K4 model in g (or g[within]), or None when the treewidth is <= 2."""
    h = g if within is None else g.induced(within)
    if tw_at_most_2(h):
        return None
    witness = _witness_from_subdivision(_minimal_obstruction(h.edges()))
    if not verify_k4_model(h, witness):
        raise InvariantViolation("extracted K4 model failed verification")
    return witness


def try_width2(g):
    """A width-<=2 tree decomposition of g, or a K4Witness if none exists."""
    adj = _adjacency(g)
    order, _ = _eliminate(adj)
    if adj:
        return find_k4_witness(g)
    td = _decomposition_from_order(order)
    if checks_enabled():
        bad = validate(g, td)
        if bad is not None:
            raise InvariantViolation(f"elimination produced an invalid decomposition: {bad}")
    return td


def decompose(g):
    """Like try_width2 but raises when the treewidth exceeds two."""
    res = try_width2(g)
    if isinstance(res, K4Witness):
        raise PreconditionViolation("graph has treewidth greater than two")
    return res


# checking


def validate(g, td):
    """None when td is a width-<=2 tree decomposition of g, else the first
    violated property (tree, T1, T2, T3, width)."""
    nodes = td.nodes()
    if nodes:
        seen = {nodes[0]}
        todo = [nodes[0]]
        while todo:
            a = todo.pop()
            for b in td.neighbours(a):
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        if len(seen) != len(nodes) or len(td.tree_edges()) != len(nodes) - 1:
            return Violation("tree", "node graph is not a tree")
    covered = td.vertex_union()
    for v in g.vertices():
        if v not in covered:
            return Violation("T1", f"vertex {v} is in no bag")
    extra = covered - g.vertex_set()
    if extra:
        return Violation("T1", f"bags mention non-vertices {sorted(extra)}")
    occ = {}
    for node, bag in td.bags.items():
        for v in bag:
            occ.setdefault(v, set()).add(node)
    for u, v in g.edges():
        if not occ[u] & occ[v]:
            return Violation("T2", f"edge {u}-{v} is in no bag")
    for v in sorted(occ):
        where = occ[v]
        start = min(where)
        seen = {start}
        todo = [start]
        while todo:
            a = todo.pop()
            for b in td.neighbours(a):
                if b in where and b not in seen:
                    seen.add(b)
                    todo.append(b)
        if seen != where:
            return Violation("T3", f"occurrences of vertex {v} are disconnected")
    for node in nodes:
        if len(td.bags[node]) > 3:
            return Violation("width", f"bag {node} has {len(td.bags[node])} vertices")
    return None


def is_smooth(td):
    if any(len(b) != 3 for b in td.bags.values()):
        return False
    return all(len(td.bags[a] & td.bags[b]) == 2 for a, b in td.tree_edges())


def verify_k4_model(g, w):
    parts = [set(p) for p in w.parts]
    if len(parts) != 4 or any(not p for p in parts):
        return False
    allv = set()
    for p in parts:
        if not p <= g.vertex_set() or allv & p:
            return False
        allv |= p
        if not is_connected(g, p):
            return False
    for i in range(4):
        touch = g.neighbourhood(parts[i])
        for j in range(i + 1, 4):
            if not touch & parts[j]:
                return False
    return True


# smooth decompositions


def _perfect_order(td):
    """Elimination order of the bag-clique completion, read off td by peeling
    leaf bags. Each entry is (v, its remaining bag-mates)."""
    bags = {n: set(b) for n, b in td.bags.items()}
    adj = {n: set(td.neighbours(n)) for n in td.nodes()}
    count = {}
    for b in bags.values():
        for v in b:
            count[v] = count.get(v, 0) + 1
    order = []
    heap = [n for n in adj if len(adj[n]) <= 1]
    heapq.heapify(heap)
    while heap:
        n = heapq.heappop(heap)
        if n not in adj or len(adj[n]) > 1:
            continue
        parent = next(iter(adj[n]), None)
        keep = bags[parent] if parent is not None else set()
        for v in sorted(bags[n] - keep):
            if count[v] == 1:
                mates = bags[n] - {v}
                order.append((v, frozenset(mates)))
                bags[n].discard(v)
                count[v] = 0
        if parent is not None:
            for v in bags[n]:
                count[v] -= 1
            adj[parent].discard(n)
            if len(adj[parent]) <= 1:
                heapq.heappush(heap, parent)
        else:
            for v in sorted(bags[n]):
                order.append((v, frozenset(bags[n] - {v} - {u for u, _ in order})))
        del adj[n]
        del bags[n]
    return order


def smooth(g, td):
    """A smooth width-2 decomposition of g with exactly |V(g)| - 2 nodes.

    Built as the decomposition of a 2-tree containing g: vertices are added
    in reverse elimination order, each one glued onto a bag holding its (at
    most two, padded if fewer) earlier neighbours.
    """
    if g.n < 3:
        raise PreconditionViolation("smooth decompositions need at least 3 vertices")
    bad = validate(g, td)
    if bad is not None:
        raise PreconditionViolation(f"input decomposition invalid: {bad}")
    order = _perfect_order(td)
    if sorted(v for v, _ in order) != g.vertices():
        raise InvariantViolation("leaf peeling did not eliminate every vertex")
    rev = order[::-1]
    out = SmoothDecomposition()
    first = frozenset(v for v, _ in rev[:3])
    out.add_node(first, 0)
    holder = {}
    for v in first:
        holder[v] = 0
    pair_node = {}
    for a in first:
        for b in first:
            if a < b:
                pair_node[(a, b)] = 0
    mates = {}
    for v in first:
        mates[v] = set(first - {v})
    for v, ns in rev[3:]:
        ns = set(ns)
        if len(ns) == 2:
            a, b = sorted(ns)
        elif len(ns) == 1:
            (a,) = ns
            b = min(mates[a])
            a, b = min(a, b), max(a, b)
        else:
            a, b = min(pair_node)
        node = pair_node.get((a, b))
        if node is None:
            raise InvariantViolation(f"no bag holds the pair {a},{b}")
        new = out.add_node({v, a, b})
        out.add_edge(node, new)
        mates[v] = {a, b}
        mates[a].add(v)
        mates[b].add(v)
        pair_node[(min(v, a), max(v, a))] = new
        pair_node[(min(v, b), max(v, b))] = new
    if checks_enabled():
        bad = validate(g, out)
        if bad is not None or not is_smooth(out) or len(out) != g.n - 2:
            raise InvariantViolation(f"smooth construction failed: {bad}")
    return out


# gluing along cliques


def combine_around_clique(g, u, parts):
    """Glue decompositions of g[u] and of every g[N[C]] (C a component of
    g - u) into one decomposition of g, linking each part at a bag that
    holds its clique interface."""
    u = set(u)
    by_union = {}
    for td in parts:
        if td.width > 2:
            raise PreconditionViolation("a part has width greater than two")
        by_union.setdefault(frozenset(td.vertex_union()), td)
    comps = components(g, g.vertex_set() - u)
    base = by_union.get(frozenset(u))
    if base is None:
        if u:
            raise PreconditionViolation("no part decomposes g[u]")
        base = TreeDecomposition()
    out = TreeDecomposition()
    remap = {}
    for node in base.nodes():
        remap[node] = out.add_node(base.bags[node])
    for a, b in base.tree_edges():
        out.add_edge(remap[a], remap[b])
    for comp in comps:
        iface = g.neighbourhood(comp)
        if not g.is_clique(iface):
            raise PreconditionViolation(f"interface {sorted(iface)} is not a clique")
        part = by_union.get(frozenset(comp | iface))
        if part is None:
            raise PreconditionViolation(f"no part decomposes the component at {min(comp)}")
        local = {}
        for node in part.nodes():
            local[node] = out.add_node(part.bags[node])
        for a, b in part.tree_edges():
            out.add_edge(local[a], local[b])
        inner = next((local[n] for n in part.nodes() if iface <= part.bags[n]), None)
        if inner is None:
            raise PreconditionViolation("part has no bag containing its interface")
        if out.nodes() and len(local) < len(out):
            outer = next((n for n in out.nodes() if n not in local.values()
                          and iface <= out.bags[n]), None)
            if outer is None:
                raise PreconditionViolation("no bag of g[u] contains the interface")
            out.add_edge(outer, inner)
    bad = validate(g, out)
    if bad is not None:
        raise PreconditionViolation(f"combined decomposition invalid: {bad}")
    return out
