"""Simple undirected graphs with stable vertex ids, plus the structural
primitives the reductions are built from: components, contraction,
vertex-disjoint paths, separators, block-cut trees, spanning trees and
matchings.

Vertex ids are non-negative ints handed out by a monotone allocator, so an
id is never reused once deleted. Every set-valued result that has an order
is sorted by smallest vertex id.
"""

from collections import deque
from dataclasses import dataclass, field

from .errors import InvariantViolation, PreconditionViolation, UnsupportedInput


class Graph:
    """Simple undirected graph keyed by integer vertex ids."""

    __slots__ = ("_adj", "_next_id")

    def __init__(self, vertices=(), edges=()):
        self._adj = {}
        self._next_id = 0
        edges = list(edges)
        ids = set(vertices)
        for u, v in edges:
            ids.add(u)
            ids.add(v)
        for v in sorted(ids):
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    # construction and mutation

    def add_vertex(self, v=None):
        """Add a vertex and return its id.

        Without an argument the next fresh id is used. An explicit id must be
        at least every id handed out so far, which keeps ids from being
        recycled.
        """
        if v is None:
            v = self._next_id
        if not isinstance(v, int) or v < 0:
            raise PreconditionViolation(f"vertex id must be a non-negative int, got {v!r}")
        if v < self._next_id:
            raise PreconditionViolation(f"vertex id {v} was already allocated")
        self._adj[v] = set()
        self._next_id = v + 1
        return v

    def add_edge(self, u, v):
        """Add edge uv. Returns False when it was already present."""
        if u == v:
            raise PreconditionViolation(f"self-loop on {u}")
        if u not in self._adj or v not in self._adj:
            raise PreconditionViolation(f"edge {u}-{v} has an endpoint that is not a vertex")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        return True

    def remove_edge(self, u, v):
        if not self.has_edge(u, v):
            raise PreconditionViolation(f"no edge {u}-{v}")
        self._adj[u].discard(v)
        self._adj[v].discard(u)

    def remove_vertex(self, v):
        if v not in self._adj:
            raise PreconditionViolation(f"no vertex {v}")
        for w in self._adj.pop(v):
            self._adj[w].discard(v)

    def remove_vertices(self, vs):
        for v in list(vs):
            self.remove_vertex(v)

    def copy(self):
        h = Graph()
        h._adj = {v: set(ns) for v, ns in self._adj.items()}
        h._next_id = self._next_id
        return h

    def induced(self, vs):
        """The subgraph induced by vs; shares this graph's id allocator state."""
        vs = set(vs)
        missing = vs - self._adj.keys()
        if missing:
            raise PreconditionViolation(f"not vertices: {sorted(missing)}")
        h = Graph()
        h._adj = {v: self._adj[v] & vs for v in vs}
        h._next_id = self._next_id
        return h

    def without(self, vs):
        """G - vs."""
        vs = set(vs)
        return self.induced(self._adj.keys() - vs)

    # queries

    @property
    def n(self):
        return len(self._adj)

    @property
    def m(self):
        return sum(len(ns) for ns in self._adj.values()) // 2

    @property
    def next_id(self):
        return self._next_id

    def __len__(self):
        return len(self._adj)

    def __contains__(self, v):
        return v in self._adj

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def vertices(self):
        return sorted(self._adj)

    def vertex_set(self):
        return frozenset(self._adj)

    def edges(self):
        """All edges as (u, v) with u < v, sorted."""
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    def neighbours(self, v):
        return frozenset(self._adj[v])

    def degree(self, v):
        return len(self._adj[v])

    def min_degree(self):
        return min((len(ns) for ns in self._adj.values()), default=0)

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def neighbourhood(self, vs):
        """N(S): vertices outside S adjacent to S."""
        vs = set(vs)
        out = set()
        for v in vs:
            out |= self._adj[v]
        return out - vs

    def closed_neighbourhood(self, vs):
        return self.neighbourhood(vs) | set(vs)

    def boundary(self, vs):
        """vertices of S with a neighbour outside S."""
        vs = set(vs)
        return {v for v in vs if self._adj[v] - vs}

    def is_clique(self, vs):
        vs = sorted(vs)
        return all(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def normalise_edge(u, v):
    return (u, v) if u < v else (v, u)


# connectivity


def _component_from(adj, start, allowed):
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w in allowed and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def components(g, within=None):
    """Connected components of g (or of g[within]), ordered by smallest vertex."""
    allowed = set(g._adj) if within is None else set(within)
    out = []
    seen = set()
    for v in sorted(allowed):
        if v in seen:
            continue
        comp = _component_from(g._adj, v, allowed)
        seen |= comp
        out.append(comp)
    return out


def component_of(g, v, within=None):
    allowed = set(g._adj) if within is None else set(within)
    return _component_from(g._adj, v, allowed)


def is_connected(g, within=None):
    allowed = set(g._adj) if within is None else set(within)
    if not allowed:
        return True
    start = min(allowed)
    return len(_component_from(g._adj, start, allowed)) == len(allowed)


def separates(g, sep, a, b):
    """True iff every a-b path in g meets sep (a, b outside sep)."""
    sep = set(sep)
    if a in sep or b in sep:
        raise PreconditionViolation("endpoints may not lie in the separator")
    allowed = set(g._adj) - sep
    return b not in _component_from(g._adj, a, allowed)


def shortest_path(g, s, t, within=None):
    """A shortest s-t path as a vertex list, or None. Neighbours are scanned
    in id order so the result is deterministic."""
    allowed = set(g._adj) if within is None else set(within)
    if s not in allowed or t not in allowed:
        return None
    parent = {s: None}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            path = []
            while v is not None:
                path.append(v)
                v = parent[v]
            return path[::-1]
        for w in sorted(g._adj[v]):
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def contract_into(g, part, keep):
    """Collapse the connected vertex set `part` onto `keep`."""
    part = set(part)
    if keep not in part:
        raise PreconditionViolation(f"{keep} is not in the contracted part")
    if not part <= g._adj.keys():
        raise PreconditionViolation("contracted part contains non-vertices")
    if not is_connected(g, part):
        raise PreconditionViolation("contracted part is not connected")
    h = g.copy()
    outside = g.neighbourhood(part)
    for v in part - {keep}:
        h.remove_vertex(v)
    for w in outside:
        h.add_edge(keep, w)
    return h


# vertex-disjoint paths


def _augment_paths(g, x, y, limit=None):
    """Unit vertex-capacity flow from x to y on the split graph.

    Nodes are (v, 0) for the in-copy and (v, 1) for the out-copy. Returns the
    set of saturated arcs and the number of augmenting paths found.
    """
    adj = g._adj
    flow = set()
    count = 0
    source, sink = (x, 1), (y, 0)
    while limit is None or count < limit:
        parent = {source: None}
        queue = deque([source])
        found = False
        while queue and not found:
            node = queue.popleft()
            v, side = node
            if side == 1:
                steps = [(w, 0) for w in sorted(adj[v])
                         if w != x and (node, (w, 0)) not in flow]
                if v != x and (((v, 0), node) in flow):
                    steps.append((v, 0))
            else:
                steps = []
                if v != y and ((node, (v, 1)) not in flow):
                    steps.append((v, 1))
                steps.extend((u, 1) for u in sorted(adj[v]) if ((u, 1), node) in flow)
            for nxt in steps:
                if nxt in parent:
                    continue
                parent[nxt] = node
                if nxt == sink:
                    found = True
                    break
                queue.append(nxt)
        if not found:
            return flow, count, parent
        node = sink
        while parent[node] is not None:
            prev = parent[node]
            if (node, prev) in flow:
                flow.discard((node, prev))
            else:
                flow.add((prev, node))
            node = prev
        count += 1
    return flow, count, None


def _check_pair(g, x, y):
    if x == y:
        raise PreconditionViolation("endpoints must differ")
    if x not in g or y not in g:
        raise PreconditionViolation("endpoints must be vertices")
    if g.has_edge(x, y):
        raise UnsupportedInput(f"{x} and {y} are adjacent")


def max_disjoint_paths(g, x, y, limit=None):
    """A maximum set of internally vertex-disjoint x-y paths.

    With `limit` the search stops once that many paths are found.
    """
    _check_pair(g, x, y)
    flow, count, _ = _augment_paths(g, x, y, limit)
    nxt = {}
    for a, b in flow:
        nxt.setdefault(a, []).append(b)
    paths = []
    for first in sorted(nxt.get((x, 1), [])):
        path = [x]
        node = first
        while node != (y, 0):
            v, side = node
            if side == 0:
                path.append(v)
            node = nxt[node][0]
        path.append(y)
        paths.append(path)
    return sorted(paths)


def count_disjoint_paths(g, x, y, limit=None):
    _check_pair(g, x, y)
    return _augment_paths(g, x, y, limit)[1]


def min_separator(g, x, y):
    """A minimum vertex set separating non-adjacent x and y."""
    _check_pair(g, x, y)
    flow, _, _ = _augment_paths(g, x, y)
    # residual search with uncapacitated edge arcs, so the cut is made of
    # vertex arcs only
    adj = g._adj
    start = (x, 1)
    reach = {start}
    todo = [start]
    while todo:
        v, side = todo.pop()
        if side == 1:
            steps = [(w, 0) for w in adj[v] if w != x]
            if v != x and ((v, 0), (v, 1)) in flow:
                steps.append((v, 0))
        else:
            steps = [(u, 1) for u in adj[v] if ((u, 1), (v, 0)) in flow]
            if v != y and ((v, 0), (v, 1)) not in flow:
                steps.append((v, 1))
        for nxt in steps:
            if nxt not in reach:
                reach.add(nxt)
                todo.append(nxt)
    if (y, 0) in reach:
        raise InvariantViolation("residual search reached the sink after a maximum flow")
    return {v for v in adj if v not in (x, y) and (v, 0) in reach and (v, 1) not in reach}


# block-cut trees


def _blocks(g):
    adj = g._adj
    disc = {}
    low = {}
    blocks = []
    counter = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        if not adj[root]:
            blocks.append({root})
            continue
        stack = [(root, None, iter(sorted(adj[root])))]
        edge_stack = []
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(sorted(adj[w]))))
                    descended = True
                    break
                if w != parent and disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    edge_stack.append((v, w))
            if descended:
                continue
            stack.pop()
            if parent is None:
                continue
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                block = set()
                while True:
                    e = edge_stack.pop()
                    block.update(e)
                    if e == (parent, v):
                        break
                blocks.append(block)
    return blocks


@dataclass
class BlockCutTree:
    """Blocks and articulations of a connected graph.

    Tree nodes are ("B", i) for blocks[i] and ("A", v) for articulation v.
    """

    blocks: list
    articulations: list
    tree_edges: list = field(default_factory=list)

    def __post_init__(self):
        arts = set(self.articulations)
        self._block_arts = [sorted(b & arts) for b in self.blocks]
        self._art_blocks = {a: [] for a in self.articulations}
        for i, arts_in in enumerate(self._block_arts):
            for a in arts_in:
                self._art_blocks[a].append(i)

    def block_articulations(self, i):
        return list(self._block_arts[i])

    def articulation_blocks(self, a):
        return list(self._art_blocks[a])

    def nodes(self):
        return [("B", i) for i in range(len(self.blocks))] + [("A", a) for a in self.articulations]

    def neighbours(self, node):
        kind, key = node
        if kind == "B":
            return [("A", a) for a in self._block_arts[key]]
        return [("B", i) for i in self._art_blocks[key]]

    def degree(self, node):
        return len(self.neighbours(node))

    def leaf_blocks(self):
        """(block index, articulation) for every block with exactly one tree neighbour."""
        return [(i, arts[0]) for i, arts in enumerate(self._block_arts) if len(arts) == 1]

    def block_of_vertex(self, v):
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_cut_tree(g):
    if g.n == 0:
        raise PreconditionViolation("block-cut tree of the empty graph")
    if not is_connected(g):
        raise PreconditionViolation("block-cut tree needs a connected graph")
    blocks = sorted((frozenset(b) for b in _blocks(g)), key=min)
    seen = {}
    for b in blocks:
        for v in b:
            seen[v] = seen.get(v, 0) + 1
    arts = sorted(v for v, c in seen.items() if c > 1)
    edges = sorted((a, i) for i, b in enumerate(blocks) for a in arts if a in b)
    return BlockCutTree(blocks, arts, edges)


def is_biconnected(g, within=None):
    """Connected, at least two vertices, and no articulation vertex."""
    h = g if within is None else g.induced(within)
    if h.n < 2 or not is_connected(h):
        return False
    return len(_blocks(h)) == 1


# spanning trees and matchings


def spanning_tree(g):
    """BFS spanning tree from the smallest vertex, neighbours in id order."""
    if not is_connected(g):
        raise PreconditionViolation("spanning tree needs a connected graph")
    if g.n == 0:
        return []
    root = min(g._adj)
    seen = {root}
    queue = deque([root])
    tree = []
    while queue:
        v = queue.popleft()
        for w in sorted(g._adj[v]):
            if w not in seen:
                seen.add(w)
                tree.append(normalise_edge(v, w))
                queue.append(w)
    return sorted(tree)


def maximal_matching(g, edges=None):
    """Greedy matching over the edges in sorted order."""
    used = set()
    matching = []
    for u, v in (g.edges() if edges is None else sorted(normalise_edge(*e) for e in edges)):
        if u not in used and v not in used:
            used.add(u)
            used.add(v)
            matching.append((u, v))
    return matching


def articulation_points(g, within=None):
    """Vertices lying in two or more blocks of g (or of g[within])."""
    h = g if within is None else g.induced(within)
    seen = set()
    out = set()
    for b in _blocks(h):
        out |= b & seen
        seen |= b
    return out
