"""Problem instances, reduction events and the trivial-instance rules.

Every rule in the package produces a ReductionEvent first and then applies
it with `apply_event`, so a trace of events always replays to the same
graph.
"""

import heapq
from dataclasses import dataclass, field
from itertools import combinations

from .errors import PreconditionViolation, RejectedApplication, InvariantViolation
from .graph import Graph, components, is_connected, articulation_points, normalise_edge
from .tw2 import tw_at_most_2

RULES = (
    "solution-is-known",
    "no-existing-solution",
    "contract-component",
    "remove-limit-0-subset",
    "add-necessary-edge",
    "reduce-number-of-components",
    "frequent-path-neighbour",
    "ladder",
    "contract-leaf-block",
    "contract-neighbourless-blocks",
)


class ProblemInstance:
    """A graph and a deletion budget t."""

    __slots__ = ("graph", "t")

    def __init__(self, graph, t):
        if t < 0:
            raise PreconditionViolation(f"budget must be non-negative, got {t}")
        self.graph = graph
        self.t = t

    def copy(self):
        return ProblemInstance(self.graph.copy(), self.t)

    def __eq__(self, other):
        return isinstance(other, ProblemInstance) and self.t == other.t and self.graph == other.graph

    def __repr__(self):
        return f"ProblemInstance(n={self.graph.n}, m={self.graph.m}, t={self.t})"


@dataclass
class ReductionEvent:
    rule: str
    removed_vertices: list = field(default_factory=list)
    removed_edges: list = field(default_factory=list)
    added_edges: list = field(default_factory=list)
    t_delta: int = 0
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.rule not in RULES:
            raise PreconditionViolation(f"unknown rule {self.rule!r}")
        if self.t_delta > 0:
            raise PreconditionViolation("a reduction never raises the budget")
        self.removed_vertices = sorted(self.removed_vertices)
        self.removed_edges = sorted(normalise_edge(*e) for e in self.removed_edges)
        self.added_edges = sorted(normalise_edge(*e) for e in self.added_edges)

    def as_dict(self):
        return {
            "rule": self.rule,
            "removed_vertices": list(self.removed_vertices),
            "removed_edges": [list(e) for e in self.removed_edges],
            "added_edges": [list(e) for e in self.added_edges],
            "t_delta": self.t_delta,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["rule"], d["removed_vertices"], [tuple(e) for e in d["removed_edges"]],
                   [tuple(e) for e in d["added_edges"]], d["t_delta"])


def apply_event_inplace(pi, ev):
    """Remove edges, then vertices, then add edges (creating any endpoint
    that does not exist yet), then shift t."""
    g = pi.graph
    for u, v in ev.removed_edges:
        if not g.has_edge(u, v):
            raise PreconditionViolation(f"event removes missing edge {u}-{v}")
        g.remove_edge(u, v)
    for v in ev.removed_vertices:
        if v not in g:
            raise PreconditionViolation(f"event removes missing vertex {v}")
        g.remove_vertex(v)
    for u, v in ev.added_edges:
        for w in (u, v):
            if w not in g:
                g.add_vertex(w)
        if not g.add_edge(u, v):
            raise PreconditionViolation(f"event adds existing edge {u}-{v}")
    if pi.t + ev.t_delta < 0:
        raise PreconditionViolation("event drives the budget negative")
    pi.t += ev.t_delta
    return pi


def apply_event(pi, ev):
    return apply_event_inplace(pi.copy(), ev)


def replay(pi, events):
    out = pi.copy()
    for ev in events:
        apply_event_inplace(out, ev)
    return out


# solutions


def verify_solution(pi, s):
    s = set(s)
    if not s <= pi.graph.vertex_set():
        raise PreconditionViolation("candidate solution contains non-vertices")
    return len(s) <= pi.t and tw_at_most_2(pi.graph, pi.graph.vertex_set() - s)


def is_modulator(g, x):
    return tw_at_most_2(g, g.vertex_set() - set(x))


# the three trivial rules


def solution_known_event(pi, s=frozenset()):
    if not verify_solution(pi, s):
        raise RejectedApplication("the supplied set is not a solution")
    return ReductionEvent("solution-is-known", removed_vertices=pi.graph.vertices(),
                          info={"solution": sorted(s)})


def no_solution_event(pi):
    """Replace (G, t) by (K4, 0). Only call when (G, t) is known to be a no-instance."""
    g = pi.graph
    fresh = list(range(g.next_id, g.next_id + 4))
    return ReductionEvent("no-existing-solution", removed_vertices=g.vertices(),
                          added_edges=list(combinations(fresh, 2)), t_delta=-pi.t)


def contract_component_ok(g, h):
    """The contract-component condition for a vertex set h."""
    h = set(h)
    if not h or not h <= g.vertex_set() or not is_connected(g, h):
        return False
    nb = g.neighbourhood(h)
    if len(nb) > 2:
        return False
    if len(nb) == 2:
        a, b = sorted(nb)
        if not g.has_edge(a, b):
            probe = g.induced(h | nb)
            probe.add_edge(a, b)
            return tw_at_most_2(probe)
    return tw_at_most_2(g, h | nb)


def contract_component_event(g, h):
    h = set(h)
    if not contract_component_ok(g, h):
        raise RejectedApplication("contract-component condition fails")
    nb = sorted(g.neighbourhood(h))
    added = [(a, b) for a, b in combinations(nb, 2) if not g.has_edge(a, b)]
    return ReductionEvent("contract-component", removed_vertices=sorted(h), added_edges=added)


def apply_contract_component(pi, h):
    ev = contract_component_event(pi.graph, h)
    return apply_event(pi, ev), ev


def _separated_candidates(g):
    """Components H of G - X, |X| <= 2, whose neighbourhood is exactly X.

    Order: X empty, then single vertices, then pairs, each ascending; within
    one X by smallest vertex of H. Sets X that do not separate their own
    component are skipped: the candidate they give is the whole component,
    already offered with X empty.
    """
    comps = components(g)
    for c in comps:
        yield c
    for c in comps:
        if len(c) < 3:
            continue
        arts = articulation_points(g, c)
        for a in sorted(arts):
            for h in components(g, c - {a}):
                yield h
    for c in comps:
        if len(c) < 4:
            continue
        pairs = set()
        for a in sorted(c):
            for b in articulation_points(g, c - {a}):
                pairs.add((min(a, b), max(a, b)))
        for a, b in sorted(pairs):
            for h in components(g, c - {a, b}):
                if g.neighbourhood(h) == {a, b}:
                    yield h


def find_contract_component(g):
    """First H on which contract-component applies, or None."""
    for v in g.vertices():
        if g.degree(v) <= 2:
            return frozenset([v])
    for h in _separated_candidates(g):
        if contract_component_ok(g, h):
            return frozenset(h)
    return None


@dataclass(frozen=True)
class TrivialReason:
    kind: str  # "small", "tw2", "t0" or "contract"
    witness: frozenset = frozenset()


def classify_trivial(pi):
    g = pi.graph
    if g.n <= 4:
        return TrivialReason("small")
    if tw_at_most_2(g):
        return TrivialReason("tw2")
    if pi.t == 0:
        return TrivialReason("t0")
    h = find_contract_component(g)
    if h is not None:
        return TrivialReason("contract", h)
    return None


def is_trivial(pi):
    return classify_trivial(pi) is not None


def _drain_low_degree(pi, events):
    """Contract degree-<=2 vertices one at a time, smallest id first."""
    g = pi.graph
    heap = [v for v in g.vertices() if g.degree(v) <= 2]
    heapq.heapify(heap)
    while heap and g.n > 4:
        v = heapq.heappop(heap)
        if v not in g or g.degree(v) > 2:
            continue
        nb = g.neighbours(v)
        ev = contract_component_event(g, {v})
        apply_event_inplace(pi, ev)
        events.append(ev)
        for w in nb:
            if g.degree(w) <= 2:
                heapq.heappush(heap, w)


def reduce_trivial(pi):
    """Apply the trivial rules until |V| <= 4 or the instance is non-trivial.

    Returns (instance, events); the input is not modified. Contract-component
    keeps both tw(G) <= 2 and its negation, so treewidth is tested once.
    """
    out = pi.copy()
    events = []
    g = out.graph
    if g.n <= 4:
        return out, events
    if tw_at_most_2(g):
        ev = solution_known_event(out)
        apply_event_inplace(out, ev)
        return out, [ev]
    if out.t == 0:
        ev = no_solution_event(out)
        apply_event_inplace(out, ev)
        return out, [ev]
    while g.n > 4:
        _drain_low_degree(out, events)
        if g.n <= 4:
            break
        h = find_contract_component(g)
        if h is None:
            break
        ev = contract_component_event(g, h)
        apply_event_inplace(out, ev)
        events.append(ev)
    if g.n > 4 and (g.min_degree() < 3 or tw_at_most_2(g)):
        raise InvariantViolation("reduce_trivial left a trivial instance behind")
    return out, events


def k4_instance():
    return ProblemInstance(Graph(range(4), combinations(range(4), 2)), 0)


@dataclass
class ReducedInstance:
    """An equivalent instance produced by one or more rule applications."""

    instance: ProblemInstance
    events: list

    def __iter__(self):
        return iter((self.instance, self.events))
