"""From an approximate modulator to a linked tidy modulator X and a
component separator Y.

A modulator X is tidy when X - {v} is still a modulator for every v in X,
and linked when every non-adjacent pair of X has at most t+2 internally
disjoint paths. A component separator Y makes every component C of
G - (X | Y) see a limit-1 slice of X even after C itself is deleted.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .bounds import cbound, ybound
from .errors import (ApproximatorContractError, InvariantViolation, PreconditionViolation,
                     RejectedApplication, checks_enabled)
from .graph import components, count_disjoint_paths, min_separator
from .instance import (ReducedInstance, ReductionEvent, apply_event, apply_event_inplace,
                       is_modulator, no_solution_event, solution_known_event)
from .limits import certify_limit, check_certificate, find_disjoint_modulator
from .tw2 import decompose, find_k4_witness, smooth, tw_at_most_2


# approximators


class Approximator:
    """A procedure Graph -> modulator with a declared ratio.

    `guaranteed` says whether the ratio is a proven bound. Only then may a
    modulator larger than eps*t be read as proof of a no-instance.
    """

    def __init__(self, name, fn, eps, guaranteed):
        self.name = name
        self.fn = fn
        self.eps = Fraction(eps)
        self.guaranteed = guaranteed
        if self.eps < 1:
            raise PreconditionViolation("approximation ratio must be at least 1")

    def __call__(self, g):
        x = frozenset(self.fn(g))
        if not x <= g.vertex_set() or not is_modulator(g, x):
            raise ApproximatorContractError(f"{self.name} returned a set that is not a modulator")
        return x

    def __repr__(self):
        return f"Approximator({self.name!r}, eps={self.eps})"


def _exact(g):
    from .oracle import exact_tw2d

    return exact_tw2d(g).modulator


def exact_approximator():
    return Approximator("exact", _exact, 1, True)


def greedy_modulator(g):
    """Delete every vertex of a minimal K4 model until none is left, then
    drop vertices that turn out to be redundant."""
    h = g.copy()
    x = set()
    while True:
        w = find_k4_witness(h)
        if w is None:
            break
        chosen = w.vertices()
        x |= chosen
        h.remove_vertices(chosen)
    for v in sorted(x):
        if is_modulator(g, x - {v}):
            x.discard(v)
    return x


def greedy_approximator(eps=4):
    return Approximator("greedy", greedy_modulator, eps, False)


# labels


@dataclass(frozen=True)
class LabeledModulator:
    x: frozenset
    tidy: bool
    linked: bool

    def __len__(self):
        return len(self.x)


def is_tidy(g, x):
    x = set(x)
    rest = g.vertex_set() - x
    if not tw_at_most_2(g, rest):
        return False
    return all(tw_at_most_2(g, rest | {v}) for v in x)


def is_linked(g, t, x):
    for a, b in combinations(sorted(x), 2):
        if not g.has_edge(a, b) and count_disjoint_paths(g, a, b, limit=t + 3) > t + 2:
            return False
    return True


def label(g, t, x):
    x = frozenset(x)
    return LabeledModulator(x, is_tidy(g, x), is_linked(g, t, x))


# approximation step


def approximate_modulator(pi, approx):
    """A modulator X with t < |X| <= eps*t, or a ReducedInstance.

    For an approximator without a proven ratio, an oversized X is returned
    as is instead of being read as a no-answer.
    """
    x = approx(pi.graph)
    if len(x) <= pi.t:
        ev = solution_known_event(pi, x)
        return ReducedInstance(apply_event(pi, ev), [ev])
    if len(x) > approx.eps * pi.t and approx.guaranteed:
        ev = no_solution_event(pi)
        ev.info["modulator_size"] = len(x)
        return ReducedInstance(apply_event(pi, ev), [ev])
    return x


# tidy modulators and limit-0 removal


def remove_limit0_event(pi, u, cert):
    u = frozenset(u)
    if not u or cert.subject != u or cert.m != 0 or not check_certificate(pi.graph, pi.t, cert):
        raise RejectedApplication("no valid limit-0 certificate for the removed set")
    if len(u) > pi.t:
        raise RejectedApplication("limit-0 set larger than the budget")
    return ReductionEvent("remove-limit-0-subset", removed_vertices=sorted(u), t_delta=-len(u),
                          info={"witnesses": [sorted(d) for d in cert.witnesses]})


def apply_remove_limit0(pi, u, cert):
    ev = remove_limit0_event(pi, u, cert)
    return apply_event(pi, ev), ev


def tidy_modulator(pi, x):
    """Grow x into a tidy modulator of size <= (3t+4)|x|, or remove a
    limit-0 vertex found on the way."""
    g, t = pi.graph, pi.t
    x = frozenset(x)
    if not is_modulator(g, x):
        raise PreconditionViolation("x is not a modulator")
    if g.n <= (3 * t + 4) * len(x):
        return LabeledModulator(g.vertex_set(), True, False)
    grown = set(x)
    for v in sorted(x):
        sub = g.without(x - {v})
        res = find_disjoint_modulator(sub, t, {v})
        if not res.disjoint:
            cert = certify_limit(g, t, {v}, res.parts[:t + 1])
            if cert is None:
                raise InvariantViolation("limit outcome did not certify a limit-0 vertex")
            if t == 0:
                ev = no_solution_event(pi)
                ev.info["limit0"] = v
            else:
                ev = remove_limit0_event(pi, {v}, cert)
            return ReducedInstance(apply_event(pi, ev), [ev])
        grown |= res.y
    out = frozenset(grown)
    if checks_enabled() and not is_tidy(g, out):
        raise InvariantViolation("grown modulator is not tidy")
    return LabeledModulator(out, True, False)


# add necessary edge


def add_edge_event(pi, a, b):
    g = pi.graph
    if g.has_edge(a, b):
        raise RejectedApplication(f"{a}-{b} is already an edge")
    if count_disjoint_paths(g, a, b, limit=pi.t + 3) < pi.t + 3:
        raise RejectedApplication(f"fewer than t+3 disjoint paths between {a} and {b}")
    return ReductionEvent("add-necessary-edge", added_edges=[(a, b)])


def link_modulator(pi, x):
    """Add necessary edges inside x until x is linked. Returns
    (instance, LabeledModulator, events)."""
    out = pi.copy()
    events = []
    xs = sorted(x.x if isinstance(x, LabeledModulator) else x)
    changed = True
    while changed:
        changed = False
        for a, b in combinations(xs, 2):
            g = out.graph
            if not g.has_edge(a, b) and count_disjoint_paths(g, a, b, limit=out.t + 3) >= out.t + 3:
                ev = add_edge_event(out, a, b)
                apply_event_inplace(out, ev)
                events.append(ev)
                changed = True
    tidy = x.tidy if isinstance(x, LabeledModulator) else is_tidy(out.graph, xs)
    return out, LabeledModulator(frozenset(xs), tidy, True), events


# reduce number of components


def component_removal_certificates(g, t, x, comp):
    """Check the component-removal conditions for comp, a component of
    G - x. Returns a dict of certificates, or None when a condition fails."""
    x = frozenset(x)
    comp = frozenset(comp)
    nb = g.neighbourhood(comp)
    if not nb <= x or not g.is_clique(nb):
        return None
    h = g.without(comp)
    others = [c for c in components(g, g.vertex_set() - x) if not c & comp]
    certs = {"triples": {}, "pairs": {}}
    for triple in combinations(sorted(nb), 3):
        cert = certify_limit(h, t, triple, [c for c in others if set(triple) <= g.neighbourhood(c)])
        if cert is None:
            return None
        certs["triples"][triple] = cert
    for pair in combinations(sorted(nb), 2):
        if tw_at_most_2(g, comp | set(pair)):
            certs["pairs"][pair] = "small-treewidth"
            continue
        cert = certify_limit(h, t, pair, others)
        if cert is None:
            return None
        certs["pairs"][pair] = cert
    return certs


def remove_component_event(pi, x, comp):
    x = frozenset(x.x if isinstance(x, LabeledModulator) else x)
    g = pi.graph
    if not is_tidy(g, x):
        raise RejectedApplication("modulator is not tidy")
    if comp not in [frozenset(c) for c in components(g, g.vertex_set() - x)]:
        raise RejectedApplication("not a component of G - X")
    certs = component_removal_certificates(g, pi.t, x, comp)
    if certs is None:
        raise RejectedApplication("component-removal conditions fail")
    return ReductionEvent("reduce-number-of-components", removed_vertices=sorted(comp),
                          info={"interface": sorted(g.neighbourhood(comp))})


def _excluded_components(g, t, x, comps):
    """The P, Q and R families: components that may fail the removal rule."""
    nbs = [g.neighbourhood(c) for c in comps]
    p = set()
    for pair in combinations(sorted(x), 2):
        hit = [i for i, nb in enumerate(nbs) if set(pair) <= nb]
        if len(hit) <= t + 2:
            p.update(hit)
    q = set()
    for triple in combinations(sorted(x), 3):
        hit = [i for i, nb in enumerate(nbs) if i not in p and set(triple) <= nb]
        if len(hit) <= t + 1:
            q.update(hit)
    r = set()
    for pair in combinations(sorted(x), 2):
        hit = [i for i, c in enumerate(comps) if not tw_at_most_2(g, c | set(pair))]
        if len(hit) <= t + 1:
            r.update(hit)
    return p | q | r


def reduce_component_count(pi, x):
    """Remove one component of G - X when there are more than Cbound(t, |X|)."""
    xs = frozenset(x.x if isinstance(x, LabeledModulator) else x)
    g, t = pi.graph, pi.t
    comps = components(g, g.vertex_set() - xs)
    if len(comps) <= cbound(t, len(xs)):
        return None
    excluded = _excluded_components(g, t, xs, comps)
    for i, c in enumerate(comps):
        if i in excluded:
            continue
        ev = remove_component_event(pi, xs, frozenset(c))
        return ReducedInstance(apply_event(pi, ev), [ev])
    raise InvariantViolation("too many components but every one is excluded")


def reduce_components_via_link(pi, z):
    """Link the tidy modulator z and then drop one component of G - z."""
    linked_pi, lab, events = link_modulator(pi, z)
    res = reduce_component_count(linked_pi, lab)
    if res is None:
        raise InvariantViolation("component count fell below the threshold after linking")
    return ReducedInstance(res.instance, events + res.events)


# component separators


@dataclass
class ComponentSeparator:
    y: frozenset
    pairs: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.y)


def _pair_separator(pi, xs, a, b):
    g, t = pi.graph, pi.t
    sub = g.without(xs - {a, b})
    if not g.has_edge(a, b):
        sep = min_separator(sub, a, b)
        if len(sep) > t + 2:
            raise InvariantViolation(f"linked pair {a},{b} has a separator of size {len(sep)}")
        return frozenset(sep), "separator"
    res = find_disjoint_modulator(sub, t, {a, b})
    if not res.disjoint:
        return res.y, "limit"
    z = xs | res.y
    if len(components(g, g.vertex_set() - z)) > cbound(t, len(z)):
        return reduce_components_via_link(pi, z), "reduced"
    extra = set()
    for d in components(g, g.vertex_set() - z):
        if a in g.neighbourhood(d) and b in g.neighbourhood(d):
            k = g.induced(d | {a, b})
            k.remove_edge(a, b)
            sep = min_separator(k, a, b)
            if len(sep) > 1:
                raise InvariantViolation("two disjoint paths inside a treewidth-2 piece")
            extra |= sep
    return res.y | frozenset(extra), "split"


def component_separator(pi, x):
    xs = frozenset(x.x if isinstance(x, LabeledModulator) else x)
    ys = set()
    pairs = {}
    for a, b in combinations(sorted(xs), 2):
        y, kind = _pair_separator(pi, xs, a, b)
        if kind == "reduced":
            return y
        pairs[(a, b)] = (kind, y)
        ys |= y
    return ComponentSeparator(frozenset(ys), pairs)


def _lca_closure(td, marked):
    """Smallest node set containing `marked` that is closed under taking
    lowest common ancestors, for td rooted at its smallest node."""
    nodes = td.nodes()
    root = nodes[0]
    parent = {root: None}
    order = [root]
    for a in order:
        for b in td.neighbours(a):
            if b not in parent:
                parent[b] = a
                order.append(b)
    count = {a: 0 for a in nodes}
    for m in marked:
        count[m] += 1
    # a node is kept when it is marked or two of its child subtrees hold marks
    holds = {a: count[a] > 0 for a in nodes}
    branches = {a: 0 for a in nodes}
    for a in reversed(order):
        p = parent[a]
        if p is not None and holds[a]:
            holds[p] = True
            branches[p] += 1
    return {a for a in nodes if count[a] > 0 or branches[a] >= 2}


def shrink_y_neighbourhoods(g, x, y):
    """Extend y so that every component of G - (X | Y') has at most four
    neighbours in Y'. |Y'| <= 6|y|."""
    xs = frozenset(x.x if isinstance(x, LabeledModulator) else x)
    y = frozenset(y.y if isinstance(y, ComponentSeparator) else y)
    if not y:
        return ComponentSeparator(frozenset())
    rest = g.vertex_set() - xs
    if all(len(g.neighbourhood(c) & y) <= 4 for c in components(g, rest - y)):
        return ComponentSeparator(y)
    h = g.induced(rest)
    if h.n < 3:
        return ComponentSeparator(y)
    td = smooth(h, decompose(h))
    marked = set()
    for z in sorted(y):
        marked.add(min(td.occurrences(z)))
    closure = _lca_closure(td, marked)
    out = set(y)
    for a in closure:
        out |= td.bags[a]
    out = frozenset(out)
    if len(out) > 6 * len(y):
        raise InvariantViolation("closure grew past 6|Y|")
    for c in components(g, rest - out):
        if len(g.neighbourhood(c) & out) > 4:
            raise InvariantViolation("a component keeps more than four Y-neighbours")
    return ComponentSeparator(out)


# the two pipeline theorems


def get_linked_tidy_modulator(pi, approx):
    """(instance, LabeledModulator, events) or a ReducedInstance."""
    x = approximate_modulator(pi, approx)
    if isinstance(x, ReducedInstance):
        return x
    tidy = tidy_modulator(pi, x)
    if isinstance(tidy, ReducedInstance):
        return tidy
    out, lab, events = link_modulator(pi, tidy)
    if checks_enabled() and not (is_tidy(out.graph, lab.x) and is_linked(out.graph, out.t, lab.x)):
        raise InvariantViolation("linked tidy modulator lost a property")
    return out, lab, events


def get_separator(pi, x):
    """A ComponentSeparator with the four-neighbour property, or a ReducedInstance."""
    xs = frozenset(x.x if isinstance(x, LabeledModulator) else x)
    g, t = pi.graph, pi.t
    sep = component_separator(pi, xs)
    if isinstance(sep, ReducedInstance):
        return sep
    shrunk = shrink_y_neighbourhoods(g, xs, sep.y)
    shrunk.pairs = sep.pairs
    z = xs | shrunk.y
    if len(components(g, g.vertex_set() - z)) > cbound(t, len(z)):
        return reduce_components_via_link(pi, z)
    if len(shrunk.y) > ybound(t, len(xs)):
        raise InvariantViolation("component separator exceeds Ybound")
    return shrunk
