"""Limit-m subsets and the disjoint-modulator search.

X is limit-m for (G, t) when every solution leaves at most m vertices of X
in place. The certificates here are the constructive kind: t+1 disjoint
sets D with tw(G[D | X]) > 2, each backed by an explicit K4 model.
"""

from collections import deque
from dataclasses import dataclass, field

from .errors import PreconditionViolation, InvariantViolation, checks_enabled
from .tw2 import tw_at_most_2, find_k4_witness, verify_k4_model, decompose


@dataclass(frozen=True)
class LimitCertificate:
    """Evidence that `subject` is limit-m for some (G, t).

    `derivation` says where the claim comes from: "witnesses" (t+1 disjoint
    obstructions in `witnesses`, models in `models`), "small" (|subject| <= m),
    or "component-separator" (inherited from a separator and lifted to a
    subgraph or subset). For the last kind `basis` holds the pair (X, Y) the
    claim was inherited from.
    """

    subject: frozenset
    m: int
    derivation: str = "witnesses"
    witnesses: tuple = ()
    models: tuple = ()
    basis: tuple = ()


def small_certificate(x, m):
    x = frozenset(x)
    if len(x) > m:
        raise PreconditionViolation(f"{len(x)} vertices cannot be trivially limit-{m}")
    return LimitCertificate(x, m, "small")


def separator_certificate(x, y, subject):
    """Limit-1 claim for a subset of N(C) & X, C a component of G - (X | Y)."""
    return LimitCertificate(frozenset(subject), 1, "component-separator",
                            basis=(frozenset(x), frozenset(y)))


def certify_limit(g, t, x, candidates):
    """Limit-(|x|-1) certificate from t+1 qualifying candidates, or None."""
    x = frozenset(x)
    seen = set()
    for d in candidates:
        d = set(d)
        if d & x:
            raise PreconditionViolation("candidate meets the subject set")
        if d & seen:
            raise PreconditionViolation("candidates overlap")
        seen |= d
    picked = []
    models = []
    for d in candidates:
        if len(picked) == t + 1:
            break
        w = find_k4_witness(g, set(d) | x)
        if w is not None:
            picked.append(frozenset(d))
            models.append(w)
    if len(picked) < t + 1:
        return None
    return LimitCertificate(x, max(len(x) - 1, 0), "witnesses", tuple(picked), tuple(models))


def check_certificate(g, t, cert):
    """Structural re-check of a witness certificate against g."""
    if cert.derivation == "small":
        return len(cert.subject) <= cert.m
    if cert.derivation != "witnesses":
        return False
    if len(cert.witnesses) < t + 1 or cert.m < len(cert.subject) - 1:
        return False
    seen = set()
    for d, w in zip(cert.witnesses, cert.models):
        if d & cert.subject or d & seen:
            return False
        seen |= d
        if not verify_k4_model(g.induced(d | cert.subject), w):
            return False
    return True


@dataclass
class DisjointModulatorResult:
    """Output of the disjoint-modulator search.

    outcome is "disjoint" (tw(G - y) <= 2) or "limit-per-component".
    In the second case `parts` partitions V(G) - X into t+2 sets, each of
    which completes X to treewidth > 2.
    """

    y: frozenset
    outcome: str
    parts: list = field(default_factory=list)
    iterations: int = 0

    @property
    def disjoint(self):
        return self.outcome == "disjoint"

    def certificate_for(self, g, t, x, comp):
        """Certificate that x is limit-(|x|-1) for (G - comp, t)."""
        if self.disjoint:
            raise PreconditionViolation("disjoint outcomes carry no certificates")
        comp = set(comp)
        others = [d for d in self.parts if not comp <= d]
        if len(others) != len(self.parts) - 1:
            raise InvariantViolation("component is not inside a single part")
        return certify_limit(g.without(comp), t, x, others)


def _rooted(td):
    nodes = td.nodes()
    parent = {nodes[0]: None}
    depth = {nodes[0]: 0}
    order = []
    todo = deque([nodes[0]])
    while todo:
        a = todo.popleft()
        order.append(a)
        for b in td.neighbours(a):
            if b not in parent:
                parent[b] = a
                depth[b] = depth[a] + 1
                todo.append(b)
    below = {a: set(td.bags[a]) for a in nodes}
    for a in reversed(order):
        if parent[a] is not None:
            below[parent[a]] |= below[a]
    return depth, below


def find_disjoint_modulator(g, t, x):
    x = frozenset(x)
    if not 1 <= len(x) <= 3:
        raise PreconditionViolation("the modulator must have 1 to 3 vertices")
    if not x <= g.vertex_set() or not g.is_clique(x):
        raise PreconditionViolation("the modulator must be a clique of g")
    rest = g.vertex_set() - x
    if not tw_at_most_2(g, rest):
        raise PreconditionViolation("x is not a modulator")
    y = set()
    parts = []
    alive = set(rest)
    if rest:
        td = decompose(g.induced(rest))
        depth, below = _rooted(td)
        by_depth = sorted(td.nodes(), key=lambda a: (-depth[a], a))
        for _ in range(t + 1):
            if tw_at_most_2(g, alive | x):
                break
            r = next((a for a in by_depth
                      if not tw_at_most_2(g, (below[a] & alive) | x)), None)
            if r is None:
                raise InvariantViolation("no subtree carries the obstruction")
            d = below[r] & alive
            y |= td.bags[r] & alive
            parts.append(frozenset(d))
            alive -= d
            if checks_enabled():
                done = g.vertex_set() - alive - y
                if not tw_at_most_2(g, done):
                    raise InvariantViolation("processed part of the graph is not tw-2")
                if g.neighbourhood(alive) & (done - x):
                    raise InvariantViolation("x and y fail to separate the processed part")
    iterations = len(parts)
    if tw_at_most_2(g, alive | x):
        res = DisjointModulatorResult(frozenset(y), "disjoint", iterations=iterations)
        if checks_enabled() and not tw_at_most_2(g, g.vertex_set() - y):
            raise InvariantViolation("disjoint outcome but g - y has treewidth > 2")
        return res
    parts.append(frozenset(alive))
    if len(parts) != t + 2:
        raise InvariantViolation("limit outcome without t+2 obstructing parts")
    return DisjointModulatorResult(frozenset(y), "limit-per-component", parts, iterations)
