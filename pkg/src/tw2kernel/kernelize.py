"""The kernelization loop.

Outer loop: while |V| exceeds the bound, clear trivial instances, then
fetch a linked tidy modulator X. Inner loop: compute a component
separator Y, look at the largest component C of G - (X | Y) and shrink it
through its block-cut tree or its largest block. Reductions that delete
vertices send control back to the outer loop; edge deletions keep X and
stay inside.

With `target` set the loop runs against that size instead of bound(t, eps)
and simply stops when no rule fires. This is how the rules get exercised
on instances far below the proven bound.
"""

from dataclasses import dataclass, field

from .biconnected import reduce_biconnected
from .blockcut import reduce_blockcut
from .bounds import BICONNECTED_FACTOR, bound, pbound
from .decompose import get_linked_tidy_modulator, get_separator, is_linked, is_tidy
from .errors import InvariantViolation, checks_enabled
from .graph import block_cut_tree, components
from .instance import ReducedInstance, is_trivial, reduce_trivial


@dataclass
class KernelReport:
    instance: object
    trace: list = field(default_factory=list)
    outer_iterations: int = 0
    inner_iterations: int = 0
    bound: int = 0
    target: int = None
    stopped: str = "bound"

    @property
    def rule_counts(self):
        out = {}
        for ev in self.trace:
            out[ev.rule] = out.get(ev.rule, 0) + 1
        return out


def _largest(sets):
    return max(sets, key=lambda s: (len(s), -min(s)))


def _inner_step(pi, lab):
    """One reduction on the largest component, or None when nothing fires."""
    g, t = pi.graph, pi.t
    sep = get_separator(pi, lab)
    if isinstance(sep, ReducedInstance):
        return sep
    z = lab.x | sep.y
    comps = components(g, g.vertex_set() - z)
    if not comps:
        return None
    c = frozenset(_largest(comps))
    bct = block_cut_tree(g.induced(c))
    xn = len(lab.x)
    if len(bct.blocks) > pbound(t, xn, 4, 30 * xn + 3):
        return reduce_blockcut(pi, lab, sep, c, bct)
    b = _largest(bct.blocks)
    if len(b) >= BICONNECTED_FACTOR * xn + 2:
        return reduce_biconnected(pi, lab, b)
    return None


def kernelize(pi, approx, target=None):
    """Run the kernelization loop on pi with approximator `approx`."""
    out = pi.copy()
    report = KernelReport(out, target=target)

    def limit():
        report.bound = bound(out.t, approx.eps)
        return report.bound if target is None else target

    def adopt(res):
        nonlocal out
        before = (out.graph.n, out.graph.m)
        out = res.instance
        report.trace.extend(res.events)
        report.instance = out
        return before

    while out.graph.n > limit():
        report.outer_iterations += 1
        if is_trivial(out):
            new, events = reduce_trivial(out)
            if not events:
                report.stopped = "stuck"
                break
            adopt(ReducedInstance(new, events))
            continue
        got = get_linked_tidy_modulator(out, approx)
        if isinstance(got, ReducedInstance):
            adopt(got)
            continue
        out, lab, events = got
        report.instance = out
        report.trace.extend(events)
        progressed = False
        res = None
        while out.graph.n > limit():
            report.inner_iterations += 1
            res = _inner_step(out, lab)
            if res is None:
                break
            before = adopt(res)
            after = (out.graph.n, out.graph.m)
            if not after < before and any(ev.rule != "add-necessary-edge" for ev in res.events):
                raise InvariantViolation("a reduction did not shrink (|V|, |E|)")
            progressed = True
            if out.graph.n < before[0] or any(ev.t_delta for ev in res.events):
                break
            if is_trivial(out):
                break
            if checks_enabled() and not (is_tidy(out.graph, lab.x)
                                         and is_linked(out.graph, out.t, lab.x)):
                raise InvariantViolation("edge removal broke the linked tidy modulator")
        else:
            continue
        if not progressed and res is None:
            if target is None and approx.guaranteed:
                raise InvariantViolation("no rule applies above the bound")
            report.stopped = "no-rule"
            break
    report.instance = out
    return report
