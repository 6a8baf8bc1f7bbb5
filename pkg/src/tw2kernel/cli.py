"""Command line: instance files, traces and the four commands.

File grammar:

    c <comment>
    p tw2d <n> <m> <t>
    e <u> <v>          1 <= u < v <= n

Vertices in a file are 1..n and keep those ids internally, so trace lines
refer to the input file's numbering. Vertices created by a rule get fresh
ids above the input's; serialize renumbers the survivors to 1..n in
increasing id order.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from .decompose import exact_approximator, greedy_approximator
from .errors import (ParseError, PreconditionViolation, ScaleExceeded, Tw2KernelError)
from .graph import Graph
from .instance import ProblemInstance, ReductionEvent, replay
from .kernelize import kernelize
from .oracle import MAX_ORACLE_N, exact_tw2d, is_yes

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


def _int(tok, lineno, what):
    if not (tok.isascii() and tok.isdigit()):
        raise ParseError(f"{what} must be a non-negative decimal integer, got {tok!r}", lineno)
    return int(tok)


def parse(text):
    """Instance text to ProblemInstance on vertices 1..n."""
    header = None
    edges = []
    seen = set()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line.startswith("c ") or line == "c":
            continue
        toks = line.split(" ")
        if toks[0] == "p":
            if header is not None:
                raise ParseError("second header line", lineno)
            if len(toks) != 5 or toks[1] != "tw2d":
                raise ParseError("header must read 'p tw2d <n> <m> <t>'", lineno)
            header = tuple(_int(tok, lineno, name) for tok, name in zip(toks[2:], "nmt"))
        elif toks[0] == "e":
            if header is None:
                raise ParseError("edge before header", lineno)
            if len(toks) != 3:
                raise ParseError("edge line must read 'e <u> <v>'", lineno)
            u, v = _int(toks[1], lineno, "u"), _int(toks[2], lineno, "v")
            n = header[0]
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex index out of range 1..{n}", lineno)
            if u >= v:
                raise ParseError("edge endpoints must satisfy u < v", lineno)
            if (u, v) in seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            seen.add((u, v))
            edges.append((u, v))
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    if header is None:
        raise ParseError("missing header line")
    n, m, t = header
    if m != len(edges):
        raise ParseError(f"header declares {m} edges, file has {len(edges)}")
    return ProblemInstance(Graph(range(1, n + 1), edges), t)


def serialize(pi, comments=()):
    """Sorted edges over vertices renumbered 1..n."""
    g = pi.graph
    ids = {v: i for i, v in enumerate(g.vertices(), 1)}
    edges = sorted((min(ids[u], ids[v]), max(ids[u], ids[v])) for u, v in g.edges())
    out = [f"c {c}" for c in comments]
    out.append(f"p tw2d {g.n} {len(edges)} {pi.t}")
    out.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def trace_lines(events):
    return "".join(json.dumps(ev.as_dict(), sort_keys=False) + "\n" for ev in events)


def parse_trace(text):
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            events.append(ReductionEvent.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError, PreconditionViolation) as exc:
            raise ParseError(f"bad trace record: {exc}", lineno) from None
    return events


def parse_epsilon(s):
    try:
        eps = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from None
    if eps < 1:
        raise argparse.ArgumentTypeError("epsilon must be at least 1")
    return eps


def make_approximator(name, eps):
    if name == "exact":
        ap = exact_approximator()
        if eps is not None:
            ap.eps = eps
        return ap
    return greedy_approximator(4 if eps is None else eps)


# gen


def random_instance(rng, n, density, t, planted=0):
    """Erdos-Renyi G(n, density); with planted=k the first k vertices carry
    a random 2-tree instead, so part of the graph has treewidth 2."""
    g = Graph(range(1, n + 1))
    core = list(range(1, min(planted, n) + 1))
    if len(core) >= 2:
        g.add_edge(core[0], core[1])
        tri = [(core[0], core[1])]
        for v in core[2:]:
            a, b = rng.choice(tri)
            g.add_edge(a, v)
            g.add_edge(b, v)
            tri.extend([(a, v), (b, v)])
    in_core = set(core)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if u in in_core and v in in_core:
                continue
            if rng.random() < density:
                g.add_edge(u, v)
    return ProblemInstance(g, t)


# commands


def _read(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def cmd_kernelize(args):
    pi = parse(_read(args.input))
    ap = make_approximator(args.approximator, args.epsilon)
    report = kernelize(pi, ap, target=args.target)
    _write(args.output, serialize(report.instance))
    if args.trace:
        _write(args.trace, trace_lines(report.trace))
    summary = {"n_in": pi.graph.n, "n_out": report.instance.graph.n, "t_out": report.instance.t,
               "events": len(report.trace), "stopped": report.stopped}
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    pi = parse(_read(args.input))
    events = parse_trace(_read(args.trace))
    try:
        final = replay(pi, events)
    except PreconditionViolation as exc:
        _error("invariant", f"trace does not replay: {exc}")
        return EXIT_INVARIANT
    if args.output is not None:
        if serialize(final) != serialize(parse(_read(args.output))):
            _error("invariant", "replayed trace does not reproduce the output file")
            return EXIT_INVARIANT
    limit = args.max_oracle_n
    if pi.graph.n > limit or final.graph.n > limit:
        _error("scale", f"instances above --max-oracle-n {limit}; equivalence not checked")
        return EXIT_INVARIANT
    a, b = is_yes(pi, limit), is_yes(final, limit)
    print(json.dumps({"input_yes": a, "output_yes": b, "equivalent": a == b}))
    if a != b:
        _error("invariant", "output is not equivalent to input")
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_solve(args):
    pi = parse(_read(args.input))
    res = exact_tw2d(pi.graph, limit=args.max_oracle_n)
    ids = {v: i for i, v in enumerate(pi.graph.vertices(), 1)}
    print(json.dumps({"tw2d": res.size, "modulator": sorted(ids[v] for v in res.modulator),
                      "yes": res.size <= pi.t}))
    return EXIT_OK


def cmd_gen(args):
    rng = random.Random(args.seed)
    pi = random_instance(rng, args.n, args.density, args.t, args.planted)
    _write(args.output, serialize(pi, comments=[f"gen seed={args.seed} n={args.n} "
                                                f"density={args.density} t={args.t} "
                                                f"planted={args.planted}"]))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="tw2kernel", description="Treewidth-2 vertex deletion kernelizer")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernelize", help="reduce an instance and write a trace")
    k.add_argument("--input", required=True)
    k.add_argument("--output", default="-")
    k.add_argument("--trace")
    k.add_argument("--epsilon", type=parse_epsilon, help="approximation ratio p/q, at least 1")
    k.add_argument("--approximator", choices=("exact", "greedy"), default="greedy")
    k.add_argument("--target", type=int,
                   help="reduce towards this many vertices instead of the proven bound")
    k.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="replay a trace and check equivalence")
    v.add_argument("--input", required=True)
    v.add_argument("--trace", required=True)
    v.add_argument("--output")
    v.add_argument("--max-oracle-n", type=int, default=MAX_ORACLE_N)

    s = sub.add_parser("solve", help="minimum modulator by brute force")
    s.add_argument("--input", required=True)
    s.add_argument("--max-oracle-n", type=int, default=MAX_ORACLE_N)

    gn = sub.add_parser("gen", help="seeded random instance")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--n", type=int, default=10)
    gn.add_argument("--density", type=float, default=0.5)
    gn.add_argument("--t", type=int, default=1)
    gn.add_argument("--planted", type=int, default=0,
                    help="size of a planted treewidth-2 core on vertices 1..k")
    gn.add_argument("--output", default="-")
    return p


def _error(kind, message, line=None):
    rec = {"error": kind, "message": message}
    if line is not None:
        rec["line"] = line
    print(json.dumps(rec), file=sys.stderr)


COMMANDS = {"kernelize": cmd_kernelize, "verify": cmd_verify, "solve": cmd_solve, "gen": cmd_gen}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        _error("parse", str(exc), exc.line)
        return EXIT_PARSE
    except OSError as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    except ScaleExceeded as exc:
        _error("scale", str(exc))
        return EXIT_INVARIANT
    except Tw2KernelError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
