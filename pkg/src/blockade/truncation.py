"""Finite truncations of lazily generated trees and the stability probe."""

from collections import deque
from dataclasses import dataclass, field

from .committee import CommitteeTree
from .engine import find_certificate
from .errors import InputError, ParseError

MODES = ("neutral", "blue", "red")
MAX_BRANCHING = 10_000


@dataclass(frozen=True)
class TreeGenerator:
    """A lazily described tree: ``children(label)`` lists ``(label, mark)`` pairs.

    Marks are ``"B"``, ``"R"`` or ``None``.
    """

    root: object
    children: object


@dataclass(frozen=True)
class PeriodicTreeSpec:
    states: dict  # name -> mark or None
    transitions: dict  # name -> tuple of child state names
    root: str

    def __post_init__(self):
        if self.root not in self.states:
            raise InputError(f"root state {self.root!r} is not declared")
        if self.states[self.root] is not None:
            raise InputError("the root state may not carry a party mark")
        for name, kids in self.transitions.items():
            if name not in self.states:
                raise InputError(f"undeclared state {name!r}")
            for k in kids:
                if k not in self.states:
                    raise InputError(f"undeclared state {k!r}")
            if kids and self.states[name] is not None:
                raise InputError(f"leaf-marked state {name!r} has children")
        seen, stack = {self.root}, [self.root]
        while stack:
            for k in self.transitions.get(stack.pop(), ()):
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        unreachable = sorted(set(self.states) - seen)
        if unreachable:
            raise InputError(f"unreachable states: {' '.join(unreachable)}")

    def generator(self):
        def children(state):
            return [(k, self.states[k]) for k in self.transitions.get(state, ())]
        return TreeGenerator(self.root, children)


def parse_pgen(text):
    states, transitions, root = {}, {}, None
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, tok) for i, tok in lines if tok and not tok[0].startswith("#")]
    if not lines or lines[0][1] != ["pgen", "v1"]:
        raise ParseError("missing 'pgen v1' header")
    for lineno, tok in lines[1:]:
        if tok[0] == "state" and len(tok) in (2, 3):
            if tok[1] in states:
                raise ParseError(f"duplicate state {tok[1]!r}", lineno)
            mark = tok[2] if len(tok) == 3 else None
            if mark not in (None, "B", "R"):
                raise ParseError(f"unknown mark {mark!r}", lineno)
            states[tok[1]] = mark
        elif tok[0] == "child" and len(tok) == 3:
            transitions.setdefault(tok[1], []).append(tok[2])
        elif tok[0] == "root" and len(tok) == 2:
            if root is not None:
                raise ParseError("duplicate root line", lineno)
            root = tok[1]
        else:
            raise ParseError(f"cannot parse {' '.join(tok)!r}", lineno)
    if root is None:
        raise ParseError("missing root line")
    try:
        return PeriodicTreeSpec(states, {k: tuple(v) for k, v in transitions.items()}, root)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def format_pgen(spec):
    out = ["pgen v1"]
    for name, mark in spec.states.items():
        out.append(f"state {name}" + (f" {mark}" if mark else ""))
    for name, kids in spec.transitions.items():
        out.extend(f"child {name} {k}" for k in kids)
    out.append(f"root {spec.root}")
    return "\n".join(out) + "\n"


def _children(gen, label):
    kids = []
    for item in gen.children(label):
        kids.append(item)
        if len(kids) > MAX_BRANCHING:
            raise InputError("generator branching exceeds the local-finiteness guard")
    return kids


def truncate(gen, depth, mode="neutral"):
    """Breadth-first unfolding to ``depth``.

    Vertices are numbered in BFS order, so a shallower truncation is a
    prefix of a deeper one. Frontier vertices that still have children
    become open (``neutral``) or party leaves (``blue``/``red``); the
    root stays open at depth 0.
    """
    if depth < 0:
        raise InputError("depth must be nonnegative")
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    parent, blue, red, opn = [-1], set(), set(), set()
    labels = ["r"]
    queue = deque([(0, gen.root, 0)])
    while queue:
        v, label, d = queue.popleft()
        kids = _children(gen, label)
        if not kids:
            continue
        if d == depth:
            if mode == "neutral" or v == 0:
                opn.add(v)
            else:
                (blue if mode == "blue" else red).add(v)
            continue
        for kid, mark in kids:
            w = len(parent)
            parent.append(v)
            labels.append(f"v{w}")
            if mark == "B":
                blue.add(w)
            elif mark == "R":
                red.add(w)
            queue.append((w, kid, d + 1))
    return CommitteeTree(tuple(parent), blue, red, opn, tuple(labels))


@dataclass(frozen=True)
class StabilityRow:
    depth: int
    mode: str
    kind: str
    prefix: tuple  # certificate edges restricted to the comparison prefix, as labels


@dataclass
class StabilityReport:
    rows: list = field(default_factory=list)
    stabilization_depth: int = None


def _prefix(tree, edges, depth):
    # sources at least two levels above the frontier
    return tuple(tree.labels[v] for v in sorted(edges) if tree.depth[v] <= depth - 2)


def stability_study(gen, d_min, d_max, modes=MODES):
    if d_min > d_max:
        raise InputError("d_min must not exceed d_max")
    report = StabilityReport()
    certs = {}
    for depth in range(d_min, d_max + 1):
        finite = not truncate(gen, depth, "neutral").open
        for mode in (("finite",) if finite else modes):
            tree = truncate(gen, depth, "neutral" if finite else mode)
            cert = find_certificate(tree)
            certs[depth, mode] = (tree, cert)
            report.rows.append(StabilityRow(depth, mode, cert.kind.value,
                                            _prefix(tree, cert.edges, depth)))
        if finite:
            break
    depths = sorted({row.depth for row in report.rows})
    for cand in depths:
        later = [(tree, cert) for (d, _), (tree, cert) in certs.items() if d >= cand]
        kinds = {cert.kind for _, cert in later}
        prefixes = {_prefix(tree, cert.edges, cand) for tree, cert in later}
        if len(kinds) == 1 and len(prefixes) == 1:
            report.stabilization_depth = cand
            break
    return report


def format_stability(report):
    out = []
    for row in report.rows:
        out.append(f"depth {row.depth} mode {row.mode} kind {row.kind} prefix "
                   + " ".join(row.prefix))
    sd = report.stabilization_depth
    out.append(f"stabilized {sd if sd is not None else 'none'}")
    return "\n".join(line.rstrip() for line in out) + "\n"
