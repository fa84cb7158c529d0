"""Rooted committee trees, edge sets, accumulation, flows and the vote.

Vertices are dense integers ``0..n-1``; every non-root vertex ``v`` has a
single outgoing edge ``v -> parent[v]``, so an edge set is a frozenset of
source vertices.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from enum import Enum

from . import kernels
from .errors import InputError, ParseError, PreconditionViolated, UnsupportedInstance

EdgeSet = frozenset


class Outcome(str, Enum):
    BLUE = "Blue"
    TIE = "Tie"
    RED = "Red"


@dataclass(frozen=True)
class CommitteeTree:
    parent: tuple
    blue: frozenset = frozenset()
    red: frozenset = frozenset()
    open: frozenset = frozenset()
    labels: tuple = None
    _swapped_of: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.parent)
        if n == 0:
            raise InputError("tree has no vertices")
        object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))
        for name in ("blue", "red", "open"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
            if len(self.labels) != n:
                raise InputError("labels length differs from vertex count")
            if len(set(self.labels)) != n:
                raise InputError("duplicate vertex labels")
        roots = [v for v, p in enumerate(self.parent) if p < 0]
        if len(roots) != 1:
            raise InputError(f"expected exactly one root, found {len(roots)}")
        for v, p in enumerate(self.parent):
            if p >= n:
                raise InputError(f"vertex {v} has unknown parent {p}")
        # every vertex must reach the root
        depth = self.depth
        if any(d < 0 for d in depth):
            raise InputError("parent relation has a cycle")
        for name in ("blue", "red", "open"):
            for v in getattr(self, name):
                if not 0 <= v < n:
                    raise InputError(f"{name} mark on unknown vertex {v}")
                if self.children[v]:
                    raise InputError(f"{name} mark on non-leaf vertex {self.labels[v]}")
        if self.blue & self.red:
            raise InputError("blue and red leaf sets intersect")
        if self.open & (self.blue | self.red):
            raise InputError("open vertices must not be party leaves")
        if self.root in self.blue or self.root in self.red:
            raise PreconditionViolated("the root may not belong to a party")

    @property
    def n(self):
        return len(self.parent)

    @cached_property
    def root(self):
        return self.parent.index(-1)

    @cached_property
    def children(self):
        kids = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depth(self):
        depth = [-1] * self.n
        depth[self.root] = 0
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for c in self.children[v]:
                depth[c] = depth[v] + 1
                queue.append(c)
        return tuple(depth)

    @cached_property
    def edges(self):
        """All edges, i.e. every non-root vertex."""
        return frozenset(v for v in range(self.n) if v != self.root)

    @cached_property
    def leaves(self):
        return frozenset(v for v in range(self.n) if not self.children[v] and v != self.root)

    @cached_property
    def index(self):
        return {label: v for v, label in enumerate(self.labels)}

    def vertex(self, label):
        try:
            return self.index[str(label)]
        except KeyError:
            raise InputError(f"unknown vertex {label!r}") from None

    def edge_set(self, labels):
        return frozenset(self.vertex(s) for s in labels)

    def names(self, edges):
        return [self.labels[v] for v in sorted(edges)]

    def swapped(self):
        """The same tree with the two parties exchanged."""
        return self._swapped

    @cached_property
    def _swapped(self):
        if self._swapped_of is not None:
            return self._swapped_of
        return CommitteeTree(self.parent, self.red, self.blue, self.open, self.labels,
                             _swapped_of=self)

    # kernel-facing buffers
    @cached_property
    def parent_buf(self):
        return kernels.int_buffer(self.parent)

    def mask(self, vertices):
        m = bytearray(self.n)
        for v in vertices:
            m[v] = 1
        return m

    @cached_property
    def blue_mask(self):
        return bytes(self.mask(self.blue))

    @cached_property
    def red_mask(self):
        return bytes(self.mask(self.red))

    @cached_property
    def open_mask(self):
        return bytes(self.mask(self.open))


def from_mask(mask):
    return frozenset(v for v, bit in enumerate(mask) if bit)


def _check_vertex(tree, v):
    if not 0 <= v < tree.n:
        raise InputError(f"unknown vertex {v}")


def accumulation(tree, x, v):
    """In-degree minus out-degree of ``v`` within ``x``."""
    _check_vertex(tree, v)
    inc = sum(1 for c in tree.children[v] if c in x)
    return inc - (1 if v != tree.root and v in x else 0)


def accumulation_diff(tree, x, y, v):
    return accumulation(tree, x, v) - accumulation(tree, y, v)


def incident_vertices(tree, x):
    return frozenset(x) | frozenset(tree.parent[s] for s in x)


def terminal_vertices(tree, x):
    return frozenset(v for v in range(tree.n) if v not in x)


def blue_flow(tree, x):
    return from_mask(kernels.flow(tree.parent_buf, tree.blue_mask, tree.mask(x)))


def red_flow(tree, x):
    return blue_flow(tree.swapped(), x)


@dataclass(frozen=True)
class VoteOutcome:
    margin: tuple
    result: Outcome


def _sign(k):
    return (k > 0) - (k < 0)


def vote_outcome(tree):
    if tree.open:
        raise UnsupportedInstance("vote is undefined on trees with open frontier vertices")
    sent = [0] * tree.n
    margin = [0] * tree.n
    for v in sorted(range(tree.n), key=lambda u: -tree.depth[u]):
        if v in tree.blue:
            sent[v] = 1
        elif v in tree.red:
            sent[v] = -1
        else:
            margin[v] = sum(sent[c] for c in tree.children[v])
            sent[v] = _sign(margin[v])
    result = {1: Outcome.BLUE, 0: Outcome.TIE, -1: Outcome.RED}[_sign(margin[tree.root])]
    return VoteOutcome(tuple(margin), result)


# --- text formats -----------------------------------------------------------

_MARKS = {"B", "R", "open", "-"}


def parse_ctree(text):
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0][1] != "ctree v1":
        raise ParseError("missing 'ctree v1' header", lines[0][0] if lines else None)
    ids, parents, marks = [], [], []
    seen = set()
    for lineno, line in lines[1:]:
        tok = line.split()
        if len(tok) != 4 or tok[0] != "v":
            raise ParseError(f"expected 'v <id> <parent|root> <mark>', got {line!r}", lineno)
        _, vid, par, mark = tok
        if vid in seen:
            raise ParseError(f"duplicate vertex id {vid!r}", lineno)
        if mark not in _MARKS:
            raise ParseError(f"unknown mark {mark!r}", lineno)
        seen.add(vid)
        ids.append(vid)
        parents.append((par, lineno))
        marks.append(mark)
    if not ids:
        raise ParseError("tree has no vertices")
    if all(s.isdigit() for s in ids) and sorted(int(s) for s in ids) == list(range(len(ids))):
        order = sorted(range(len(ids)), key=lambda i: int(ids[i]))
    else:
        order = list(range(len(ids)))
    labels = [ids[i] for i in order]
    index = {label: v for v, label in enumerate(labels)}
    parent, blue, red, opn = [0] * len(ids), set(), set(), set()
    roots = 0
    for v, i in enumerate(order):
        par, lineno = parents[i]
        if par == "root":
            parent[v] = -1
            roots += 1
        elif par in index:
            parent[v] = index[par]
        else:
            raise ParseError(f"unknown parent {par!r}", lineno)
        {"B": blue, "R": red, "open": opn}.get(marks[i], set()).add(v)
    if roots != 1:
        raise ParseError(f"expected exactly one root, found {roots}")
    try:
        return CommitteeTree(tuple(parent), blue, red, opn, tuple(labels))
    except InputError as exc:
        raise ParseError(str(exc)) from None


def format_ctree(tree):
    out = ["ctree v1"]
    for v in range(tree.n):
        p = tree.parent[v]
        par = "root" if p < 0 else tree.labels[p]
        mark = ("B" if v in tree.blue else "R" if v in tree.red
                else "open" if v in tree.open else "-")
        out.append(f"v {tree.labels[v]} {par} {mark}")
    return "\n".join(out) + "\n"


def format_edges(tree, x):
    return " ".join(tree.names(x))


def parse_edges(tree, line):
    return tree.edge_set(line.split())


def build(spec, root="r"):
    """Build a tree from ``{label: (parent_label, mark)}``; handy for fixtures.

    Labels keep insertion order, root first.
    """
    labels = [root] + [k for k in spec if k != root]
    index = {k: i for i, k in enumerate(labels)}
    parent = [-1] * len(labels)
    blue, red, opn = set(), set(), set()
    for k, (par, mark) in spec.items():
        v = index[k]
        parent[v] = index[par]
        {"B": blue, "R": red, "open": opn}.get(mark, set()).add(v)
    return CommitteeTree(tuple(parent), blue, red, opn, tuple(labels))
