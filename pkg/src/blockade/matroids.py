"""Finite trees of uniform matroids glued by 2-sums.

A ``TreeOfMatroids`` is a forest of nodes, each carrying a uniform matroid,
where adjacent nodes share exactly one dummy element. Its ground set is
the union of node grounds minus the dummies. Independence comes from a
bottom-up load DP over the forest; circuits are enumerated independently
from compatible families of node circuits and serve as its oracle.
"""

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from . import kernels
from .errors import ContractViolated, InputError, ParseError, SizeGuardExceeded
from .report import Report

CIRCUIT_MAX_ELEMENTS = 20
CIRCUIT_MAX_NODES = 6


def natural_key(s):
    return [(0, int(tok), "") if tok.isdigit() else (1, 0, tok)
            for tok in re.findall(r"\d+|\D+", s)]


def ordered(elements):
    return sorted(elements, key=natural_key)


@dataclass(frozen=True)
class UniformMatroid:
    rank: int
    ground: tuple

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        if not 0 <= self.rank <= len(self.ground):
            raise InputError(f"rank {self.rank} outside [0, {len(self.ground)}]")
        if len(set(self.ground)) != len(self.ground):
            raise InputError("repeated element in a node ground set")

    @property
    def corank(self):
        return len(self.ground) - self.rank

    def dual(self):
        return UniformMatroid(self.corank, self.ground)

    def minor(self, contract=(), delete=()):
        contract, delete = set(contract), set(delete)
        rank = self.rank - min(len(contract), self.rank)
        ground = tuple(e for e in self.ground if e not in contract and e not in delete)
        return UniformMatroid(min(rank, len(ground)), ground)


@dataclass(frozen=True)
class Link:
    u: str
    v: str
    dummy: str


class TreeOfMatroids:
    """Overlap-1 forest of uniform matroids; immutable after construction."""

    def __init__(self, matroids, links=()):
        self.matroids = dict(matroids)
        self.nodes = tuple(ordered(self.matroids))
        self.links = tuple(sorted((Link(*ln) if not isinstance(ln, Link) else ln
                                   for ln in links), key=lambda ln: natural_key(ln.dummy)))
        self._validate()

    def _validate(self):
        nbrs = {t: [] for t in self.nodes}
        dummies = {}
        for ln in self.links:
            for t in (ln.u, ln.v):
                if t not in self.matroids:
                    raise InputError(f"link names unknown node {t!r}")
            if ln.u == ln.v:
                raise InputError("self link")
            if ln.dummy in dummies:
                raise InputError(f"dummy {ln.dummy!r} used by two links")
            dummies[ln.dummy] = ln
            nbrs[ln.u].append((ln.v, ln.dummy))
            nbrs[ln.v].append((ln.u, ln.dummy))
        owners = {}
        for t in self.nodes:
            for e in self.matroids[t].ground:
                owners.setdefault(e, []).append(t)
        for e, ts in owners.items():
            if e in dummies:
                ln = dummies[e]
                if sorted(ts) != sorted([ln.u, ln.v]):
                    raise InputError(f"dummy {e!r} must lie in exactly nodes {ln.u}, {ln.v}")
            elif len(ts) > 1:
                raise InputError(f"element {e!r} shared by {ts} without a link")
        for d, ln in dummies.items():
            if d not in owners:
                raise InputError(f"dummy {d!r} missing from its nodes")
        # forest check: union-find over links
        comp = {t: t for t in self.nodes}

        def find(t):
            while comp[t] != t:
                comp[t] = comp[comp[t]]
                t = comp[t]
            return t
        for ln in self.links:
            a, b = find(ln.u), find(ln.v)
            if a == b:
                raise InputError("links contain a cycle")
            comp[a] = b
        self.neighbours = {t: tuple(sorted(ns, key=lambda p: natural_key(p[0])))
                           for t, ns in nbrs.items()}
        self.dummies = frozenset(dummies)
        self.ground = tuple(ordered(e for e in owners if e not in dummies))
        self.owner = {e: owners[e][0] for e in self.ground}

    # --- structure -----------------------------------------------------

    def degree(self, t):
        return len(self.neighbours[t])

    def reals(self, t):
        return tuple(e for e in self.matroids[t].ground if e not in self.dummies)

    @cached_property
    def components(self):
        seen, out = set(), []
        for t in self.nodes:
            if t in seen:
                continue
            comp, queue = [], deque([t])
            seen.add(t)
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w, _ in self.neighbours[u]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            out.append(tuple(ordered(comp)))
        return tuple(out)

    def hypothesis_violations(self):
        """Nodes whose rank or corank is below their degree."""
        return [t for t in self.nodes
                if min(self.matroids[t].rank, self.matroids[t].corank) < self.degree(t)]

    def dual(self):
        return TreeOfMatroids({t: m.dual() for t, m in self.matroids.items()}, self.links)

    def with_ranks(self, ranks):
        return TreeOfMatroids({t: UniformMatroid(ranks[t], m.ground)
                               for t, m in self.matroids.items()}, self.links)

    def subforest(self, nodes):
        nodes = set(nodes)
        return TreeOfMatroids({t: self.matroids[t] for t in nodes},
                              [ln for ln in self.links if ln.u in nodes and ln.v in nodes])

    def __eq__(self, other):
        return (isinstance(other, TreeOfMatroids) and self.matroids == other.matroids
                and self.links == other.links)

    def __hash__(self):
        return hash((tuple(sorted(self.matroids.items())), self.links))

    def __repr__(self):
        body = ", ".join(f"{t}:U{m.rank},{len(m.ground)}" for t, m in
                         ((t, self.matroids[t]) for t in self.nodes))
        return f"TreeOfMatroids({body})"

    # --- oracle ---------------------------------------------------------

    @cached_property
    def _oracle(self):
        node_index = {t: i for i, t in enumerate(self.nodes)}
        elem_index = {e: i for i, e in enumerate(self.ground)}
        node_parent = [-1] * len(self.nodes)
        post = []
        for comp in self.components:
            order, seen = [], {comp[0]}
            queue = deque([comp[0]])
            while queue:
                u = queue.popleft()
                order.append(u)
                for w, _ in self.neighbours[u]:
                    if w not in seen:
                        seen.add(w)
                        node_parent[node_index[w]] = node_index[u]
                        queue.append(w)
            post.extend(node_index[u] for u in reversed(order))
        masks = [0] * len(self.nodes)
        for e, i in elem_index.items():
            masks[node_index[self.owner[e]]] |= 1 << i
        ranks = [self.matroids[t].rank for t in self.nodes]
        width = len(self.ground)
        if width <= kernels.MASK_BITS:
            masks = kernels.mask_buffer(masks)
        return (kernels.int_buffer(post), kernels.int_buffer(node_parent), masks,
                kernels.int_buffer(ranks), width, elem_index)

    def _mask(self, elements):
        index = self._oracle[5]
        mask = 0
        for e in elements:
            if e not in index:
                if e in self.dummies:
                    raise InputError(f"{e!r} is a dummy element")
                raise InputError(f"unknown element {e!r}")
            mask |= 1 << index[e]
        return mask

    def _independent_mask(self, mask):
        post, node_parent, masks, ranks, width, _ = self._oracle
        return kernels.independent(post, node_parent, masks, ranks, mask, width)


def is_independent(tm, i):
    return tm._independent_mask(tm._mask(i))


def _greedy(tm, s):
    s = ordered(set(s))
    tm._mask(s)
    index = tm._oracle[5]
    basis, mask = [], 0
    for e in s:
        trial = mask | (1 << index[e])
        if tm._independent_mask(trial):
            mask = trial
            basis.append(e)
    return basis, mask


def rank(tm, s):
    return len(_greedy(tm, s)[0])


def basis_of(tm, s):
    return frozenset(_greedy(tm, s)[0])


def closure(tm, s):
    basis, mask = _greedy(tm, s)
    index = tm._oracle[5]
    out = set(s)
    for e in tm.ground:
        if e not in out and not tm._independent_mask(mask | (1 << index[e])):
            out.add(e)
    return frozenset(out)


def dual_rank(tm, s):
    s = frozenset(s)
    ground = frozenset(tm.ground)
    return len(s) + rank(tm, ground - s) - rank(tm, ground)


def is_coindependent(tm, s):
    return dual_rank(tm, s) == len(set(s))


def _connected_subsets(tm, comp):
    comp = list(comp)
    for k in range(1, len(comp) + 1):
        for sub in itertools.combinations(comp, k):
            sub = set(sub)
            start = next(iter(sub))
            seen, stack = {start}, [start]
            while stack:
                for w, _ in tm.neighbours[stack.pop()]:
                    if w in sub and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen == sub:
                yield sub


def enumerate_circuits(tm):
    """All inclusion-minimal underlying sets of compatible circuit families.

    A family picks, on a connected node set C, one circuit per node that
    contains the dummy to a neighbour exactly when that neighbour is in C.
    """
    if len(tm.ground) > CIRCUIT_MAX_ELEMENTS or len(tm.nodes) > CIRCUIT_MAX_NODES:
        raise SizeGuardExceeded(
            f"circuit enumeration limited to {CIRCUIT_MAX_ELEMENTS} elements "
            f"and {CIRCUIT_MAX_NODES} nodes")
    found = set()
    for comp in tm.components:
        for sub in _connected_subsets(tm, comp):
            choices = []
            for t in sub:
                inner = [d for w, d in tm.neighbours[t] if w in sub]
                need = tm.matroids[t].rank + 1 - len(inner)
                reals = tm.reals(t)
                if need < 0 or need > len(reals):
                    choices = None
                    break
                choices.append(list(itertools.combinations(reals, need)))
            if choices is None:
                continue
            for pick in itertools.product(*choices):
                under = frozenset(itertools.chain.from_iterable(pick))
                if under:
                    found.add(under)
    minimal = [c for c in found if not any(o < c for o in found)]
    return sorted(minimal, key=lambda c: (len(c), [natural_key(e) for e in ordered(c)]))


def minor(tm, contract=(), delete=()):
    """Node-local uniform minor; links whose dummy is removed are split.

    Returns the list of resulting components, each a ``TreeOfMatroids``.
    """
    contract, delete = set(contract), set(delete)
    if contract & delete:
        raise InputError("contract and delete sets overlap")
    known = set(tm.ground) | tm.dummies
    for e in contract | delete:
        if e not in known:
            raise InputError(f"unknown element {e!r}")
    mats = {t: m.minor(contract & set(m.ground), delete & set(m.ground))
            for t, m in tm.matroids.items()}
    removed = contract | delete
    links = [ln for ln in tm.links if ln.dummy not in removed]
    whole = TreeOfMatroids(mats, links)
    return [whole.subforest(comp) for comp in whole.components]


@dataclass(frozen=True)
class IntersectionTriple:
    common_independent: frozenset
    j_m: frozenset
    j_n: frozenset


def verify_triple(m, n, triple):
    report = Report()
    i = triple.common_independent
    report.check("partition of I", triple.j_m | triple.j_n == i and not (triple.j_m & triple.j_n))
    report.check("independent in M", is_independent(m, i))
    report.check("independent in N", is_independent(n, i))
    covered = closure(m, triple.j_m) | closure(n, triple.j_n)
    missing = ordered(set(m.ground) - covered)
    report.check("closures cover E", not missing, " ".join(missing))
    return report


def classical_intersection(m, n):
    """Maximum common independent set by exchange-graph augmentation.

    The final reachability set R from the M-free sources gives the
    certificate ``j_n = I & R`` and ``j_m = I - R``.
    """
    if tuple(m.ground) != tuple(n.ground):
        raise InputError("matroids must share the ground set")
    ground = list(m.ground)
    current = set()
    while True:
        outside = [x for x in ground if x not in current]
        inside = ordered(current)
        sources = [x for x in outside if is_independent(m, current | {x})]
        sinks = {x for x in outside if is_independent(n, current | {x})}
        succ = {e: [] for e in ground}
        for y in inside:
            for x in outside:
                swap = (current - {y}) | {x}
                if is_independent(m, swap):
                    succ[y].append(x)
                if is_independent(n, swap):
                    succ[x].append(y)
        pred = {x: None for x in sources}
        queue = deque(sources)
        end = None
        while queue:
            u = queue.popleft()
            if u in sinks:
                end = u
                break
            for w in succ[u]:
                if w not in pred:
                    pred[w] = u
                    queue.append(w)
        if end is None:
            reach = frozenset(pred)
            i = frozenset(current)
            triple = IntersectionTriple(i, i - reach, i & reach)
            report = verify_triple(m, n, triple)
            if not report.passed:
                raise ContractViolated("intersection triple failed verification",
                                       {"report": report.lines()})
            return triple
        path = []
        while end is not None:
            path.append(end)
            end = pred[end]
        current ^= set(path)


def max_common_independent_size(m, n):
    """Exhaustive maximum over all subsets; small ground sets only."""
    ground = list(m.ground)
    best = 0
    for k in range(len(ground), 0, -1):
        for sub in itertools.combinations(ground, k):
            if is_independent(m, sub) and is_independent(n, sub):
                return k
    return best


def verify_packing(k, l, p, s1, s2):
    p, s1, s2 = frozenset(p), frozenset(s1), frozenset(s2)
    report = Report()
    report.check("witnesses disjoint", not (s1 & s2))
    report.check("witnesses inside set", (s1 | s2) <= p)
    rk_p, rk_s = rank(k, p), rank(k, s1 & p)
    report.check("first witness spans", rk_p == rk_s, f"{rk_s} of {rk_p}")
    rl_p, rl_s = rank(l, p), rank(l, s2 & p)
    report.check("second witness spans", rl_p == rl_s, f"{rl_s} of {rl_p}")
    return report


def verify_covering(k, l, q, d1, d2):
    return verify_packing(k.dual(), l.dual(), q, d1, d2)


# --- .tmat format -----------------------------------------------------------

@dataclass(frozen=True)
class MatroidPair:
    """Two trees of matroids on the same nodes, links and node grounds."""

    m: TreeOfMatroids
    n: TreeOfMatroids

    def __post_init__(self):
        if self.m.links != self.n.links or any(
                self.m.matroids[t].ground != self.n.matroids.get(t, UniformMatroid(0, ())).ground
                for t in self.m.nodes) or set(self.m.nodes) != set(self.n.nodes):
            raise InputError("pair members must share nodes, links and ground sets")


def parse_tmat(text):
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, tok) for i, tok in lines if tok and not tok[0].startswith("#")]
    if not lines or lines[0][1] != ["tmat", "v1"]:
        raise ParseError("missing 'tmat v1' header")
    m_nodes, n_nodes, links = {}, {}, []
    for lineno, tok in lines[1:]:
        if tok[0] == "node":
            if len(tok) < 7 or tok[2] != "rankM" or tok[4] != "rankN" or tok[6] != "elems":
                raise ParseError("expected 'node <id> rankM <r> rankN <r> elems ...'", lineno)
            name = tok[1]
            if name in m_nodes:
                raise ParseError(f"duplicate node {name!r}", lineno)
            try:
                rm, rn = int(tok[3]), int(tok[5])
                m_nodes[name] = UniformMatroid(rm, tok[7:])
                n_nodes[name] = UniformMatroid(rn, tok[7:])
            except (ValueError, InputError) as exc:
                raise ParseError(str(exc), lineno) from None
        elif tok[0] == "link":
            if len(tok) != 5 or tok[3] != "dummy":
                raise ParseError("expected 'link <node> <node> dummy <element>'", lineno)
            links.append(Link(tok[1], tok[2], tok[4]))
        else:
            raise ParseError(f"unknown directive {tok[0]!r}", lineno)
    try:
        return MatroidPair(TreeOfMatroids(m_nodes, links), TreeOfMatroids(n_nodes, links))
    except InputError as exc:
        raise ParseError(str(exc)) from None


def format_tmat(pair):
    out = ["tmat v1"]
    for t in pair.m.nodes:
        mm, nn = pair.m.matroids[t], pair.n.matroids[t]
        out.append(f"node {t} rankM {mm.rank} rankN {nn.rank} elems " + " ".join(mm.ground))
    for ln in pair.m.links:
        out.append(f"link {ln.u} {ln.v} dummy {ln.dummy}")
    return "\n".join(out) + "\n"
