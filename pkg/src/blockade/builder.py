"""Packing/covering partitions for pairs of uniform 2-sum trees.

For a pair (M, N) the work happens on (M, N*). Each node ``t`` gets
``K(t) = |E(t)| - r(M(t)) - r(N*(t))`` party leaves in a committee tree
rooted at the node owning the query element: red leaves when ``K(t) > 0``,
blue when ``K(t) < 0``. A red blockage yields a federated packing, a
strong blue blockage a federated covering; the driver saturates packings
and then covers the rest.
"""

from collections import deque
from dataclasses import dataclass, field

from .committee import CommitteeTree, blue_flow
from .engine import Certificate, Kind, check_blockage, find_certificate
from .errors import ContractViolated, FeasibilityViolated, InputError, PreconditionViolated
from .matroids import (
    MatroidPair,
    TreeOfMatroids,
    classical_intersection,
    ordered,
    verify_covering,
    verify_packing,
    verify_triple,
)
from .report import Report

GREEN, YELLOW = "green", "yellow"


def k_value(pair, t):
    """Surplus of node ``t`` for packing in (M, N*); equals r(N(t)) - r(M(t))."""
    return _k(pair.m, pair.n.dual(), t)


def _k(k, l, t):
    return len(k.matroids[t].ground) - k.matroids[t].rank - l.matroids[t].rank


@dataclass
class AugmentedTree:
    k: TreeOfMatroids  # component of the query element, first matroid of the pair
    l: TreeOfMatroids
    root: str
    kval: dict
    node_parent: dict
    committee: CommitteeTree
    vertex: dict  # node -> committee vertex

    def dummy(self, t):
        """Dummy on the link from ``t`` toward the root."""
        p = self.node_parent[t]
        return next(d for w, d in self.k.neighbours[t] if w == p)


def _augment(k, l, e):
    if e not in k.owner:
        raise InputError(f"unknown element {e!r}")
    root = k.owner[e]
    comp = next(c for c in k.components if root in c)
    k, l = k.subforest(comp), l.subforest(comp)
    order, node_parent = [root], {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, _ in k.neighbours[u]:
            if w not in node_parent:
                node_parent[w] = u
                order.append(w)
                queue.append(w)
    vertex = {t: i for i, t in enumerate(order)}
    parent = [-1] + [vertex[node_parent[t]] for t in order[1:]]
    labels = list(order)
    blue, red = set(), set()
    kval = {t: _k(k, l, t) for t in order}
    for t in order:
        side, tag = (red, "r") if kval[t] > 0 else (blue, "b")
        for i in range(abs(kval[t])):
            side.add(len(parent))
            parent.append(vertex[t])
            labels.append(f"{t}~{tag}{i + 1}")
    committee = CommitteeTree(tuple(parent), blue, red, (), tuple(labels))
    return AugmentedTree(k, l, root, kval, node_parent, committee, vertex)


def build_augmented_tree(pair, e):
    return _augment(pair.m, pair.n.dual(), e)


@dataclass
class PackingCertificate:
    """Federated packing for the augmented pair (a covering when ``dual``).

    ``s_m``/``s_n`` span ``p`` in the first/second matroid of the pair the
    certificate was built for: (M, N*) for packings, (M*, N) for coverings.
    """

    root: str
    u_nodes: tuple
    p: frozenset
    s_m: frozenset
    s_n: frozenset
    colors: dict
    dual: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def kind(self):
        return "covering" if self.dual else "packing"


def packing_from_red_blockage(aug, x_r):
    """Assemble per-node spanning witnesses from a red blockage on ``aug.committee``."""
    tree = aug.committee
    x_r = frozenset(x_r)
    report = check_blockage(tree.swapped(), x_r, strong=False)
    if not report.passed:
        raise PreconditionViolated("edge set is not a red blockage: "
                                   + "; ".join(n for n, _ in report.failures()))
    v = aug.vertex
    flow = blue_flow(tree, x_r)
    children = {t: [] for t in aug.node_parent}
    for t, p in aug.node_parent.items():
        if p is not None:
            children[p].append(t)
    # root component after cutting links that carry blue flow
    u_nodes, queue = [aug.root], deque([aug.root])
    while queue:
        t = queue.popleft()
        for c in children[t]:
            if v[c] not in flow:
                u_nodes.append(c)
                queue.append(c)
    in_u = set(u_nodes)

    has_blue = {}
    for t in reversed(list(aug.node_parent)):
        has_blue[t] = aug.kval[t] < 0 or any(has_blue[c] for c in children[t])
    z = tuple(ordered(t for t in aug.node_parent if not has_blue[t]))

    colors = {aug.root: GREEN}
    for t in u_nodes[1:]:
        up = colors[aug.node_parent[t]]
        colors[t] = up if v[t] in x_r else (YELLOW if up == GREEN else GREEN)

    s_m, s_n, r_sets, f_sets, node_witness = set(), set(), {}, {}, {}
    dummies = aug.k.dummies
    for t in u_nodes:
        r_t = {aug.dummy(c) for c in children[t] if c in in_u and v[c] in x_r}
        f_t = {aug.dummy(c) for c in children[t] if c not in in_u}
        export = aug.dummy(t) if t != aug.root and v[t] in x_r else None
        r_sets[t], f_sets[t] = r_t, f_t
        if aug.kval[t] + len(r_t) < len(f_t) + (export is not None):
            raise FeasibilityViolated(
                f"node {t}: K={aug.kval[t]}, |R|={len(r_t)}, |F|={len(f_t)}"
                + (", exporting" if export else ""), node=t)
        qk = aug.k.matroids[t].minor(r_t, f_t).rank
        ql = aug.l.matroids[t].minor(r_t, f_t).rank
        pool = [e for e in aug.k.matroids[t].ground if e not in r_t and e not in f_t]
        required = [e for e in pool if e in dummies and e != export]
        reals = ordered(e for e in pool if e not in dummies)
        wk, wl = [], []
        (wk if colors[t] == GREEN else wl).extend(required)
        if len(wk) > qk or len(wl) > ql:
            raise FeasibilityViolated(f"node {t}: too many dummies for the {colors[t]} side",
                                      node=t)
        for e in reals:
            if len(wk) < qk:
                wk.append(e)
            elif len(wl) < ql:
                wl.append(e)
        if len(wk) < qk or len(wl) < ql:
            raise FeasibilityViolated(f"node {t}: not enough elements for both witnesses",
                                      node=t)
        node_witness[t] = (tuple(wk), tuple(wl))
        s_m.update(e for e in wk if e not in dummies)
        s_n.update(e for e in wl if e not in dummies)

    good = _good_nodes(aug, u_nodes, children, colors, x_r)
    if set(good) != in_u:
        raise ContractViolated("good-node recursion left nodes unmarked; blockage has a ray",
                               {"not_good": ordered(in_u - set(good))})
    p = frozenset(e for t in u_nodes for e in aug.k.reals(t))
    cert = PackingCertificate(
        aug.root, tuple(u_nodes), p, frozenset(s_m), frozenset(s_n), colors,
        diagnostics={"Z": z, "F": {t: ordered(f) for t, f in f_sets.items() if f},
                     "R": {t: ordered(r) for t, r in r_sets.items() if r},
                     "witness": node_witness, "good": ordered(good)})
    check = verify_packing(aug.k, aug.l, p, cert.s_m, cert.s_n)
    if not check.passed:
        raise ContractViolated("assembled packing does not verify", {"report": check.lines()})
    return cert


def _good_nodes(aug, u_nodes, children, colors, x_r):
    in_u = set(u_nodes)
    good = {t for t in u_nodes if colors[t] == YELLOW}
    changed = True
    while changed:
        changed = False
        for t in u_nodes:
            if t in good:
                continue
            ups = [c for c in children[t] if c in in_u]
            nbrs = ups + ([aug.node_parent[t]] if t != aug.root else [])
            need = ups if t != aug.root and aug.vertex[t] in x_r else nbrs
            if all(w in good for w in need):
                good.add(t)
                changed = True
    return good


def _dual_aug(aug):
    dual = _augment(aug.k.dual(), aug.l.dual(), next(iter(aug.k.reals(aug.root)), None)) \
        if aug.k.reals(aug.root) else None
    if dual is None:
        raise InputError("root node has no real element")
    return dual


def covering_from_strong_blue(aug, x_b):
    """Covering for the pair of ``aug`` from a strong blue blockage.

    The pair (K*, L*) has K negated node-wise, so its augmented tree is
    ``aug.committee`` with colours swapped and ``x_b`` is a red blockage
    there.
    """
    report = check_blockage(aug.committee, frozenset(x_b), strong=True)
    if not report.passed:
        raise PreconditionViolated("edge set is not a strong blue blockage: "
                                   + "; ".join(n for n, _ in report.failures()))
    dual = _dual_aug(aug)
    swapped = aug.committee.swapped()
    if (dual.committee.parent, dual.committee.blue, dual.committee.red) != \
            (swapped.parent, swapped.blue, swapped.red):
        raise ContractViolated("dual augmented tree is not the colour swap")
    cert = packing_from_red_blockage(dual, x_b)
    cert.dual = True
    return cert


def _certify(k, l, e):
    aug = _augment(k, l, e)
    cert = find_certificate(aug.committee)
    if cert.kind is Kind.RED:
        out = packing_from_red_blockage(aug, cert.edges)
    else:
        out = covering_from_strong_blue(aug, cert.edges)
    out.diagnostics["blockage"] = cert
    if e not in out.p:
        raise ContractViolated(f"certificate for {e} does not contain it")
    return out


def packing_or_covering_for_element(pair, e):
    return _certify(pair.m, pair.n.dual(), e)


# --- partition driver -------------------------------------------------------

@dataclass
class PartitionCertificate:
    p: frozenset
    q: frozenset
    s_m: frozenset  # spans P in M
    s_n: frozenset  # spans P in N*
    d_m: frozenset  # spans Q in M*
    d_n: frozenset  # spans Q in N
    blocks: list
    triple: object = None
    report: Report = None


def _residual(k, l, packed, covered):
    """Node-local minor of the pair after contracting packed and deleting covered nodes."""
    rest = [t for t in k.nodes if t not in packed and t not in covered]
    mk, ml = {}, {}
    for t in rest:
        con = [d for w, d in k.neighbours[t] if w in packed]
        dele = [d for w, d in k.neighbours[t] if w in covered]
        mk[t] = k.matroids[t].minor(con, dele)
        ml[t] = l.matroids[t].minor(con, dele)
    keep = set(rest)
    links = [ln for ln in k.links if ln.u in keep and ln.v in keep]
    return TreeOfMatroids(mk, links), TreeOfMatroids(ml, links)


def partition_packing_covering(pair):
    bad = sorted(set(pair.m.hypothesis_violations()) | set(pair.n.hypothesis_violations()))
    if bad:
        raise PreconditionViolated("rank or corank below degree at nodes " + " ".join(bad))
    m, l = pair.m, pair.n.dual()
    packed, covered, blocks = set(), set(), []
    p, q = set(), set()
    s_m, s_n, d_m, d_n = set(), set(), set(), set()

    def absorb(cert):
        if cert.dual:
            covered.update(cert.u_nodes)
            q.update(cert.p)
            d_m.update(cert.s_m)
            d_n.update(cert.s_n)
        else:
            packed.update(cert.u_nodes)
            p.update(cert.p)
            s_m.update(cert.s_m)
            s_n.update(cert.s_n)
        blocks.append(cert)

    # saturate packings in M/P, N*/P
    progress = True
    while progress:
        progress = False
        rk, rl = _residual(m, l, packed, set())
        for e in rk.ground:
            cert = _certify(rk, rl, e)
            if not cert.dual:
                absorb(cert)
                progress = True
                break
    # cover the remainder
    while True:
        rk, rl = _residual(m, l, packed, covered)
        if not rk.ground:
            break
        absorb(_certify(rk, rl, rk.ground[0]))

    result = PartitionCertificate(frozenset(p), frozenset(q), frozenset(s_m), frozenset(s_n),
                                  frozenset(d_m), frozenset(d_n), blocks)
    result.report = _verify_partition(m, l, result)
    if not result.report.passed:
        raise ContractViolated("partition failed verification",
                               {"report": result.report.lines()})
    return result


def _verify_partition(m, l, cert):
    report = Report()
    ground = frozenset(m.ground)
    report.check("P and Q partition E", not (cert.p & cert.q) and cert.p | cert.q == ground)
    for name, ok, detail in verify_packing(m, l, cert.p, cert.s_m, cert.s_n).items:
        report.check(f"packing: {name}", ok, detail)
    for name, ok, detail in verify_covering(m, l, cert.q, cert.d_m, cert.d_n).items:
        report.check(f"covering: {name}", ok, detail)
    return report


def intersection_certificate(pair):
    cert = partition_packing_covering(pair)
    cert.triple = classical_intersection(pair.m, pair.n)
    for name, ok, detail in verify_triple(pair.m, pair.n, cert.triple).items:
        cert.report.check(f"triple: {name}", ok, detail)
    if not cert.report.passed:
        raise ContractViolated("intersection triple failed verification",
                               {"report": cert.report.lines()})
    return cert


def format_partition(cert):
    def js(s):
        return " ".join(ordered(s))

    out = [f"P: {js(cert.p)} | Q: {js(cert.q)}".replace("  ", " ").rstrip(),
           f"SM: {js(cert.s_m)}".rstrip(), f"SN: {js(cert.s_n)}".rstrip(),
           f"DM: {js(cert.d_m)}".rstrip(), f"DN: {js(cert.d_n)}".rstrip()]
    for block in cert.blocks:
        colours = " ".join(f"{t}:{block.colors[t]}" for t in ordered(block.u_nodes))
        out.append(f"block {block.kind} root {block.root} nodes {colours}")
    if cert.triple is not None:
        t = cert.triple
        out.append(f"I: {js(t.common_independent)} |I|={len(t.common_independent)}")
        out.append(f"JM: {js(t.j_m)}".rstrip())
        out.append(f"JN: {js(t.j_n)}".rstrip())
    if cert.report is not None:
        out.append("verified " + ("pass" if cert.report.passed else "FAIL"))
    return "\n".join(out) + "\n"
