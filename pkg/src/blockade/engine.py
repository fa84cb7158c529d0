"""Overflows, fixed pairs, rayless cutoff and blockage certificates.

Red-side operations run the blue-side code on ``tree.swapped()``. The
certificate search is asymmetric at the root: the blue branch needs
accumulation at least 1 there, the red branch only 0.
"""

from dataclasses import dataclass
from enum import Enum

from . import kernels
from .committee import (
    accumulation,
    accumulation_diff,
    blue_flow,
    from_mask,
    incident_vertices,
    red_flow,
    terminal_vertices,
)
from .errors import ContractViolated, IllegalInput, ParseError, PreconditionViolated
from .report import Report


class Kind(str, Enum):
    STRONG_BLUE = "StrongBlue"
    RED = "Red"


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    edges: frozenset
    opposing_flow: frozenset
    root_accumulation: int


@dataclass(frozen=True)
class FixedPair:
    x: frozenset
    y: frozenset
    iterations: int


def blue_overflow(tree, x, rng=None):
    """Saturate the blue-start edges of ``E - x`` under the overflow rule.

    With ``rng`` the augmenting edge is drawn at random from all eligible
    ones at every step, a slow definition-level route used to check that
    the result does not depend on the choices.
    """
    if rng is None:
        return from_mask(kernels.overflow(tree.parent_buf, tree.blue_mask, tree.mask(x)))
    x = frozenset(x)
    y = {v for v in tree.blue if v not in x and v != tree.root}
    while True:
        eligible = [s for s in tree.edges - x - y
                    if accumulation_diff(tree, y, x, s) >= 1]
        if not eligible:
            return frozenset(y)
        y.add(rng.choice(sorted(eligible)))


def red_overflow(tree, x, rng=None):
    return blue_overflow(tree.swapped(), x, rng)


def fixed_pair(tree):
    """Iterate ``x -> blue_overflow(red_overflow(x))`` from the empty set."""
    x, y, iterations = kernels.fixed_pair(tree.parent_buf, tree.blue_mask, tree.red_mask)
    return FixedPair(from_mask(x), from_mask(y), iterations)


def leafless_union(tree, s):
    """Union of all leafless subforests of ``s``; open vertices count as fed."""
    return from_mask(kernels.leafless(tree.parent_buf, tree.open_mask, tree.mask(s)))


def is_rayless(tree, s):
    return not leafless_union(tree, s)


def cutoff_rayless(tree, x, c):
    """Shrink ``x`` to a rayless subset keeping accumulation where it met ``c``.

    ``c`` maps vertices to integers. Among eligible edges of the current
    leafless union the smallest source is cut first. Capacities must be
    nonnegative at open vertices: cutting there would have to remove the
    virtual ray beyond the frontier, which the stored tree cannot express.
    """
    low = [tree.labels[v] for v in sorted(tree.open) if c[v] < 0]
    if low:
        raise PreconditionViolated("negative capacity at open vertices " + " ".join(low),
                                   witness=low)
    current = set(x)
    while True:
        u = leafless_union(tree, current)
        if not u:
            return frozenset(current)
        for s in sorted(u):
            outside = sum(1 for ch in tree.children[s] if ch in current and ch not in u)
            if outside >= c[s] + 1:
                break
        else:
            raise IllegalInput(u)
        current -= {ch for ch in tree.children[s] if ch in u}


def is_legal(tree, x, c):
    """Return ``(True, None)`` or ``(False, witness)`` by running the cutoff loop."""
    try:
        cutoff_rayless(tree, x, c)
    except IllegalInput as exc:
        return False, exc.witness
    return True, None


def is_illegal_subset(tree, x, s, c):
    """Definition-level test: ``s`` is leafless and starved for ``c``."""
    s = frozenset(s)
    if not s or leafless_union(tree, s) != s:
        return False
    rest = frozenset(x) - s
    return all(accumulation(tree, rest, v) <= c[v] for v in s)


def bad_edges(tree, x, opposing_overflow):
    return frozenset(s for s in x
                     if tree.parent[s] != tree.root and tree.parent[s] in opposing_overflow)


def remove_bad_edges(tree, x):
    """Drop bad edges from ``x`` to obtain a blue blockage; all guarantees are checked."""
    x = frozenset(x)
    over = red_overflow(tree, x)
    support = incident_vertices(tree, x)
    for v in sorted((support - tree.blue - terminal_vertices(tree, x)) | {tree.root}):
        if accumulation_diff(tree, x, over, v) < 0:
            raise PreconditionViolated(
                f"accumulation against the red overflow is negative at {tree.labels[v]}",
                witness=v)
    pruned = x - bad_edges(tree, x, over)
    flow = red_flow(tree, pruned)
    if flow != over:
        raise ContractViolated("red flow of the pruned set differs from the red overflow",
                               {"flow": flow, "overflow": over})
    report = check_blockage(tree, pruned, strong=False)
    if not report.passed:
        raise ContractViolated("pruned set is not a blue blockage", {"report": report.lines()})
    before = accumulation_diff(tree, x, over, tree.root)
    after = accumulation_diff(tree, pruned, flow, tree.root)
    if before != after:
        raise ContractViolated("root accumulation changed", {"before": before, "after": after})
    return pruned


def check_blockage(tree, edges, strong, flow=None, root_accumulation=None):
    """Itemized blockage check with blue as the blocking side of ``tree``.

    ``strong`` additionally demands accumulation at least 1 at the root.
    A red blockage is checked by passing ``tree.swapped()``.
    """
    report = Report()
    edges = frozenset(edges)
    report.check("edges are tree edges", edges <= tree.edges)
    if not edges <= tree.edges:
        return report
    report.check("rayless", is_rayless(tree, edges))
    support = incident_vertices(tree, edges)
    report.check("avoids opposing party", not (support & tree.red))
    actual = red_flow(tree, edges)
    if flow is not None:
        report.check("opposing flow matches", frozenset(flow) == actual)
    bad = [tree.labels[v] for v in sorted((support | {tree.root}) - tree.blue)
           if accumulation_diff(tree, edges, actual, v) < 0]
    report.check("accumulation nonnegative", not bad, ", ".join(bad))
    acc = accumulation_diff(tree, edges, actual, tree.root)
    if strong:
        report.check("strong at root", acc >= 1, f"root accumulation {acc}")
    if root_accumulation is not None:
        report.check("root accumulation matches", acc == root_accumulation,
                     f"claimed {root_accumulation}, actual {acc}")
    return report


def verify_certificate(tree, cert):
    view = tree if cert.kind is Kind.STRONG_BLUE else tree.swapped()
    return check_blockage(view, cert.edges, strong=cert.kind is Kind.STRONG_BLUE,
                          flow=cert.opposing_flow, root_accumulation=cert.root_accumulation)


def _blockage_from_pair(view, x, y, kind):
    # view has the winning side coloured blue; y = red_overflow(x), x = blue_overflow(y)
    capacity = [accumulation(view, y, v) for v in range(view.n)]
    try:
        cut = cutoff_rayless(view, x, capacity)
    except IllegalInput as exc:
        raise ContractViolated("overflow turned out illegal", {"witness": exc.witness}) from exc
    if red_overflow(view, cut) != y:
        raise ContractViolated("red overflow of the cutoff differs from the fixed pair")
    try:
        edges = remove_bad_edges(view, cut)
    except PreconditionViolated as exc:
        raise ContractViolated(f"bad-edge removal precondition failed: {exc}") from exc
    flow = red_flow(view, edges)
    return Certificate(kind, edges, flow, accumulation_diff(view, edges, flow, view.root))


def find_certificate(tree):
    pair = fixed_pair(tree)
    if accumulation_diff(tree, pair.x, pair.y, tree.root) >= 1:
        cert = _blockage_from_pair(tree, pair.x, pair.y, Kind.STRONG_BLUE)
    else:
        cert = _blockage_from_pair(tree.swapped(), pair.y, pair.x, Kind.RED)
    report = verify_certificate(tree, cert)
    if not report.passed:
        raise ContractViolated("certificate failed verification", {"report": report.lines()})
    return cert


# --- certificate text format ------------------------------------------------

def format_certificate(tree, cert):
    return "\n".join([
        f"cert {cert.kind.value}",
        ("edges " + " ".join(tree.names(cert.edges))).rstrip(),
        ("flow " + " ".join(tree.names(cert.opposing_flow))).rstrip(),
        f"rootacc {cert.root_accumulation}",
    ]) + "\n"


def parse_certificate(text, tree=None):
    """Parse a certificate. Vertex labels stay strings unless ``tree`` is given.

    Labels unknown to ``tree`` are mapped to ``-1`` so that verification
    fails rather than parsing.
    """
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        tok = line.split()
        if not tok:
            continue
        if tok[0] in fields:
            raise ParseError(f"duplicate {tok[0]!r} line", lineno)
        fields[tok[0]] = (tok[1:], lineno)
    for key in ("cert", "edges", "rootacc"):
        if key not in fields:
            raise ParseError(f"missing {key!r} line")
    kind_tok, lineno = fields["cert"]
    try:
        kind = Kind(kind_tok[0]) if len(kind_tok) == 1 else None
    except ValueError:
        kind = None
    if kind is None:
        raise ParseError(f"unknown certificate kind {' '.join(kind_tok)!r}", lineno)
    try:
        rootacc = int(fields["rootacc"][0][0])
    except (IndexError, ValueError):
        raise ParseError("rootacc must be an integer", fields["rootacc"][1]) from None

    def resolve(labels):
        if tree is None:
            return frozenset(labels)
        return frozenset(tree.index.get(s, -1) for s in labels)

    flow = resolve(fields["flow"][0]) if "flow" in fields else None
    return Certificate(kind, resolve(fields["edges"][0]), flow, rootacc)


def verify_parsed(tree, cert):
    """Like ``verify_certificate`` but tolerates labels foreign to ``tree``."""
    if -1 in cert.edges or (cert.opposing_flow is not None and -1 in cert.opposing_flow):
        report = Report()
        report.check("edges are tree edges", False, "certificate names unknown vertices")
        return report
    if cert.opposing_flow is None:
        view = tree if cert.kind is Kind.STRONG_BLUE else tree.swapped()
        return check_blockage(view, cert.edges, strong=cert.kind is Kind.STRONG_BLUE,
                              root_accumulation=cert.root_accumulation)
    return verify_certificate(tree, cert)

