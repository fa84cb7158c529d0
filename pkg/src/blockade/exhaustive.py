"""Exhaustive enumeration of small committee trees and the checks run on them."""

import itertools
from dataclasses import dataclass, field

from .committee import CommitteeTree, Outcome, accumulation_diff, vote_outcome
from .engine import Kind, blue_overflow, check_blockage, find_certificate, verify_certificate
from .errors import BlockadeError, SizeGuardExceeded

MAX_ENUM = 9
MAX_EXCLUSIVE = 7


def _canon(parent):
    kids = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            kids[p].append(v)

    def enc(v):
        return "(" + "".join(sorted(enc(c) for c in kids[v])) + ")"
    return enc(0)


def _decode(code):
    parent, stack = [], []
    for ch in code:
        if ch == "(":
            parent.append(stack[-1] if stack else -1)
            stack.append(len(parent) - 1)
        else:
            stack.pop()
    return tuple(parent)


def rooted_trees(n):
    """All unlabeled rooted trees on ``n`` vertices as parent tuples in preorder, root 0."""
    if n < 1:
        return []
    level = {"()"}
    for _ in range(n - 1):
        nxt = set()
        for code in level:
            parent = _decode(code)
            for v in range(len(parent)):
                nxt.add(_canon(parent + (v,)))
        level = nxt
    return [_decode(code) for code in sorted(level)]


def labelings(parent, marks="BR"):
    """Every way to mark each leaf with a symbol from ``marks`` (``-`` leaves it neutral)."""
    base = CommitteeTree(parent)
    leaves = sorted(base.leaves)
    for choice in itertools.product(marks, repeat=len(leaves)):
        yield CommitteeTree(parent, {v for v, m in zip(leaves, choice) if m == "B"},
                            {v for v, m in zip(leaves, choice) if m == "R"})


def _subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def has_both_blockages(tree):
    """Exhaustive search for an edge set family containing both kinds of blockage."""
    strong = red = False
    swapped = tree.swapped()
    for s in _subsets(tree.edges):
        if not strong and check_blockage(tree, s, strong=True).passed:
            strong = True
        if not red and check_blockage(swapped, s, strong=False).passed:
            red = True
        if strong and red:
            return True
    return False


def minimality_violations(tree):
    """Closed proper subsets of blue overflows, over every ``x``; should be empty."""
    out = []
    seeds_of = {}
    for x in _subsets(tree.edges):
        y = blue_overflow(tree, x)
        seeds = seeds_of.setdefault(x, frozenset(v for v in tree.blue if v not in x))
        optional = y - seeds
        for extra in _subsets(optional):
            z = seeds | extra
            if z == y:
                continue
            if not any(accumulation_diff(tree, z, x, s) >= 1
                       for s in tree.edges - x - z):
                out.append((x, z))
    return out


@dataclass
class EnumerationSummary:
    max_n: int
    trees: int = 0
    instances: int = 0
    strong_blue: int = 0
    red: int = 0
    exclusivity_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def check_instance(tree, exclusivity=False):
    """Return a list of failure messages for one labelled tree."""
    problems = []
    try:
        cert = find_certificate(tree)
    except BlockadeError as exc:
        return [f"certificate search raised {type(exc).__name__}: {exc}"], None
    if not verify_certificate(tree, cert).passed:
        problems.append("certificate does not verify")
    vote = vote_outcome(tree).result
    if (cert.kind is Kind.STRONG_BLUE) != (vote is Outcome.BLUE):
        problems.append(f"kind {cert.kind.value} disagrees with vote {vote.value}")
    if exclusivity and has_both_blockages(tree):
        problems.append("both a strong blue and a red blockage exist")
    return problems, cert


def enumerate_all(max_n, exclusive_upto=MAX_EXCLUSIVE):
    if max_n > MAX_ENUM:
        raise SizeGuardExceeded(f"max_n {max_n} exceeds the guard {MAX_ENUM}")
    summary = EnumerationSummary(max_n)
    for n in range(1, max_n + 1):
        for parent in rooted_trees(n):
            summary.trees += 1
            for tree in labelings(parent):
                summary.instances += 1
                exclusive = n <= exclusive_upto
                problems, cert = check_instance(tree, exclusive)
                summary.exclusivity_checked += exclusive
                if cert is not None:
                    if cert.kind is Kind.STRONG_BLUE:
                        summary.strong_blue += 1
                    else:
                        summary.red += 1
                for p in problems:
                    summary.failures.append((parent, sorted(tree.blue), sorted(tree.red), p))
    return summary


def format_summary(summary):
    out = [f"max_n {summary.max_n}", f"trees {summary.trees}",
           f"instances {summary.instances}", f"strong_blue {summary.strong_blue}",
           f"red {summary.red}", f"exclusivity_checked {summary.exclusivity_checked}",
           f"failures {len(summary.failures)}"]
    for parent, blue, red, msg in summary.failures:
        out.append(f"counterexample parent {list(parent)} blue {blue} red {red}: {msg}")
    return "\n".join(out) + "\n"
