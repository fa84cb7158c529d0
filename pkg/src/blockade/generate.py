"""Seeded random instances for trees, periodic generators and matroid pairs."""

import random

from .committee import CommitteeTree
from .errors import InputError
from .matroids import Link, MatroidPair, TreeOfMatroids, UniformMatroid
from .truncation import PeriodicTreeSpec


def random_tree(rng, n, p_leaf_mark=0.8, p_open=0.0):
    """Random recursive tree on ``n`` vertices with random leaf marks."""
    if n < 1:
        raise InputError("tree needs at least one vertex")
    parent = [-1] + [rng.randrange(i) for i in range(1, n)]
    has_child = set(parent[1:])
    blue, red, opn = set(), set(), set()
    for v in range(1, n):
        if v in has_child:
            continue
        u = rng.random()
        if u < p_open:
            opn.add(v)
        elif u < p_open + p_leaf_mark:
            (blue if rng.random() < 0.5 else red).add(v)
    return CommitteeTree(tuple(parent), blue, red, opn)


def gen_tree(seed, n):
    return random_tree(random.Random(seed), n)


def gen_pgen(seed, states=3, max_children=3):
    if states < 1 or max_children < 1:
        raise InputError("states and max_children must be positive")
    rng = random.Random(seed)
    names = [f"s{i}" for i in range(states)]
    marks = {"s0": None}
    for name in names[1:]:
        marks[name] = rng.choice([None, None, "B", "R"])
    transitions = {}
    inner = [s for s in names if marks[s] is None]
    # chain inner states so all are reachable, then hang leaves off random inner states
    for a, b in zip(inner, inner[1:]):
        transitions.setdefault(a, []).append(b)
    transitions.setdefault(inner[-1], []).append("s0")  # keeps the unfolding infinite
    for s in names:
        if marks[s] is not None:
            transitions.setdefault(rng.choice(inner), []).append(s)
    for s in inner:
        kids = transitions.setdefault(s, [])
        while len(kids) < max_children and rng.random() < 0.6:
            kids.append(rng.choice(names))
        if not kids:
            kids.append(rng.choice(names))
    return PeriodicTreeSpec(marks, {k: tuple(v) for k, v in transitions.items()}, "s0")


def _feasible(k, max_reals, max_rank):
    # a path minimises both the largest degree and the total real count
    return max_rank >= min(k - 1, 2) and max_reals >= max(2 * k - 2, 1)


def random_matroid_pair(rng, max_nodes=6, max_reals=14, max_rank=4, min_nodes=1):
    """Uniform 2-sum pair where every rank and corank is at least the node degree."""
    if min_nodes < 1 or max_reals < 1 or max_rank < 1:
        raise InputError("bounds must be positive")
    sizes = [k for k in range(min_nodes, max_nodes + 1) if _feasible(k, max_reals, max_rank)]
    if not sizes:
        raise InputError("bounds admit no instance satisfying the degree hypothesis")
    while True:
        k = rng.choice(sizes)
        parent = [None] + [rng.randrange(i) for i in range(1, k)]
        deg = [0] * k
        for i in range(1, k):
            deg[i] += 1
            deg[parent[i]] += 1
        if max(deg) > max_rank:
            continue
        # |E(t)| = r + corank with both >= d, and at least one real element
        reals = [max(d, 1) for d in deg]
        budget = max_reals - sum(reals)
        if budget < 0:
            continue
        for i in range(k):
            extra = rng.randint(0, min(2, budget))
            reals[i] += extra
            budget -= extra
        return _assemble(rng, parent, deg, reals, max_rank)


def _assemble(rng, parent, deg, reals, max_rank):
    k = len(parent)
    nodes = [f"t{i + 1}" for i in range(k)]
    grounds = {t: [] for t in nodes}
    links = []
    for i in range(1, k):
        g = f"g{i}"
        links.append(Link(nodes[parent[i]], nodes[i], g))
        grounds[nodes[i]].append(g)
        grounds[nodes[parent[i]]].append(g)
    counter = 0
    for i, t in enumerate(nodes):
        for _ in range(reals[i]):
            counter += 1
            grounds[t].append(f"e{counter}")
    mm, nn = {}, {}
    for i, t in enumerate(nodes):
        size = len(grounds[t])
        lo, hi = deg[i], min(max_rank, size - deg[i])
        mm[t] = UniformMatroid(rng.randint(lo, hi), grounds[t])
        nn[t] = UniformMatroid(rng.randint(lo, hi), grounds[t])
    return MatroidPair(TreeOfMatroids(mm, links), TreeOfMatroids(nn, links))


def gen_tmat(seed, max_nodes=6, max_reals=14, max_rank=4, min_nodes=1):
    return random_matroid_pair(random.Random(seed), max_nodes, max_reals, max_rank, min_nodes)
