"""Pure-Python kernels. Mirrors ``_ckernels.pyx`` call for call.

Trees are passed as a parent array (root has parent -1); edge sets and
vertex marks are byte masks indexed by vertex, an edge being identified
with its source vertex.
"""


def overflow(parent, party, x):
    n = len(parent)
    excess = [0] * n
    for v in range(n):
        if x[v] and parent[v] >= 0:
            excess[parent[v]] -= 1
    y = bytearray(n)
    stack = []
    for v in range(n):
        if party[v] and not x[v] and parent[v] >= 0:
            y[v] = 1
            stack.append(v)
    while stack:
        t = parent[stack.pop()]
        excess[t] += 1
        if excess[t] >= 1 and parent[t] >= 0 and not x[t] and not y[t]:
            y[t] = 1
            stack.append(t)
    return y


def flow(parent, party, x):
    n = len(parent)
    incident = bytearray(n)
    for v in range(n):
        if x[v]:
            incident[v] = 1
            incident[parent[v]] = 1
    out = bytearray(n)
    for b in range(n):
        if not party[b] or parent[b] < 0:
            continue
        out[b] = 1
        v = parent[b]
        while parent[v] >= 0 and not incident[v] and not out[v]:
            out[v] = 1
            v = parent[v]
    return out


def leafless(parent, open_, s):
    n = len(parent)
    out = bytearray(s)
    indeg = [0] * n
    for v in range(n):
        if out[v]:
            indeg[parent[v]] += 1
    stack = [v for v in range(n) if out[v] and indeg[v] == 0 and not open_[v]]
    while stack:
        v = stack.pop()
        out[v] = 0
        p = parent[v]
        indeg[p] -= 1
        if indeg[p] == 0 and out[p] and not open_[p]:
            stack.append(p)
    return out


def fixed_pair(parent, blue, red):
    x = bytearray(len(parent))
    iterations = 0
    while True:
        y = overflow(parent, red, x)
        nx = overflow(parent, blue, y)
        if nx == x:
            return x, y, iterations
        x = nx
        iterations += 1


def independent(post, node_parent, real_masks, ranks, mask):
    """Two-pass load DP over a rooted forest of uniform node matroids.

    ``post`` lists nodes children-first. A side of a link spans the link's
    dummy when the load at its near node reaches that node's rank; spanned
    dummies are contracted at the far node, which cuts the rank left for
    real elements there. Messages run both ways because loops at one end
    of a link matter at the other.
    """
    m = len(ranks)
    load = [0] * m
    up = [0] * m
    upcount = [0] * m
    for t in post:
        load[t] = (real_masks[t] & mask).bit_count()
        p = node_parent[t]
        if p >= 0 and load[t] + upcount[t] >= ranks[t]:
            up[t] = 1
            upcount[p] += 1
    down = [0] * m
    for t in reversed(post):
        p = node_parent[t]
        if p >= 0:
            down[t] = load[p] + upcount[p] - up[t] + down[p] >= ranks[p]
        k = upcount[t] + down[t]
        r = ranks[t]
        if load[t] > r - min(k, r):
            return False
    return True
