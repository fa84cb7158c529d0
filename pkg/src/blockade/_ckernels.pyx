# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels``."""

from libc.stdlib cimport malloc, free


def overflow(const int[:] parent, const unsigned char[:] party, const unsigned char[:] x):
    cdef Py_ssize_t n = parent.shape[0], v, top = 0
    cdef int t
    y = bytearray(n)
    cdef unsigned char[:] yv = y
    cdef int *excess = <int *>malloc(n * sizeof(int))
    cdef int *stack = <int *>malloc(n * sizeof(int))
    try:
        for v in range(n):
            excess[v] = 0
        for v in range(n):
            if x[v] and parent[v] >= 0:
                excess[parent[v]] -= 1
        for v in range(n):
            if party[v] and not x[v] and parent[v] >= 0:
                yv[v] = 1
                stack[top] = <int>v
                top += 1
        while top > 0:
            top -= 1
            t = parent[stack[top]]
            excess[t] += 1
            if excess[t] >= 1 and parent[t] >= 0 and not x[t] and not yv[t]:
                yv[t] = 1
                stack[top] = t
                top += 1
    finally:
        free(excess)
        free(stack)
    return y


def flow(const int[:] parent, const unsigned char[:] party, const unsigned char[:] x):
    cdef Py_ssize_t n = parent.shape[0], b
    cdef int v
    incident = bytearray(n)
    out = bytearray(n)
    cdef unsigned char[:] inc = incident
    cdef unsigned char[:] ov = out
    for b in range(n):
        if x[b]:
            inc[b] = 1
            inc[parent[b]] = 1
    for b in range(n):
        if not party[b] or parent[b] < 0:
            continue
        ov[b] = 1
        v = parent[b]
        while parent[v] >= 0 and not inc[v] and not ov[v]:
            ov[v] = 1
            v = parent[v]
    return out


def leafless(const int[:] parent, const unsigned char[:] open_, const unsigned char[:] s):
    cdef Py_ssize_t n = parent.shape[0], v, top = 0
    cdef int p, w
    out = bytearray(s)
    cdef unsigned char[:] ov = out
    cdef int *indeg = <int *>malloc(n * sizeof(int))
    cdef int *stack = <int *>malloc(n * sizeof(int))
    try:
        for v in range(n):
            indeg[v] = 0
        for v in range(n):
            if ov[v]:
                indeg[parent[v]] += 1
        for v in range(n):
            if ov[v] and indeg[v] == 0 and not open_[v]:
                stack[top] = <int>v
                top += 1
        while top > 0:
            top -= 1
            w = stack[top]
            ov[w] = 0
            p = parent[w]
            indeg[p] -= 1
            if indeg[p] == 0 and ov[p] and not open_[p]:
                stack[top] = p
                top += 1
    finally:
        free(indeg)
        free(stack)
    return out


def fixed_pair(const int[:] parent, const unsigned char[:] blue, const unsigned char[:] red):
    x = bytearray(parent.shape[0])
    iterations = 0
    while True:
        y = overflow(parent, red, x)
        nx = overflow(parent, blue, y)
        if nx == x:
            return x, y, iterations
        x = nx
        iterations += 1


def independent(const int[:] post, const int[:] node_parent,
                const unsigned long long[:] real_masks, const int[:] ranks,
                unsigned long long mask):
    cdef Py_ssize_t m = ranks.shape[0], i, npost = post.shape[0]
    cdef int t, k, r, p
    cdef int *buf = <int *>malloc(4 * m * sizeof(int))
    cdef int *load = buf
    cdef int *up = buf + m
    cdef int *upcount = buf + 2 * m
    cdef int *down = buf + 3 * m
    try:
        for i in range(4 * m):
            buf[i] = 0
        for i in range(npost):
            t = post[i]
            load[t] = __builtin_popcountll(real_masks[t] & mask)
            p = node_parent[t]
            if p >= 0 and load[t] + upcount[t] >= ranks[t]:
                up[t] = 1
                upcount[p] += 1
        for i in range(npost - 1, -1, -1):
            t = post[i]
            p = node_parent[t]
            if p >= 0:
                down[t] = 1 if load[p] + upcount[p] - up[t] + down[p] >= ranks[p] else 0
            k = upcount[t] + down[t]
            r = ranks[t]
            if load[t] > r - (k if k < r else r):
                return False
        return True
    finally:
        free(buf)


cdef extern from *:
    int __builtin_popcountll(unsigned long long)
