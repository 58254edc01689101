# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; must stay bit-identical to _pykernels (see its docstring)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "cython"

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.float64_t f64


def broadcast_rounds(indptr, indices, r, int k):
    cdef cnp.ndarray[i64, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64)
    cdef int n = ip.shape[0] - 1
    if k < 1:
        raise ValueError("k must be at least 1")

    cdef cnp.ndarray[f64, ndim=1] val = rr.copy()
    cdef cnp.ndarray[i64, ndim=1] origin = np.arange(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] dist = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] via = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] nval = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] norigin = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ndist = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nvia = np.empty(n, dtype=np.int64)
    prev = None

    cdef int t, u
    cdef i64 e, v, o, dd
    cdef f64 cv
    for t in range(1, k + 1):
        if t == k:
            prev = (val.copy(), origin.copy(), dist.copy(), via.copy())
        nval[:] = val
        norigin[:] = origin
        ndist[:] = dist
        nvia[:] = via
        for u in range(n):
            o = origin[u]
            dd = dist[u] + 1
            cv = rr[o] - <f64>dd
            for e in range(ip[u], ip[u + 1]):
                v = idx[e]
                if cv > nval[v]:
                    nval[v] = cv
                    norigin[v] = o
                    ndist[v] = dd
                    nvia[v] = u
                elif cv == nval[v]:
                    if o < norigin[v]:
                        norigin[v] = o
                        ndist[v] = dd
                        nvia[v] = u
                    elif o == norigin[v] and u < nvia[v]:
                        nvia[v] = u
                        ndist[v] = dd
        val, nval = nval, val
        origin, norigin = norigin, origin
        dist, ndist = ndist, dist
        via, nvia = nvia, via
    return (*prev, val, origin, dist, via)


def bfs_multi(indptr, indices, sources, int depth):
    cdef cnp.ndarray[i64, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] srcs = np.ascontiguousarray(sources, dtype=np.int64)
    cdef int n = ip.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] dist = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] root = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] parent = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] frontier = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxt = np.empty(n, dtype=np.int64)
    cdef i64 fn = 0, nn, i, u, v, e, d

    for i in range(srcs.shape[0]):
        u = srcs[i]
        dist[u] = 0
        root[u] = u
        frontier[fn] = u
        fn += 1
    d = 0
    while fn > 0 and d < depth:
        d += 1
        nn = 0
        for i in range(fn):
            u = frontier[i]
            for e in range(ip[u], ip[u + 1]):
                v = idx[e]
                if dist[v] == -1:
                    dist[v] = d
                    root[v] = root[u]
                    nxt[nn] = v
                    nn += 1
                elif dist[v] == d and root[u] < root[v]:
                    root[v] = root[u]
        for i in range(fn):
            u = frontier[i]
            for e in range(ip[u], ip[u + 1]):
                v = idx[e]
                if dist[v] == d and root[v] == root[u]:
                    if parent[v] == -1 or u < parent[v]:
                        parent[v] = u
        frontier, nxt = nxt, frontier
        fn = nn
    return dist, root, parent


def hop_matrix(indptr, indices, sources, int depth):
    cdef cnp.ndarray[i64, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] srcs = np.ascontiguousarray(sources, dtype=np.int64)
    cdef int n = ip.shape[0] - 1
    cdef int s = srcs.shape[0]
    cdef cnp.ndarray[i32, ndim=2] out = np.full((s, n), -1, dtype=np.int32)
    cdef cnp.ndarray[i64, ndim=1] frontier = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxt = np.empty(n, dtype=np.int64)
    cdef i64 fn, nn, i, u, v, e
    cdef i32 d
    cdef int si
    for si in range(s):
        u = srcs[si]
        out[si, u] = 0
        frontier[0] = u
        fn = 1
        d = 0
        while fn > 0 and d < depth:
            d += 1
            nn = 0
            for i in range(fn):
                u = frontier[i]
                for e in range(ip[u], ip[u + 1]):
                    v = idx[e]
                    if out[si, v] == -1:
                        out[si, v] = d
                        nxt[nn] = v
                        nn += 1
            frontier, nxt = nxt, frontier
            fn = nn
    return out


cdef inline void _heap_push(f64* hd, i64* hv, i64* size, f64 d, i64 v):
    cdef i64 i = size[0]
    cdef i64 p
    size[0] += 1
    hd[i] = d
    hv[i] = v
    while i > 0:
        p = (i - 1) >> 1
        if hd[p] > hd[i] or (hd[p] == hd[i] and hv[p] > hv[i]):
            hd[p], hd[i] = hd[i], hd[p]
            hv[p], hv[i] = hv[i], hv[p]
            i = p
        else:
            break


cdef inline void _heap_pop(f64* hd, i64* hv, i64* size):
    cdef i64 i = 0, c
    size[0] -= 1
    cdef i64 last = size[0]
    hd[0] = hd[last]
    hv[0] = hv[last]
    while True:
        c = 2 * i + 1
        if c >= last:
            break
        if c + 1 < last and (hd[c + 1] < hd[c] or (hd[c + 1] == hd[c] and hv[c + 1] < hv[c])):
            c += 1
        if hd[c] < hd[i] or (hd[c] == hd[i] and hv[c] < hv[i]):
            hd[c], hd[i] = hd[i], hd[c]
            hv[c], hv[i] = hv[i], hv[c]
            i = c
        else:
            break


def dijkstra(indptr, indices, weights, int source):
    cdef cnp.ndarray[i64, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int n = ip.shape[0] - 1
    cdef cnp.ndarray[f64, ndim=1] dist = np.full(n, np.inf, dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] parent = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[f64, ndim=1] hd = np.empty(idx.shape[0] + n + 1, dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] hv = np.empty(idx.shape[0] + n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] done = np.zeros(n, dtype=np.uint8)
    cdef i64 hsize = 0
    cdef i64 u, v, e
    cdef f64 d, nd
    dist[source] = 0.0
    _heap_push(&hd[0], &hv[0], &hsize, 0.0, source)
    while hsize > 0:
        d = hd[0]
        u = hv[0]
        _heap_pop(&hd[0], &hv[0], &hsize)
        if done[u]:
            continue
        done[u] = 1
        for e in range(ip[u], ip[u + 1]):
            v = idx[e]
            nd = d + w[e]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                _heap_push(&hd[0], &hv[0], &hsize, nd, v)
    return dist, parent


def dijkstra_matrix(indptr, indices, weights, sources):
    cdef cnp.ndarray[i64, ndim=1] srcs = np.ascontiguousarray(sources, dtype=np.int64)
    cdef int n = len(indptr) - 1
    cdef cnp.ndarray[f64, ndim=2] out = np.empty((srcs.shape[0], n), dtype=np.float64)
    cdef int i
    for i in range(srcs.shape[0]):
        out[i], _ = dijkstra(indptr, indices, weights, srcs[i])
    return out
