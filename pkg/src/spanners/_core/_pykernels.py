"""Pure numpy kernels; drop-in fallback for the compiled extension.

Semantics are pinned exactly so both backends return bit-identical results:

* broadcast state per vertex is the tuple (value, origin, dist, via) where
  value = r[origin] - dist computed by that one subtraction; ties resolve by
  (max value, min origin, min via);
* BFS roots take the minimum source id over shortest-path predecessors, then
  parents take the minimum predecessor id among those sharing the root;
* Dijkstra pops (dist, vertex) ascending and relaxes on strict improvement.
"""

from __future__ import annotations

import heapq

import numpy as np
from scipy import sparse

NAME = "python"


def _edge_arrays(indptr, indices):
    n = len(indptr) - 1
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    return src, indices


def broadcast_rounds(indptr, indices, r, k):
    """k synchronous relaxation rounds of the shifted-broadcast values.

    Returns two state snapshots, after k-1 and after k rounds:
    (val_prev, origin_prev, dist_prev, via_prev,
     val_fin,  origin_fin,  dist_fin,  via_fin).
    """
    n = len(indptr) - 1
    if k < 1:
        raise ValueError("k must be at least 1")
    src, dst = _edge_arrays(indptr, indices)
    origin = np.arange(n, dtype=np.int64)
    dist = np.zeros(n, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    val = r.astype(np.float64, copy=True)
    prev = (val.copy(), origin.copy(), dist.copy(), via.copy())
    for t in range(1, k + 1):
        if t == k:
            prev = (val.copy(), origin.copy(), dist.copy(), via.copy())
        cand_val = r[origin[src]] - (dist[src] + 1.0)
        best = val.copy()
        np.maximum.at(best, dst, cand_val)
        achieves = cand_val == best[dst]
        omin = np.full(n, n, dtype=np.int64)
        np.minimum.at(omin, dst[achieves], origin[src[achieves]])
        cur_ok = val == best
        new_origin = np.where(cur_ok, np.minimum(origin, omin), omin)
        achieves2 = achieves & (origin[src] == new_origin[dst])
        vmin = np.full(n, n, dtype=np.int64)
        np.minimum.at(vmin, dst[achieves2], src[achieves2])
        cur_ok2 = cur_ok & (origin == new_origin)
        new_via = np.where(cur_ok2, np.minimum(via, vmin), vmin)
        dmin = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(dmin, dst[achieves2], dist[src[achieves2]] + 1)
        new_dist = np.where(cur_ok2, dist, dmin)
        val, origin, dist, via = best, new_origin, new_via, new_dist
    return (*prev, val, origin, dist, via)


def bfs_multi(indptr, indices, sources, depth):
    """Layered multi-source BFS with deterministic root/parent tie-breaking."""
    n = len(indptr) - 1
    src, dst = _edge_arrays(indptr, indices)
    dist = np.full(n, -1, dtype=np.int64)
    root = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[sources] = 0
    root[sources] = sources
    in_frontier = np.zeros(n, dtype=bool)
    in_frontier[sources] = True
    for d in range(1, depth + 1):
        e = in_frontier[src] & (dist[dst] == -1)
        if not e.any():
            break
        tgt = dst[e]
        dist[tgt] = d
        rtmp = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(rtmp, tgt, root[src[e]])
        root[tgt] = rtmp[tgt]
        e2 = e & (root[src] == root[dst]) & (dist[dst] == d)
        ptmp = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(ptmp, dst[e2], src[e2])
        parent[dst[e2]] = ptmp[dst[e2]]
        in_frontier = np.zeros(n, dtype=bool)
        in_frontier[tgt] = True
    return dist, root, parent


def hop_matrix(indptr, indices, sources, depth):
    """Hop distances from each source as an int32 matrix (-1 = unreached)."""
    n = len(indptr) - 1
    s = len(sources)
    adj = sparse.csr_matrix(
        (np.ones(len(indices), dtype=np.uint8), indices, indptr), shape=(n, n))
    dist = np.full((s, n), -1, dtype=np.int32)
    dist[np.arange(s), sources] = 0
    frontier = np.zeros((s, n), dtype=np.uint8)
    frontier[np.arange(s), sources] = 1
    for d in range(1, depth + 1):
        reach = (frontier @ adj) > 0
        new = reach & (dist == -1)
        if not new.any():
            break
        dist[new] = d
        frontier = new.astype(np.uint8)
    return dist


def dijkstra(indptr, indices, weights, source):
    n = len(indptr) - 1
    dist = np.full(n, np.inf, dtype=np.float64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = np.zeros(n, dtype=bool)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = d + weights[e]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, parent


def dijkstra_matrix(indptr, indices, weights, sources):
    out = np.empty((len(sources), len(indptr) - 1), dtype=np.float64)
    for i, s in enumerate(sources):
        out[i], _ = dijkstra(indptr, indices, weights, int(s))
    return out
