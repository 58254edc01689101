"""Weighted (2k-1)(1+eps)-spanners via geometric weight categories.

Edges are split into categories of (1+eps)-close weights; categories taken
every ell-th form one well-separated scale, with consecutive active levels a
factor (1+eps)^ell >= k^c_w apart.  Within a scale the unweighted broadcast
construction runs level by level on a unit-cost quotient graph, contracting
each level's exponential clusters into super-vertices before the next level.
A level is retried with a fresh substream until its radii draw is good, so
the final stretch bound is unconditional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from ._core import kernels
from .graph import Graph
from .multiplicative import (ExpClusterParams, GiveUpError, SpannerResult,
                             build_spanner, exponential_clusters,
                             _edges_from_radii)

STREAM_WEIGHTED = 2


def contraction_exponent(k: int, eps: float) -> int:
    """Separation exponent c_w: default 3, raised until k^-(c_w-1) <= eps."""
    if k == 1:
        return 3  # clusters are singletons; no contraction error at all
    c_w = 3
    if k ** -(c_w - 1) > eps:
        c_w = 2 + math.ceil(math.log(1.0 / eps) / math.log(k))
    return c_w


@dataclass(frozen=True)
class ScaleDecomposition:
    """Partition of the edges into categories, scales and levels.

    category[e] in 1..lam assigns each canonical edge its weight class
    [(1+eps)^(t-1), (1+eps)^t) after normalizing the minimum weight to 1;
    scale j hosts categories t = j (mod ell) as its levels in increasing
    order.  base_weight(t) = (1+eps)^(t-1) in normalized units.
    """
    eps: float
    k: int
    c_w: int
    lam: int
    ell: int
    q: int
    normalization: float
    category: np.ndarray
    scales: tuple  # scale j -> tuple of (t, edge-id array)

    def base_weight(self, t: int) -> float:
        return (1.0 + self.eps) ** (t - 1)

    def nonempty_scales(self) -> int:
        return sum(1 for levels in self.scales
                   if any(len(ids) for _, ids in levels))


def decompose(g: Graph, k: int, eps: float) -> ScaleDecomposition:
    if not g.is_weighted:
        raise ValueError("decompose needs a weighted graph")
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    if k < 1:
        raise ValueError("k must be a positive integer")
    if np.any(g.weights <= 0):
        raise ValueError("weights must be strictly positive")
    c_w = contraction_exponent(k, eps)
    norm = float(g.weights.min()) if g.m else 1.0
    wn = g.weights / norm if g.m else np.empty(0)
    wmax = float(wn.max()) if g.m else 1.0
    step = math.log1p(eps)
    lam = max(1, math.ceil(math.log(wmax) / step - 1e-12)) if wmax > 1 else 1
    t = np.floor(np.log(np.maximum(wn, 1.0)) / step).astype(np.int64) + 1
    t = np.clip(t, 1, lam)
    # fix up float fence posts: w must sit in [(1+eps)^(t-1), (1+eps)^t)
    base = (1.0 + eps) ** (t - 1)
    while np.any(bad := (wn < base) & (t > 1)):
        t[bad] -= 1
        base = (1.0 + eps) ** (t - 1)
    while np.any(bad := (wn >= base * (1.0 + eps)) & (t < lam)):
        t[bad] += 1
        base = (1.0 + eps) ** (t - 1)
    ell = max(1, math.ceil(c_w * math.log(k) / step - 1e-12)) if k > 1 else 1
    q = math.ceil(lam / ell)
    scales = []
    for j in range(ell):
        levels = []
        for tt in range(1, lam + 1):
            if tt % ell == j % ell:
                levels.append((tt, np.nonzero(t == tt)[0].astype(np.int64)))
        scales.append(tuple(levels))
    return ScaleDecomposition(eps=eps, k=k, c_w=c_w, lam=lam, ell=ell, q=q,
                              normalization=norm, category=t,
                              scales=tuple(scales))


@dataclass
class ContractionLevel:
    """Per-level record of one scale's pipeline (test/diagnostic payload)."""
    scale: int
    level: int
    category: int
    pre_map: np.ndarray      # original vertex -> super-vertex anchor before
    post_map: np.ndarray     # ... and after this level's contraction
    chosen_edges: np.ndarray  # original edge ids added to the spanner here
    tree_edges: dict         # anchor -> list of original edge ids spanning it
    quotient_vertices: int
    quotient_edges: int
    attempts: int


def _quotient(g: Graph, level_ids: np.ndarray, vmap: np.ndarray):
    """Contract endpoints through vmap; dedup parallels keeping the
    min-weight representative (ties to the smallest original edge id)."""
    anchors = np.unique(vmap)
    compact = {int(a): i for i, a in enumerate(anchors)}
    su = np.array([compact[int(vmap[u])] for u in g.eu[level_ids]], dtype=np.int64)
    sv = np.array([compact[int(vmap[v])] for v in g.ev[level_ids]], dtype=np.int64)
    keep = su != sv
    su, sv, ids = su[keep], sv[keep], level_ids[keep]
    lo, hi = np.minimum(su, sv), np.maximum(su, sv)
    w = g.weights[ids]
    order = np.lexsort((ids, w, hi, lo))
    lo, hi, ids = lo[order], hi[order], ids[order]
    if len(lo):
        first = np.concatenate([[True], (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])])
    else:
        first = np.zeros(0, dtype=bool)
    return anchors, lo[first], hi[first], ids[first]


def build_weighted_spanner(g: Graph, k: int, eps: float, seed: int,
                           c: float = 4.0, level_retry_cap: int = 64,
                           record_levels: bool = True) -> SpannerResult:
    """Union over scales of contracted per-level unweighted spanners.

    Conditional on nothing: each level retries its radii draw until all are
    below k, so every run satisfies the weighted stretch bound
    (2k-1)(1+eps)(1 + k^-(c_w-1)).
    """
    decomp = decompose(g, k, eps)
    if decomp.lam == 1:
        # single weight class: the pipeline degenerates to exactly the
        # unweighted construction on the unit-cost view of g
        unit = Graph(g.n, g.eu, g.ev)
        attempts = 0
        while True:
            res = build_spanner(unit, ExpClusterParams(k=k, c=c, seed=seed,
                                                       attempt=attempts))
            attempts += 1
            if res.radii_ok:
                break
            if attempts >= level_retry_cap:
                raise GiveUpError(f"single-scale radii retry cap "
                                  f"{level_retry_cap} exceeded")
        keep_ids = _edge_ids_for(g, res.eu, res.ev)
        return _weighted_result(g, decomp, keep_ids, attempts, seed, c, [])

    chosen: list[np.ndarray] = []
    levels_out: list[ContractionLevel] = []
    total_attempts = 0
    for j, levels in enumerate(decomp.scales):
        vmap = np.arange(g.n, dtype=np.int64)
        trees: dict[int, list[int]] = {}
        for li, (t, ids) in enumerate(levels, start=1):
            if len(ids) == 0:
                continue
            anchors, qu, qv, rep = _quotient(g, ids, vmap)
            nq = len(anchors)
            qgraph = Graph(nq, qu, qv)
            attempt = 0
            while True:
                level_seed = _rng.stream_key(seed, STREAM_WEIGHTED, j, t, attempt)
                r = _rng.exponential(_rng.stream_key(level_seed, 1),
                                     np.arange(nq), math.log(c * nq) / k)
                seu, sev, state = _edges_from_radii(qgraph, r, k)
                attempt += 1
                if bool((r < k).all()):
                    break
                if attempt >= level_retry_cap:
                    raise GiveUpError(
                        f"scale {j} level {li} (category {t}): radii retry "
                        f"cap {level_retry_cap} exceeded",
                        diagnostics={"scale": j, "level": li, "category": t})
            total_attempts += attempt
            # quotient spanner edges -> original representatives
            qkeep = {(int(a), int(b)) for a, b in zip(seu, sev)}
            rep_lookup = {(int(a), int(b)): int(e)
                          for a, b, e in zip(qu, qv, rep)}
            level_chosen = np.array(sorted(rep_lookup[p] for p in qkeep),
                                    dtype=np.int64)
            chosen.append(level_chosen)
            # contract the exponential clusters; every pointer-tree edge is a
            # kept quotient edge, so the super-vertex trees live in H
            root, (tu, tv) = exponential_clusters(state)
            new_trees: dict[int, list[int]] = {}
            pre_map = vmap.copy() if record_levels else None
            for qid in range(nq):
                tgt = int(anchors[root[qid]])
                acc = new_trees.setdefault(tgt, [])
                src_anchor = int(anchors[qid])
                acc.extend(trees.get(src_anchor, ()))
            for a, b in zip(tu, tv):
                key = (min(int(a), int(b)), max(int(a), int(b)))
                if key not in qkeep:
                    raise AssertionError("cluster tree edge missing from quotient spanner")
                new_trees[int(anchors[root[a]])].append(rep_lookup[key])
            trees = new_trees
            vmap = np.asarray(anchors[root[
                np.searchsorted(anchors, vmap)]], dtype=np.int64)
            if record_levels:
                levels_out.append(ContractionLevel(
                    scale=j, level=li, category=t, pre_map=pre_map,
                    post_map=vmap.copy(), chosen_edges=level_chosen,
                    tree_edges={a: list(v) for a, v in trees.items()},
                    quotient_vertices=nq, quotient_edges=len(qu),
                    attempts=attempt))
    keep_ids = (np.unique(np.concatenate(chosen)) if chosen
                else np.empty(0, dtype=np.int64))
    return _weighted_result(g, decomp, keep_ids, total_attempts, seed, c,
                            levels_out)


def _edge_ids_for(g: Graph, eu, ev) -> np.ndarray:
    lookup = {(int(a), int(b)): i
              for i, (a, b) in enumerate(zip(g.eu, g.ev))}
    return np.array(sorted(lookup[(int(a), int(b))] for a, b in zip(eu, ev)),
                    dtype=np.int64)


def _weighted_result(g, decomp, keep_ids, attempts, seed, c, levels):
    res = SpannerResult(
        n=g.n, eu=g.eu[keep_ids], ev=g.ev[keep_ids], radii=None,
        radii_ok=True, attempts=max(attempts, 1), k=decomp.k, c=c, seed=seed,
        weights=g.weights[keep_ids],
        diagnostics={
            "algo": "weighted", "eps": decomp.eps, "c_w": decomp.c_w,
            "lambda": decomp.lam, "ell": decomp.ell, "q": decomp.q,
            "levels": levels,
            "header_extra": [f"eps={decomp.eps!r} c_w={decomp.c_w} "
                             f"lambda={decomp.lam} ell={decomp.ell}"],
        })
    return res


def weighted_stretch_bound(k: int, eps: float, c_w: int | None = None) -> float:
    """The guaranteed stretch factor (2k-1)(1+eps)(1 + k^-(c_w-1))."""
    if c_w is None:
        c_w = contraction_exponent(k, eps)
    contraction = 0.0 if k == 1 else float(k) ** -(c_w - 1)
    return (2 * k - 1) * (1 + eps) * (1 + contraction)
