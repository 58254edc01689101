"""Immutable undirected graphs in CSR form, generators, BFS/Dijkstra and file I/O.

The adjacency is stored as (indptr, indices) with neighbor lists sorted
ascending; that ordering is the tie-breaking substrate every randomized
construction in this package relies on for reproducibility.  Hop distances are
64-bit integers with ``UNREACHED`` (-1) as the dedicated sentinel; weighted
distances are float64 with ``inf`` for unreachable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from ._core import kernels

UNREACHED = -1  # hop-distance sentinel; never used in arithmetic


class GraphFormatError(ValueError):
    """Raised for malformed edge-list files; message carries the line number."""


class Graph:
    """Undirected simple graph; optionally weighted with positive weights.

    Vertices are 0..n-1.  ``eu``/``ev`` hold each undirected edge once with
    eu < ev, lexicographically sorted; ``weights`` aligns with them when
    present.  All arrays are read-only after construction, so instances are
    safe to share across threads.
    """

    __slots__ = ("n", "m", "indptr", "indices", "eu", "ev", "weights",
                 "_wcsr", "_edge_src")

    def __init__(self, n, eu, ev, weights=None):
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)
            if np.any(weights <= 0):
                raise ValueError("edge weights must be strictly positive")
        self.n = int(n)
        self.m = len(eu)
        self.eu = eu
        self.ev = ev
        self.weights = weights
        # symmetric CSR, neighbor lists sorted ascending
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, eu, 1)
        np.add.at(deg, ev, 1)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        src = np.concatenate([eu, ev])
        dst = np.concatenate([ev, eu])
        order = np.lexsort((dst, src))
        self.indptr = indptr
        self.indices = dst[order]
        if weights is not None:
            self._wcsr = np.concatenate([weights, weights])[order]
            self._wcsr.setflags(write=False)
        else:
            self._wcsr = None
        self._edge_src = src[order]
        for a in (self.eu, self.ev, self.indptr, self.indices, self._edge_src):
            a.setflags(write=False)
        if weights is not None:
            self.weights.setflags(write=False)

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_edges(n, eu, ev, weights=None, collapse=True):
        """Build a graph from an edge list.

        Parallel edges are collapsed keeping the minimum weight (the
        constructions assume simple graphs); with collapse=False duplicates
        raise instead.  Self-loops always raise.
        """
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        if len(eu) != len(ev):
            raise ValueError("eu and ev must have equal length")
        if len(eu) and (eu.min() < 0 or ev.min() < 0 or
                        eu.max() >= n or ev.max() >= n):
            raise ValueError("vertex id out of range")
        if np.any(eu == ev):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(eu, ev)
        hi = np.maximum(eu, ev)
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)
            order = np.lexsort((weights, hi, lo))
        else:
            order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        if weights is not None:
            weights = weights[order]
        if len(lo):
            dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
            if dup.any():
                if not collapse:
                    raise ValueError("duplicate edge")
                keep = np.concatenate([[True], ~dup])  # min weight sorts first
                lo, hi = lo[keep], hi[keep]
                if weights is not None:
                    weights = weights[keep]
        return Graph(n, lo, hi, weights)

    # -- basic accessors ---------------------------------------------------

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def csr_weights(self) -> np.ndarray:
        if self._wcsr is None:
            return np.ones(len(self.indices), dtype=np.float64)
        return self._wcsr

    def edge_key_set(self) -> set:
        return set(zip(self.eu.tolist(), self.ev.tolist()))

    def has_edges_of(self, other: "Graph") -> bool:
        """True when every edge of `other` is an edge of this graph."""
        return other.edge_key_set() <= self.edge_key_set()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or self.m != other.m:
            return False
        if not (np.array_equal(self.eu, other.eu) and
                np.array_equal(self.ev, other.ev)):
            return False
        if (self.weights is None) != (other.weights is None):
            return False
        if self.weights is not None:
            return np.array_equal(self.weights, other.weights)
        return True

    def __repr__(self):
        w = "weighted" if self.is_weighted else "unweighted"
        return f"Graph(n={self.n}, m={self.m}, {w})"


@dataclass(frozen=True)
class BfsForest:
    """Bounded multi-source BFS result.

    dist: hop distance from the nearest source (UNREACHED beyond the bound);
    root: the source claiming each vertex, ties to the smaller source id;
    parent: predecessor on a shortest path from the claimed root, ties to the
    smaller parent id.  Sources have parent UNREACHED and dist 0.
    """
    dist: np.ndarray
    parent: np.ndarray
    root: np.ndarray


def bfs_bounded(g: Graph, sources, depth: int) -> BfsForest:
    """Exact hop distances from a source set, explored to a depth bound."""
    sources = np.asarray(sorted(set(int(s) for s in np.atleast_1d(sources))),
                         dtype=np.int64)
    if len(sources) == 0:
        raise ValueError("source set must be nonempty")
    if sources[0] < 0 or sources[-1] >= g.n:
        raise ValueError("source id out of range")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    dist, root, parent = kernels.bfs_multi(g.indptr, g.indices, sources,
                                           int(min(depth, g.n)))
    return BfsForest(dist=dist, parent=parent, root=root)


def dijkstra(g: Graph, source: int):
    """Single-source weighted distances (unit weights when unweighted).

    Returns (dist, parent); unreachable entries are inf / UNREACHED.
    """
    if not (0 <= source < g.n):
        raise ValueError("source id out of range")
    return kernels.dijkstra(g.indptr, g.indices, g.csr_weights(), int(source))


def hop_distance_matrix(g: Graph, sources=None, depth=None) -> np.ndarray:
    """Rows of exact hop distances (int32, UNREACHED where out of range)."""
    if sources is None:
        sources = np.arange(g.n, dtype=np.int64)
    else:
        sources = np.asarray(sources, dtype=np.int64)
    if depth is None:
        depth = g.n
    return kernels.hop_matrix(g.indptr, g.indices, sources, int(depth))


def weighted_distance_matrix(g: Graph, sources=None) -> np.ndarray:
    """Rows of exact weighted distances via repeated Dijkstra."""
    if sources is None:
        sources = np.arange(g.n, dtype=np.int64)
    else:
        sources = np.asarray(sources, dtype=np.int64)
    return kernels.dijkstra_matrix(g.indptr, g.indices, g.csr_weights(),
                                   sources)


def connected_components(g: Graph) -> np.ndarray:
    """Component label per vertex (labels are the smallest member ids)."""
    label = np.full(g.n, UNREACHED, dtype=np.int64)
    for v in range(g.n):
        if label[v] != UNREACHED:
            continue
        dist, _, _ = kernels.bfs_multi(g.indptr, g.indices,
                                       np.array([v], dtype=np.int64), g.n)
        label[dist >= 0] = v
    return label


# -- generators ------------------------------------------------------------


def _pairs_from_indices(n: int, idx: np.ndarray):
    """Decode upper-triangle rank idx -> (i, j), i < j, row-major order."""
    idx = idx.astype(np.float64)
    nn = float(n)
    # first guess from the quadratic inverse, then fix up rounding
    i = np.floor(((2 * nn - 1) - np.sqrt((2 * nn - 1) ** 2 - 8 * idx)) / 2)
    i = i.astype(np.int64)
    base = i * (2 * n - i - 1) // 2
    over = base > idx.astype(np.int64)
    while over.any():
        i[over] -= 1
        base = i * (2 * n - i - 1) // 2
        over = base > idx.astype(np.int64)
    base_next = (i + 1) * (2 * n - i - 2) // 2
    under = base_next <= idx.astype(np.int64)
    while under.any():
        i[under] += 1
        base_next = (i + 1) * (2 * n - i - 2) // 2
        under = base_next <= idx.astype(np.int64)
    base = i * (2 * n - i - 1) // 2
    j = idx.astype(np.int64) - base + i + 1
    return i, j


def _sample_er_edges(n: int, p: float, rng: np.random.Generator):
    total = n * (n - 1) // 2
    if total == 0:
        return (np.empty(0, dtype=np.int64),) * 2
    m = int(rng.binomial(total, p))
    if m == 0:
        return (np.empty(0, dtype=np.int64),) * 2
    if total <= 4_000_000:
        idx = rng.choice(total, size=m, replace=False)
    else:
        # rejection sampling of distinct ranks; cheap for sparse graphs
        idx = np.empty(0, dtype=np.uint64)
        while len(idx) < m:
            need = m - len(idx)
            draw = rng.integers(0, total, size=int(need * 1.1) + 16,
                                dtype=np.uint64)
            idx = np.unique(np.concatenate([idx, draw]))
        idx = np.sort(rng.permutation(idx)[:m])
    return _pairs_from_indices(n, np.sort(np.asarray(idx, dtype=np.int64)))


def generate(model: str, seed: int = 0, **params) -> Graph:
    """Deterministic graph generators.

    Models: erdos_renyi(n, p), grid(w, h), path(n), complete(n),
    random_weighted(n, p, wmax).  The seed only matters for the random models.
    """
    if model in ("erdos_renyi", "er"):
        n, p = int(params["n"]), float(params["p"])
        if not (0.0 <= p <= 1.0):
            raise ValueError("p must lie in [0, 1]")
        rng = _rng.generator(_rng.stream_key(seed, 0xE0))
        eu, ev = _sample_er_edges(n, p, rng)
        return Graph(n, eu, ev)
    if model == "grid":
        w, h = int(params["w"]), int(params["h"])
        if w < 1 or h < 1:
            raise ValueError("grid dimensions must be positive")
        ids = np.arange(w * h, dtype=np.int64).reshape(h, w)
        right = np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()])
        down = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()])
        eu = np.concatenate([right[0], down[0]])
        ev = np.concatenate([right[1], down[1]])
        return Graph.from_edges(w * h, eu, ev)
    if model == "path":
        n = int(params["n"])
        if n < 1:
            raise ValueError("n must be positive")
        ids = np.arange(n - 1, dtype=np.int64)
        return Graph(n, ids, ids + 1)
    if model == "complete":
        n = int(params["n"])
        iu = np.triu_indices(n, k=1)
        return Graph(n, iu[0].astype(np.int64), iu[1].astype(np.int64))
    if model == "random_weighted":
        n, p = int(params["n"]), float(params["p"])
        wmax = float(params["wmax"])
        if not (0.0 <= p <= 1.0):
            raise ValueError("p must lie in [0, 1]")
        if wmax < 1:
            raise ValueError("wmax must be at least 1")
        rng = _rng.generator(_rng.stream_key(seed, 0xE0))
        eu, ev = _sample_er_edges(n, p, rng)
        wrng = _rng.generator(_rng.stream_key(seed, 0xE1))
        weights = wrng.uniform(1.0, wmax, size=len(eu))
        return Graph(n, eu, ev, weights)
    raise ValueError(f"unknown graph model: {model}")


def parse_graph_spec(spec: str, seed: int = 0) -> Graph:
    """Parse generator specs like er:500:0.05, grid:20:20, path:10, complete:60."""
    parts = spec.split(":")
    name = parts[0]
    try:
        if name in ("er", "erdos_renyi"):
            return generate("erdos_renyi", seed, n=int(parts[1]), p=float(parts[2]))
        if name == "grid":
            return generate("grid", seed, w=int(parts[1]), h=int(parts[2]))
        if name == "path":
            return generate("path", seed, n=int(parts[1]))
        if name == "complete":
            return generate("complete", seed, n=int(parts[1]))
        if name in ("rw", "random_weighted"):
            return generate("random_weighted", seed, n=int(parts[1]),
                            p=float(parts[2]), wmax=float(parts[3]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad graph spec {spec!r}: {exc}") from exc
    raise ValueError(f"bad graph spec {spec!r}")


# -- edge-list file format ---------------------------------------------------
#
#   first non-comment line:  "n m"  or  "n m weighted"
#   then m lines:            "u v"  or  "u v w"   (0-based ids, w > 0)
#   lines starting with '#' are comments


def read_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    header = None
    edges_u, edges_v, edges_w = [], [], []
    weighted = False
    m_expected = n = 0
    count = 0
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if header is None:
            if len(toks) not in (2, 3) or (len(toks) == 3 and toks[2] != "weighted"):
                raise GraphFormatError(f"line {lineno}: bad header {line!r}")
            try:
                n, m_expected = int(toks[0]), int(toks[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad header {line!r}")
            weighted = len(toks) == 3
            header = lineno
            continue
        want = 3 if weighted else 2
        if len(toks) != want:
            raise GraphFormatError(f"line {lineno}: expected {want} fields, got {len(toks)}")
        try:
            u, v = int(toks[0]), int(toks[1])
            w = float(toks[2]) if weighted else None
        except ValueError:
            raise GraphFormatError(f"line {lineno}: malformed edge {line!r}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex id out of range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        if weighted and w <= 0:
            raise GraphFormatError(f"line {lineno}: nonpositive weight {w}")
        edges_u.append(u)
        edges_v.append(v)
        if weighted:
            edges_w.append(w)
        count += 1
    if header is None:
        raise GraphFormatError("line 1: missing header")
    if count != m_expected:
        raise GraphFormatError(f"header declares {m_expected} edges, file has {count}")
    return Graph.from_edges(n, np.array(edges_u, dtype=np.int64),
                            np.array(edges_v, dtype=np.int64),
                            np.array(edges_w) if weighted else None,
                            collapse=False)


def write_graph(g: Graph, path, header_comments=()) -> None:
    """Write canonical edge-list text; read_graph(write_graph(g)) == g."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in header_comments:
            fh.write(f"# {c}\n")
        tag = " weighted" if g.is_weighted else ""
        fh.write(f"{g.n} {g.m}{tag}\n")
        if g.is_weighted:
            for u, v, w in zip(g.eu.tolist(), g.ev.tolist(), g.weights.tolist()):
                fh.write(f"{u} {v} {w!r}\n")
        else:
            for u, v in zip(g.eu.tolist(), g.ev.tolist()):
                fh.write(f"{u} {v}\n")


def moore_bound(n: int, girth: int) -> float:
    """Edge count cap n^(1 + 2/(g-2)) for girth-g graphs; reporting only."""
    if girth <= 2:
        return math.inf
    return float(n) ** (1.0 + 2.0 / (girth - 2))
