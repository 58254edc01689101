"""Multiplicative (2k-1)-spanners from exponential start-time broadcasts.

Every vertex u draws a head start r_u ~ Exp(beta) with beta = ln(c*n)/k and
broadcasts the shifted value for k synchronous rounds.  A vertex x keeps the
edge to a neighbor v exactly when the best broadcast receivable through v
comes within 1 of the best broadcast x receives at all.  When every r_u < k
(radii_ok) the result is a (2k-1)-spanner; expected size is (cn)^(1/k) * n.

The broadcast is realized centrally as k rounds of synchronous relaxation
over the edges (one value per vertex per round), which is the same schedule
the CONGEST simulator executes, so both produce identical edge sets under a
shared seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from ._core import kernels
from .graph import Graph

STREAM_MULT_RADII = 1


class GiveUpError(RuntimeError):
    """Retry budget exhausted; carries diagnostics of the failed attempts."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class ExpClusterParams:
    """Stretch parameter k, success parameter c > 3, and the PRNG seed.

    beta(n) = ln(c*n)/k; radii are drawn per (seed, stream, vertex id), so
    the centralized build and the CONGEST simulation see identical values.
    """
    k: int
    c: float
    seed: int
    attempt: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.c > 3:
            raise ValueError("c must exceed 3")

    def beta(self, n: int) -> float:
        return math.log(self.c * n) / self.k

    def radii_key(self) -> int:
        return _rng.stream_key(self.seed, STREAM_MULT_RADII, self.attempt)


@dataclass(frozen=True)
class BroadcastState:
    """Final per-vertex broadcast knowledge (diagnostic view).

    best_value[x] is m(x) = max_u (r_u - d_G(x,u)) over vertices within k
    hops; best_origin/best_dist/best_via describe the achieving broadcast,
    ties to the smaller origin then smaller via.  value_prev is the state
    one round earlier; the spanner rule reads it for the neighbors.
    """
    k: int
    radii: np.ndarray
    best_value: np.ndarray
    best_origin: np.ndarray
    best_dist: np.ndarray
    best_via: np.ndarray
    value_prev: np.ndarray
    origin_prev: np.ndarray

    def candidates(self, g: Graph, x: int):
        """Retained tuples (origin, via, value) within 1 of best_value[x]."""
        out = []
        if self.radii[x] >= self.best_value[x]:
            out.append((x, -1, float(self.radii[x])))
        for v in g.neighbors(x):
            if self.value_prev[v] >= self.best_value[x]:
                out.append((int(self.origin_prev[v]), int(v),
                            float(self.value_prev[v] - 1.0)))
        return out


@dataclass
class SpannerResult:
    """Edge subset plus the radii draw and retry bookkeeping."""
    n: int
    eu: np.ndarray
    ev: np.ndarray
    radii: np.ndarray | None
    radii_ok: bool
    attempts: int = 1
    k: int | None = None
    c: float | None = None
    delta: float | None = None
    seed: int | None = None
    weights: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def edge_count(self) -> int:
        return len(self.eu)

    def subgraph(self) -> Graph:
        return Graph.from_edges(self.n, self.eu, self.ev, self.weights)

    def header_comments(self):
        items = [("algo", self.diagnostics.get("algo", "mult")),
                 ("k", self.k), ("c", self.c), ("delta", self.delta),
                 ("seed", self.seed), ("attempts", self.attempts),
                 ("radii_ok", int(self.radii_ok))]
        extra = self.diagnostics.get("header_extra", ())
        line = " ".join(f"{key}={val}" for key, val in items if val is not None)
        return [line, *extra]


def sample_radii(params: ExpClusterParams, n: int) -> np.ndarray:
    """i.i.d. Exp(beta) radii via inverse transform, one substream per vertex."""
    beta = params.beta(n)
    return _rng.exponential(params.radii_key(), np.arange(n), beta)


def build_spanner(g: Graph, params: ExpClusterParams,
                  with_state: bool = False):
    """One run of the broadcast construction.

    Returns a SpannerResult (and the BroadcastState when with_state=True).
    radii_ok records whether every r_u < k; only then is the 2k-1 stretch
    guaranteed.  Components are independent by construction: broadcasts never
    cross them, and radii_ok is the conjunction over all vertices.
    """
    if g.is_weighted:
        raise ValueError("build_spanner takes unweighted graphs; "
                         "use weighted.build_weighted_spanner")
    r = sample_radii(params, g.n)
    eu, ev, state = _edges_from_radii(g, r, params.k)
    result = SpannerResult(
        n=g.n, eu=eu, ev=ev, radii=r, radii_ok=bool((r < params.k).all()),
        k=params.k, c=params.c, seed=params.seed,
        diagnostics={"algo": "mult", "attempt": params.attempt,
                     "beta": params.beta(g.n)})
    if with_state:
        return result, state
    return result


def _edges_from_radii(g: Graph, r: np.ndarray, k: int):
    (val_p, org_p, dist_p, via_p,
     val_f, org_f, dist_f, via_f) = kernels.broadcast_rounds(
        g.indptr, g.indices, r, k)
    keep = (val_p[g.ev] >= val_f[g.eu]) | (val_p[g.eu] >= val_f[g.ev])
    state = BroadcastState(k=k, radii=r, best_value=val_f, best_origin=org_f,
                           best_dist=dist_f, best_via=via_f,
                           value_prev=val_p, origin_prev=org_p)
    return g.eu[keep], g.ev[keep], state


def exponential_clusters(state: BroadcastState):
    """Cluster assignment of the exponential start-time clustering.

    Each vertex follows its best-broadcast via pointer; chains end at the
    local centers (best_via == -1, i.e. the vertex's own draw wins locally).
    Returns (cluster root per vertex, pointer-tree edges (child, parent)).
    best_value strictly increases along a chain, so chains are acyclic; they
    have length < k and consist of spanner edges whenever radii_ok holds.
    """
    n = len(state.best_value)
    via = state.best_via
    root = np.full(n, -1, dtype=np.int64)
    tree_u, tree_v = [], []
    for x in range(n):
        if root[x] >= 0:
            continue
        chain = []
        y = x
        while root[y] < 0 and via[y] != -1:
            chain.append(y)
            y = int(via[y])
            if len(chain) > n:
                raise AssertionError("cycle in broadcast via pointers")
        target = int(root[y]) if root[y] >= 0 else y
        root[y] = target
        for z in chain:
            root[z] = target
            tree_u.append(z)
            tree_v.append(int(via[z]))
    return root, (np.array(tree_u, dtype=np.int64),
                  np.array(tree_v, dtype=np.int64))


def edge_bound(n: int, k: int, c: float, delta: float) -> float:
    """Size threshold of the retry wrapper: (1+d)(cn)^(1+1/k)/(c-1) - d(n-1)."""
    return (1 + delta) * (c * n) ** (1 + 1 / k) / (c - 1) - delta * (n - 1)


def expected_attempts(c: float, delta: float) -> float:
    return (1 + delta) / ((1 - 1 / c) * delta)


def build_spanner_guaranteed(g: Graph, k: int, c: float, delta: float,
                             seed: int, max_attempts: int | None = None
                             ) -> SpannerResult:
    """Retry until radii_ok and the edge bound hold simultaneously.

    Each attempt succeeds with probability at least (1-1/c) * delta/(1+delta);
    the default attempt cap is 64x the expected number of attempts.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    threshold = edge_bound(g.n, k, c, delta)
    if max_attempts is None:
        max_attempts = max(8, math.ceil(64 * expected_attempts(c, delta)))
    fail_radii = 0
    fail_size = 0
    last_edges = None
    for attempt in range(max_attempts):
        params = ExpClusterParams(k=k, c=c, seed=seed, attempt=attempt)
        result = build_spanner(g, params)
        last_edges = result.edge_count
        if result.radii_ok and result.edge_count <= threshold:
            result.attempts = attempt + 1
            result.delta = delta
            result.diagnostics["edge_bound"] = threshold
            return result
        if not result.radii_ok:
            fail_radii += 1
        if result.edge_count > threshold:
            fail_size += 1
    raise GiveUpError(
        f"no success in {max_attempts} attempts "
        f"(radii failures {fail_radii}, size failures {fail_size})",
        diagnostics={"max_attempts": max_attempts, "threshold": threshold,
                     "fail_radii": fail_radii, "fail_size": fail_size,
                     "last_edge_count": last_edges})


def preset(name: str, n: int, k: int, eps: float | None = None):
    """Corollary parameter presets mapping to (c, delta).

    linear_time:        c=k, delta=1/k          (needs k >= 4 so that c > 3)
    distributed_eps:    c=3/eps, delta=2/eps    (0 < eps < 1)
    ultra_sparse:       c=k, delta=2/eps        (k >= ln n, 2/k < eps < 1)
    """
    if name == "linear_time":
        if k <= 3:
            raise ValueError("linear_time preset requires k >= 4 (c = k must exceed 3)")
        return float(k), 1.0 / k
    if name == "distributed_eps":
        if eps is None or not (0 < eps < 1):
            raise ValueError("distributed_eps preset requires 0 < eps < 1")
        return 3.0 / eps, 2.0 / eps
    if name == "ultra_sparse":
        if eps is None or not (0 < eps < 1):
            raise ValueError("ultra_sparse preset requires 0 < eps < 1")
        if k < math.log(n):
            raise ValueError(f"ultra_sparse preset requires k >= ln n = {math.log(n):.3f}")
        if not (2.0 / k < eps):
            raise ValueError(f"ultra_sparse preset requires eps > 2/k = {2.0 / k:.3f}")
        if k <= 3:
            raise ValueError("ultra_sparse preset requires k >= 4 (c = k must exceed 3)")
        return float(k), 2.0 / eps
    raise ValueError(f"unknown preset {name!r}")


def ultra_sparse_edge_bound(n: int, k: int, eps: float, const: float = 8.0) -> float:
    """Concrete form of the n(1 + O(ln n)/(eps k)) ultra-sparse target."""
    return n * (1.0 + const * math.log(n) / (eps * k))
