"""Exact stretch oracles and Monte Carlo validation.

The distance oracle is plain repeated BFS (unweighted) or repeated Dijkstra
(weighted); quadratic cost, which is fine at verification scale.  Statistical
checks use 3-sigma normal-approximation bands; callers are expected to rerun
a borderline result once with 4x the trials before declaring failure
(three_sigma_band and TrialStats expose what they need).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .graph import (Graph, UNREACHED, bfs_bounded, hop_distance_matrix,
                    weighted_distance_matrix)
from .nearadditive import build as nearadd_build

STREAM_MC = 4
STREAM_TRIALS = 5


@dataclass
class StretchReport:
    alpha: float
    beta: float
    max_stretch: float          # max multiplicative ratio over checked pairs
    max_residual: float         # max of d_H - (1+eps) d_G (near-additive)
    worst_pair: tuple | None
    pairs_checked: int
    violations: list
    mode: str

    @property
    def ok(self) -> bool:
        return not self.violations


def _require_subgraph(g: Graph, h: Graph):
    if h.n != g.n:
        raise ValueError("spanner has a different vertex count")
    if not g.has_edges_of(h):
        raise ValueError("h is not an edge subgraph of g")


def check_multiplicative(g: Graph, h: Graph, alpha: float,
                         mode: str = "edges", tol: float = 1e-9) -> StretchReport:
    """Exact verification of d_H <= alpha * d_G.

    mode="edges" checks only the edges of G, which suffices for subgraph
    spanners (a stretch-alpha path for every edge composes along shortest
    paths); mode="all_pairs" checks every pair exhaustively.
    """
    if mode not in ("edges", "all_pairs"):
        raise ValueError("mode must be 'edges' or 'all_pairs'")
    _require_subgraph(g, h)
    violations = []
    worst = None
    max_stretch = 0.0
    if g.is_weighted:
        dh = weighted_distance_matrix(h)
        if mode == "edges":
            est = dh[g.eu, g.ev]
            base = g.weights
            pairs = len(g.eu)
            ratio = est / base
            idx = np.argmax(ratio) if pairs else None
            for i in np.nonzero(est > alpha * base + tol)[0]:
                violations.append((int(g.eu[i]), int(g.ev[i]),
                                   float(base[i]), float(est[i])))
            if idx is not None:
                max_stretch = float(ratio[idx])
                worst = (int(g.eu[idx]), int(g.ev[idx]))
        else:
            dg = weighted_distance_matrix(g)
            pairs, max_stretch, worst, violations = _all_pairs_mult(
                dg, dh, alpha, tol)
    else:
        if mode == "edges":
            # bounded BFS in H from every vertex; an edge of G needs a path
            # of length <= alpha in H
            depth = int(min(math.floor(alpha + tol), g.n))
            dh = hop_distance_matrix(h, depth=depth)
            est = dh[g.eu, g.ev]
            pairs = len(g.eu)
            bad = est == UNREACHED
            for i in np.nonzero(bad)[0]:
                violations.append((int(g.eu[i]), int(g.ev[i]), 1.0, math.inf))
            if pairs:
                reach = np.where(bad, np.iinfo(np.int32).max, est)
                if bad.any():
                    max_stretch = math.inf
                    worst_i = int(np.nonzero(bad)[0][0])
                else:
                    worst_i = int(np.argmax(est))
                    max_stretch = float(est[worst_i])
                worst = (int(g.eu[worst_i]), int(g.ev[worst_i]))
        else:
            dg = hop_distance_matrix(g).astype(np.float64)
            dh = hop_distance_matrix(h).astype(np.float64)
            dg[dg == UNREACHED] = math.inf
            dh[dh == UNREACHED] = math.inf
            pairs, max_stretch, worst, violations = _all_pairs_mult(
                dg, dh, alpha, tol)
    return StretchReport(alpha=alpha, beta=0.0, max_stretch=max_stretch,
                         max_residual=0.0, worst_pair=worst,
                         pairs_checked=pairs, violations=violations,
                         mode=mode)


def _all_pairs_mult(dg, dh, alpha, tol):
    n = dg.shape[0]
    iu = np.triu_indices(n, k=1)
    base = dg[iu]
    est = dh[iu]
    finite = np.isfinite(base)
    violations = []
    ratio = np.where(finite & (base > 0), est / np.where(base > 0, base, 1.0), 1.0)
    bad = finite & (est > alpha * base + tol)
    for i in np.nonzero(bad)[0]:
        violations.append((int(iu[0][i]), int(iu[1][i]),
                           float(base[i]), float(est[i])))
    if len(base):
        worst_i = int(np.argmax(ratio))
        worst = (int(iu[0][worst_i]), int(iu[1][worst_i]))
        max_stretch = float(ratio[worst_i])
    else:
        worst, max_stretch = None, 0.0
    return int(finite.sum()), max_stretch, worst, violations


def check_near_additive(g: Graph, h, eps: float, beta: float,
                        emulator: bool = False, tol: float = 1e-9
                        ) -> StretchReport:
    """All-pairs check of d_H <= (1+eps) d_G + beta.

    For emulators the lower bound d_G <= d_H is checked as well (including
    that no virtual edge bridges distinct components of G).
    """
    hg = h.subgraph() if hasattr(h, "subgraph") else h
    dg = hop_distance_matrix(g).astype(np.float64)
    dg[dg == UNREACHED] = math.inf
    if hg.is_weighted:
        dh = weighted_distance_matrix(hg)
    else:
        dh = hop_distance_matrix(hg).astype(np.float64)
        dh[dh == UNREACHED] = math.inf
    n = g.n
    iu = np.triu_indices(n, k=1)
    base, est = dg[iu], dh[iu]
    finite = np.isfinite(base)
    violations = []
    upper_bad = finite & (est > (1 + eps) * base + beta + tol)
    for i in np.nonzero(upper_bad)[0]:
        violations.append(("upper", int(iu[0][i]), int(iu[1][i]),
                           float(base[i]), float(est[i])))
    if emulator:
        lower_bad = (est < base - tol) | (~finite & np.isfinite(est))
        for i in np.nonzero(lower_bad)[0]:
            violations.append(("lower", int(iu[0][i]), int(iu[1][i]),
                               float(base[i]), float(est[i])))
    resid = est[finite] - (1 + eps) * base[finite]
    max_res = float(resid.max()) if len(resid) else 0.0
    with np.errstate(invalid="ignore"):
        ratios = est[finite & (base > 0)] / base[finite & (base > 0)]
    max_stretch = float(np.nanmax(ratios)) if len(ratios) else 0.0
    return StretchReport(alpha=1 + eps, beta=beta, max_stretch=max_stretch,
                         max_residual=max_res, worst_pair=None,
                         pairs_checked=int(finite.sum()),
                         violations=violations, mode="all_pairs")


def mc_order_statistics(beta: float, shifts, trials: int, seed: int = 0,
                        t_max: int | None = None) -> dict:
    """Empirical tails Pr[|I| >= t] for the shifted-exponential maximum law.

    I is the index set within 1 of M = max(X_i - d_i), X_i iid Exp(beta).
    The closed form is (1 - e^-beta)^(t-1).  Returns per-t empirical rates
    with Wilson 95% intervals alongside the closed form.
    """
    if trials < 10_000:
        raise ValueError("need at least 1e4 trials for a meaningful tail")
    shifts = np.asarray(shifts, dtype=np.float64)
    n = len(shifts)
    if t_max is None:
        t_max = min(n, 8)
    key = _rng.stream_key(seed, STREAM_MC)
    counts = np.zeros(t_max + 1, dtype=np.int64)
    chunk = max(1, min(trials, 200_000 // max(n, 1) * 16))
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        ids = np.arange(done * n, (done + b) * n, dtype=np.uint64)
        draws = -np.log(_rng.uniform01(key, ids)).reshape(b, n) / beta
        shifted = draws - shifts
        m = shifted.max(axis=1, keepdims=True)
        sizes = (shifted >= m - 1.0).sum(axis=1)
        sizes = np.minimum(sizes, t_max)
        counts += np.bincount(sizes, minlength=t_max + 1)
        done += b
    out = {"beta": beta, "trials": trials, "t": [], "empirical": [],
           "closed_form": [], "wilson_low": [], "wilson_high": []}
    tail = trials
    z = 1.959963984540054
    for t in range(1, t_max + 1):
        if t > 1:
            tail -= int(counts[t - 1])
        p = tail / trials
        cf = (1 - math.exp(-beta)) ** (t - 1)
        denom = 1 + z * z / trials
        center = (p + z * z / (2 * trials)) / denom
        half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
        out["t"].append(t)
        out["empirical"].append(p)
        out["closed_form"].append(cf)
        out["wilson_low"].append(center - half)
        out["wilson_high"].append(center + half)
    return out


@dataclass
class TrialStats:
    trials: int
    edge_counts: list = field(default_factory=list)
    radii_ok_flags: list = field(default_factory=list)
    stretch_ok_flags: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def mean_edges(self) -> float:
        return float(np.mean(self.edge_counts)) if self.edge_counts else math.nan

    @property
    def var_edges(self) -> float:
        return float(np.var(self.edge_counts)) if self.edge_counts else math.nan

    @property
    def radii_ok_rate(self) -> float:
        return (float(np.mean(self.radii_ok_flags))
                if self.radii_ok_flags else math.nan)

    @property
    def stretch_ok_rate(self) -> float:
        return (float(np.mean(self.stretch_ok_flags))
                if self.stretch_ok_flags else math.nan)

    def quantile_edges(self, q: float) -> float:
        return float(np.quantile(self.edge_counts, q))

    def as_dict(self) -> dict:
        return {"trials": self.trials, "mean_edges": self.mean_edges,
                "var_edges": self.var_edges, "radii_ok_rate": self.radii_ok_rate,
                "stretch_ok_rate": self.stretch_ok_rate,
                "errors": len(self.errors)}


def run_trials(builder, trials: int, seed: int = 0, check=None) -> TrialStats:
    """Aggregate independent seeded runs of a builder callable.

    builder(seed) must return an object with edge_count and radii_ok; check
    (optional) maps a result to a bool recorded as the stretch pass flag.
    Individual failures are recorded, not fatal.
    """
    stats = TrialStats(trials=trials)
    for t in range(trials):
        sub = _rng.stream_key(seed, STREAM_TRIALS, t)
        try:
            res = builder(sub)
        except Exception as exc:  # noqa: BLE001 - aggregation must survive
            stats.errors.append((t, repr(exc)))
            continue
        stats.edge_counts.append(res.edge_count)
        flag = getattr(res, "radii_ok", True)
        stats.radii_ok_flags.append(bool(flag))
        if check is not None:
            stats.stretch_ok_flags.append(bool(check(res)))
    return stats


def three_sigma_band(p: float, trials: int) -> float:
    """Half-width of the 3-sigma normal band for a rate estimated at p."""
    return 3.0 * math.sqrt(max(p * (1 - p), 1e-12) / trials)


def round_weights_up(h: Graph, eps: float) -> Graph:
    """Round every edge weight up to the closest power of (1+eps).

    Never decreases a distance and inflates any distance by at most (1+eps).
    """
    if not h.is_weighted:
        raise ValueError("weight rounding needs a weighted graph")
    if eps <= 0:
        raise ValueError("eps must be positive")
    step = math.log1p(eps)
    t = np.ceil(np.log(h.weights) / step - 1e-12)
    t = np.maximum(t, 0.0)
    rounded = (1.0 + eps) ** t
    rounded = np.where(rounded < h.weights, h.weights, rounded)
    return Graph(h.n, h.eu, h.ev, rounded)


@dataclass
class DistanceCertificate:
    eps: float
    beta: float
    distinct_weights: int

    def upper(self, d_g):
        return (1 + self.eps) ** 2 * d_g + (1 + self.eps) * self.beta


def approx_distances(g: Graph, sources, kappa: int, eps: float, rho: float,
                     seed: int = 0, round_weights: bool = True):
    """S x V approximate distances through a rounded emulator.

    Builds the near-additive emulator, rounds its weights up to powers of
    (1+eps), and runs one SSSP per source on the result.  Estimates satisfy
    d_G <= est <= (1+eps)^2 d_G + (1+eps) beta.
    Returns (estimates matrix, DistanceCertificate, emulator result).
    """
    sources = np.asarray(sorted(int(s) for s in np.atleast_1d(sources)),
                         dtype=np.int64)
    emu = nearadd_build(g, kappa=kappa, eps_user=eps, rho=rho,
                        variant="emulator", seed=seed)
    he = emu.subgraph()
    if round_weights:
        he = round_weights_up(he, eps)
    distinct = len(np.unique(he.weights)) if he.m else 0
    est = weighted_distance_matrix(he, sources)
    cert = DistanceCertificate(eps=eps, beta=emu.beta, distinct_weights=distinct)
    return est, cert, emu


def distance_table_rows(g: Graph, sources, est: np.ndarray):
    """CSV rows 'source,target,estimate,exact,ratio' against BFS ground truth."""
    sources = np.asarray(sources, dtype=np.int64)
    exact = hop_distance_matrix(g, sources).astype(np.float64)
    exact[exact == UNREACHED] = math.inf
    rows = []
    for i, s in enumerate(sources):
        for v in range(g.n):
            d, e = float(exact[i, v]), float(est[i, v])
            ratio = e / d if d > 0 and math.isfinite(d) else 1.0
            rows.append((int(s), v, e, d, ratio))
    return rows
