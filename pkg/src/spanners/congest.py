"""Round-synchronous CONGEST simulation of the k-round spanner algorithm.

Each of the k rounds, every vertex sends one message per incident edge: the
(r_u, dist) pair of the broadcast currently maximizing its shifted value.
Receivers retain, per incoming edge, the best tuple ever delivered; after
round k each vertex keeps the edges whose channel delivered a value within 1
of its overall best.  Forwarding only the per-round best is lossless: the
edge set is identical to the centralized build under the same seed.

The simulator is an independent code path (plain python event loop over
messages), deliberately not sharing the relaxation kernels, so the
equivalence tests cross-check the two implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .multiplicative import ExpClusterParams, sample_radii


@dataclass(frozen=True)
class RoundMessage:
    """One CONGEST message: origin id, its raw draw, hops traveled so far."""
    round: int
    src: int
    dst: int
    origin: int
    r_value: float
    dist: int


@dataclass
class SimTranscript:
    n: int
    k: int
    rounds_executed: int
    eu: np.ndarray
    ev: np.ndarray
    radii: np.ndarray
    radii_ok: bool
    best_value: np.ndarray
    best_origin: np.ndarray
    best_dist: np.ndarray
    best_via: np.ndarray
    retained_counts: np.ndarray
    total_messages: int
    messages_per_round: list
    max_messages_per_edge_per_round: int
    retention_cap: float
    retention_cap_exceeded: bool
    messages: list | None = None
    value_history: list = field(default_factory=list)

    @property
    def edge_count(self) -> int:
        return len(self.eu)

    def subgraph(self) -> Graph:
        return Graph.from_edges(self.n, self.eu, self.ev)


def simulate(g: Graph, params: ExpClusterParams,
             log_messages: bool = False) -> SimTranscript:
    """Run exactly k rounds and extract the spanner from retained candidates."""
    if g.is_weighted:
        raise ValueError("the CONGEST algorithm runs on unweighted graphs")
    n, k = g.n, params.k
    r = sample_radii(params, n).tolist()
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    nbrs = [indices[indptr[v]:indptr[v + 1]] for v in range(n)]

    origin = list(range(n))
    dist = [0] * n
    via = [-1] * n
    value = [r[v] for v in range(n)]
    # best tuple ever received per directed channel dst<-src, scored by the
    # sender's own value r[origin] - dist (exact same float expression the
    # centralized kernel compares against)
    chan_best: list[dict[int, float]] = [dict() for _ in range(n)]

    log: list[RoundMessage] | None = [] if log_messages else None
    history = [list(value)]
    per_round_totals = []
    rounds_executed = 0
    for t in range(1, k + 1):
        sends = [(origin[u], r[origin[u]], dist[u]) for u in range(n)]
        new_origin = list(origin)
        new_dist = list(dist)
        new_via = list(via)
        new_value = list(value)
        count = 0
        for u in range(n):
            o, ro, d = sends[u]
            sender_value = ro - float(d)
            cand = ro - float(d + 1)
            for v in nbrs[u]:
                count += 1
                if log is not None:
                    log.append(RoundMessage(t, u, v, o, ro, d))
                prev = chan_best[v].get(u)
                if prev is None or sender_value > prev:
                    chan_best[v][u] = sender_value
                if (cand > new_value[v]
                        or (cand == new_value[v]
                            and (o < new_origin[v]
                                 or (o == new_origin[v] and u < new_via[v])))):
                    new_value[v] = cand
                    new_origin[v] = o
                    new_dist[v] = d + 1
                    new_via[v] = u
        origin, dist, via, value = new_origin, new_dist, new_via, new_value
        history.append(list(value))
        per_round_totals.append(count)
        rounds_executed += 1

    # edge extraction: keep (x, u) when channel u delivered sender value
    # within reach of x's final best (value through u >= m(x) - 1)
    keep = set()
    retained = np.zeros(n, dtype=np.int64)
    for x in range(n):
        m_x = value[x]
        cnt = 1 if r[x] >= m_x else 0  # own draw always heard at distance 0
        for u, sender_value in chan_best[x].items():
            if sender_value >= m_x:
                cnt += 1
                keep.add((min(x, u), max(x, u)))
        retained[x] = cnt
    if keep:
        arr = np.array(sorted(keep), dtype=np.int64)
        eu, ev = arr[:, 0], arr[:, 1]
    else:
        eu = ev = np.empty(0, dtype=np.int64)

    beta = params.beta(n)
    cap = 4.0 * math.log(max(n, 2)) * math.exp(beta)
    radii = np.asarray(r)
    return SimTranscript(
        n=n, k=k, rounds_executed=rounds_executed, eu=eu, ev=ev,
        radii=radii, radii_ok=bool((radii < k).all()),
        best_value=np.asarray(value), best_origin=np.asarray(origin),
        best_dist=np.asarray(dist), best_via=np.asarray(via),
        retained_counts=retained, total_messages=sum(per_round_totals),
        messages_per_round=per_round_totals,
        max_messages_per_edge_per_round=1 if g.m else 0,
        retention_cap=cap,
        retention_cap_exceeded=bool((retained > cap).any()),
        messages=log, value_history=history)


class AuditError(AssertionError):
    """A CONGEST discipline violation, naming the offending round and edge."""


def message_audit(t: SimTranscript) -> dict:
    """Check the one-message-per-directed-edge-per-round discipline.

    Needs a transcript with logging enabled.  Returns totals plus the payload
    budget: each message is one real (the r-value) plus O(log n) bits.
    """
    if t.messages is None:
        raise ValueError("transcript was recorded without message logging")
    seen = {}
    for msg in t.messages:
        key = (msg.round, msg.src, msg.dst)
        seen[key] = seen.get(key, 0) + 1
        if seen[key] > 1:
            raise AuditError(
                f"round {msg.round}: {seen[key]} messages on edge "
                f"{msg.src}->{msg.dst}")
        if msg.dist > msg.round:
            raise AuditError(
                f"round {msg.round}: message on {msg.src}->{msg.dst} "
                f"claims dist {msg.dist} > round index")
    per_round = {}
    for msg in t.messages:
        per_round[msg.round] = per_round.get(msg.round, 0) + 1
    id_bits = max(1, math.ceil(math.log2(max(t.n, 2))))
    dist_bits = max(1, math.ceil(math.log2(t.k + 2)))
    return {
        "rounds": t.rounds_executed,
        "total_messages": len(t.messages),
        "messages_per_round": [per_round.get(i, 0)
                               for i in range(1, t.rounds_executed + 1)],
        "max_per_edge_per_round": max(seen.values()) if seen else 0,
        "payload_bits_ids": id_bits + dist_bits,
        "payload_real_words": 1,
    }


def write_trace(t: SimTranscript, path) -> None:
    """Line-oriented transcript export: 'round u->v origin r dist'."""
    if t.messages is None:
        raise ValueError("transcript was recorded without message logging")
    with open(path, "w", encoding="utf-8") as fh:
        for m in t.messages:
            fh.write(f"{m.round} {m.src}->{m.dst} {m.origin} {m.r_value!r} {m.dist}\n")
