"""Near-additive (1+eps, beta)-spanners and emulators.

Superclustering-and-interconnection over an initially singleton partition:
at phase i every cluster is sampled with probability 1/deg_i; a bounded BFS
forest from the sampled centers absorbs every unsampled cluster it reaches,
and the clusters left over (the unclustered set U_i) connect to every
partition center within half the exploration radius, by shortest paths
(spanner) or exact-distance virtual edges (emulator).  Radii obey
R_{i+1} = delta_i + R_i = (1/eps)^i + 5 R_i, and the concluding phase runs
interconnection only.

Distance thresholds are computed in exact rational arithmetic: BFS depths
are floors of the paper's real-valued schedule, and the additive bound
4 * sum_j R_j 2^(ell-j) is reported exactly.

Phase 0 interconnection inserts *all* edges incident on unclustered
vertices.  (The basic construction's prose only mentions neighbors that are
themselves unclustered, but the stretch argument, the size accounting and
the distributed variant all require every incident edge; dropping the
clustered neighbors can disconnect the spanner.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _rng
from .graph import Graph, bfs_bounded
from .multiplicative import GiveUpError

STREAM_NEARADD = 3
RAD_CONST = 2          # the c with R_i <= c (1/eps)^(i-1); eps < 1/10 makes it 2
KAPPA_BOUND_CONST = 8  # constant in the admissible-kappa bound
CAP_CONST = 4          # visitor cap c ln(n) deg_i for the interconnection BFS

VARIANTS = ("basic", "improved", "emulator")


def radius_sequence(eps: Fraction, upto: int) -> list[Fraction]:
    """R_0..R_upto with R_0 = 0 and R_{i+1} = (1/eps)^i + 5 R_i."""
    inv = Fraction(1) / eps
    out = [Fraction(0)]
    for i in range(upto):
        out.append(inv ** i + 5 * out[i])
    return out


def distance_thresholds(eps: Fraction, upto: int) -> list[Fraction]:
    """delta_i = (1/eps)^i + 4 R_i for i = 0..upto."""
    inv = Fraction(1) / eps
    R = radius_sequence(eps, upto)
    return [inv ** i + 4 * R[i] for i in range(upto + 1)]


def additive_bound(eps: Fraction, ell: int) -> Fraction:
    """Concrete additive error 4 * sum_{j=1..ell} R_j 2^(ell-j)."""
    R = radius_sequence(eps, ell)
    return 4 * sum((R[j] * 2 ** (ell - j) for j in range(1, ell + 1)),
                   Fraction(0))


@dataclass(frozen=True)
class PhaseSchedule:
    """Degree/distance schedule of one run; all thresholds exact Fractions."""
    variant: str
    n: int
    kappa: int
    rho: float
    eps_user: float
    eps: Fraction           # internal eps = eps_user / (16 c ell), c = 2
    a: float | None         # improved-variant constant
    i0: int
    i1: int
    ell: int
    deg: tuple              # float degree parameter per phase 0..i1
    delta: tuple            # Fraction delta_i per phase 0..ell
    R: tuple                # Fraction R_i, i = 0..ell

    def beta(self) -> float:
        return float(additive_bound(self.eps, self.ell))

    def depth(self, i: int) -> int:
        return int(min(self.delta[i], self.n))

    def half_depth(self, i: int) -> int:
        return int(min(self.delta[i] / 2, self.n))


def beta_bound(schedule: PhaseSchedule) -> float:
    return schedule.beta()


def _log2(x: float) -> float:
    return math.log2(x)


def make_schedule(n: int, kappa: int, eps_user: float, rho: float,
                  variant: str) -> PhaseSchedule:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if n < 2:
        raise ValueError("need at least two vertices")
    if kappa < 2 or kappa != int(kappa):
        raise ValueError("kappa must be an integer >= 2")
    if not (1.0 / kappa <= rho <= 0.5):
        raise ValueError(f"rho must lie in [1/kappa, 1/2] = [{1.0 / kappa}, 0.5]")
    if not (0 < eps_user <= 1):
        raise ValueError("eps_user must lie in (0, 1]")

    a = None
    if variant == "basic":
        i0 = max(0, math.floor(_log2(kappa * rho)))
        i1 = i0 + math.ceil((kappa + 1) / (kappa * rho)) - 2
    elif variant == "improved":
        a = _log2(_log2(kappa)) if kappa >= 16 else 2.0
        i0 = max(0, min(math.floor(_log2(a * kappa * rho)),
                        math.floor(kappa * rho)))
        i1 = math.floor(1.0 / rho)
    else:  # emulator
        i0 = max(0, math.floor(_log2(kappa * rho)))
        i1 = math.floor(1.0 / rho)
    ell = i1 + 1

    eps = Fraction(eps_user) / (16 * RAD_CONST * ell)
    assert eps < Fraction(1, 10)

    if variant == "emulator":
        if kappa > _log2(n):
            raise ValueError(
                f"emulator variant requires kappa <= log2(n) = {_log2(n):.2f}")
    else:
        lll = max(_log2(max(_log2(max(_log2(n), 1.0)), 1.0)), 0.0)
        kmax = KAPPA_BOUND_CONST * _log2(n) / (
            _log2(1.0 / float(eps)) + _log2(1.0 / rho) + lll)
        if kappa > kmax:
            raise ValueError(
                f"kappa = {kappa} exceeds the admissible bound "
                f"{KAPPA_BOUND_CONST}*log(n)/(log(1/eps)+log(1/rho)+"
                f"logloglog(n)) = {kmax:.2f}")

    deg = []
    for i in range(i1 + 1):
        if variant == "basic":
            expo = (2.0 ** i) / kappa if i <= i0 else rho
            deg.append(float(n) ** expo)
        elif variant == "improved":
            if i <= min(i0, i1):
                deg.append(float(n) ** ((2.0 ** i - 1) / (a * kappa) + 1.0 / kappa))
            elif i == i0 + 1:
                deg.append(float(n) ** (rho / 2.0))
            else:
                deg.append(float(n) ** rho)
        else:  # emulator
            if i <= min(i0, i1):
                deg.append(float(n) ** ((2.0 ** i) / kappa) / 2.0 ** (2.0 ** i - 1))
            elif i == i0 + 1:
                deg.append(float(n) ** (rho / 2.0))
            else:
                deg.append(float(n) ** rho)

    return PhaseSchedule(
        variant=variant, n=n, kappa=kappa, rho=rho, eps_user=eps_user,
        eps=eps, a=a, i0=i0, i1=i1, ell=ell, deg=tuple(deg),
        delta=tuple(distance_thresholds(eps, ell)),
        R=tuple(radius_sequence(eps, ell)))


@dataclass
class Cluster:
    center: int
    members: np.ndarray
    tree: list            # spanner: list of G edges; emulator: (child, w) pairs
    radius: float         # measured radius from the center


@dataclass
class ClusterPartition:
    phase: int
    clusters: list

    def __len__(self):
        return len(self.clusters)

    def membership(self, n: int) -> np.ndarray:
        out = np.full(n, -1, dtype=np.int64)
        for idx, c in enumerate(self.clusters):
            out[c.members] = idx
        return out

    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.clusters], dtype=np.int64)


def singleton_partition(n: int) -> ClusterPartition:
    return ClusterPartition(phase=0, clusters=[
        Cluster(center=v, members=np.array([v], dtype=np.int64),
                tree=[], radius=0.0) for v in range(n)])


def _measure_radius(edges, center, members) -> float:
    """Hop radius of the member set inside the given edge set (BFS)."""
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    dist = {center: 0}
    frontier = [center]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    radius = 0
    for v in members:
        d = dist.get(int(v))
        if d is None:
            raise AssertionError("cluster edge set does not span its members")
        radius = max(radius, d)
    return float(radius)


def supercluster(g: Graph, partition: ClusterPartition, deg: float,
                 depth: int, sample_key: int, variant: str = "basic"):
    """One superclustering step.

    Samples each cluster with probability min(1, 1/deg) (coin keyed by its
    center id), grows a BFS forest of the given depth from sampled centers,
    and absorbs every unsampled cluster whose center the forest reaches.
    Returns (new partition, unclustered clusters, forest path edges,
    virtual star edges (root, center, dist)).
    """
    clusters = partition.clusters
    new_phase = partition.phase + 1
    if not clusters:
        return (ClusterPartition(new_phase, []), [], [], [])
    emulator = variant == "emulator"
    p = min(1.0, 1.0 / deg)
    centers = partition.centers()
    if p >= 1.0:
        sampled_mask = np.ones(len(clusters), dtype=bool)
    else:
        coins = _rng.uniform01(sample_key, centers)
        sampled_mask = coins <= p
    sampled_idx = np.nonzero(sampled_mask)[0]
    if len(sampled_idx) == 0:
        return (ClusterPartition(new_phase, []), list(clusters), [], [])

    sources = centers[sampled_idx]
    forest = bfs_bounded(g, sources, depth)
    by_center = {int(centers[i]): i for i in range(len(clusters))}

    assoc = {int(centers[i]): [] for i in sampled_idx}
    unclustered = []
    path_edges = []
    virtual_edges = []
    for i, c in enumerate(clusters):
        if sampled_mask[i]:
            continue
        rc = c.center
        if forest.dist[rc] < 0:
            unclustered.append(c)
            continue
        root = int(forest.root[rc])
        assoc[root].append(i)
        if emulator:
            virtual_edges.append((root, rc, int(forest.dist[rc])))
        else:
            v = rc
            while forest.dist[v] > 0:
                u = int(forest.parent[v])
                path_edges.append((min(u, v), max(u, v)))
                v = u

    new_clusters = []
    for i in sampled_idx:
        c = clusters[int(i)]
        kids = assoc[int(c.center)]
        if not kids:
            new_clusters.append(Cluster(c.center, c.members, c.tree, c.radius))
            continue
        members = np.concatenate([c.members] +
                                 [clusters[j].members for j in kids])
        if emulator:
            tree = list(c.tree)
            radius = c.radius
            for j in kids:
                kid = clusters[j]
                w = int(forest.dist[kid.center])
                tree.append((kid.center, w))
                radius = max(radius, w + kid.radius)
            new_clusters.append(Cluster(c.center, members, tree, radius))
        else:
            edges = list(c.tree)
            for j in kids:
                edges.extend(clusters[j].tree)
            for j in kids:
                rc = clusters[j].center
                v = rc
                while forest.dist[v] > 0:
                    u = int(forest.parent[v])
                    edges.append((min(u, v), max(u, v)))
                    v = u
            radius = _measure_radius(edges, c.center, members)
            new_clusters.append(Cluster(c.center, members, edges, radius))

    return (ClusterPartition(new_phase, new_clusters), unclustered,
            sorted(set(path_edges)), virtual_edges)


def interconnect(g: Graph, partition: ClusterPartition, unclustered: list,
                 half_depth: int, phase: int, cap: float | None = None):
    """Connect each unclustered cluster center to every partition center
    within half_depth hops.

    phase 0 is special: every unclustered singleton adds all its incident
    edges.  For phase >= 1 returns shortest-path edge lists per discovered
    pair plus a per-vertex visitor count against the cap (overflows are
    reported, never silently dropped).
    Returns (pairs [(rc, rc', dist, path_edges)], edges, overflow).
    """
    if phase == 0:
        edges = set()
        for c in unclustered:
            v = int(c.center)
            for u in g.neighbors(v):
                edges.add((min(v, int(u)), max(v, int(u))))
        return [], sorted(edges), False
    if not unclustered:
        return [], [], False
    center_of = {int(c.center): i for i, c in enumerate(partition.clusters)}
    visits = np.zeros(g.n, dtype=np.int64)
    pairs = []
    seen = set()
    edges = set()
    overflow = False
    for c in sorted(unclustered, key=lambda cl: cl.center):
        rc = int(c.center)
        forest = bfs_bounded(g, [rc], half_depth)
        reached = forest.dist >= 0
        visits[reached] += 1
        if cap is not None and (visits[reached] > cap).any():
            overflow = True
        for target in np.nonzero(reached)[0]:
            tgt = int(target)
            if tgt == rc or tgt not in center_of:
                continue
            key = (min(rc, tgt), max(rc, tgt))
            if key in seen:
                continue
            seen.add(key)
            path = []
            v = tgt
            while forest.dist[v] > 0:
                u = int(forest.parent[v])
                path.append((min(u, v), max(u, v)))
                v = u
            pairs.append((rc, tgt, int(forest.dist[tgt]), path))
            edges.update(path)
    return pairs, sorted(edges), overflow


@dataclass
class PhaseStats:
    phase: int
    deg: float
    delta: float
    clusters: int
    unclustered: int
    edges_added: int


@dataclass
class NearAdditiveResult:
    n: int
    variant: str
    schedule: PhaseSchedule
    eu: np.ndarray
    ev: np.ndarray
    weights: np.ndarray | None
    seed: int
    attempts: int
    phase_stats: list
    unclustered_record: list   # phase -> list of member arrays retired there
    beta: float

    @property
    def edge_count(self) -> int:
        return len(self.eu)

    @property
    def is_emulator(self) -> bool:
        return self.variant == "emulator"

    def subgraph(self) -> Graph:
        return Graph.from_edges(self.n, self.eu, self.ev, self.weights)

    to_graph = subgraph

    def header_comments(self):
        s = self.schedule
        lines = [f"algo=nearadd variant={self.variant} kappa={s.kappa} "
                 f"eps_user={s.eps_user!r} rho={s.rho!r} seed={self.seed} "
                 f"attempts={self.attempts} beta={self.beta!r}"]
        for st in self.phase_stats:
            lines.append(f"phase i={st.phase} deg={st.deg!r} delta={st.delta!r} "
                         f"clusters={st.clusters} unclustered={st.unclustered} "
                         f"edges_added={st.edges_added}")
        return lines


def build(g: Graph, kappa: int, eps_user: float, rho: float, variant: str,
          seed: int, max_attempts: int = 16) -> NearAdditiveResult:
    """Run all phases; retries the whole construction on a visitor-cap
    overflow (fresh substreams), which keeps the whp exploration bound an
    invariant rather than a silent truncation."""
    if g.is_weighted:
        raise ValueError("near-additive constructions take unweighted graphs")
    schedule = make_schedule(g.n, kappa, eps_user, rho, variant)
    last_error = None
    for attempt in range(max_attempts):
        result = _run(g, schedule, seed, attempt)
        if result is not None:
            result.attempts = attempt + 1
            return result
        last_error = f"visitor cap exceeded on attempt {attempt}"
    raise GiveUpError(f"near-additive build failed after {max_attempts} "
                      f"attempts: {last_error}")


def _run(g: Graph, schedule: PhaseSchedule, seed: int, attempt: int):
    emulator = schedule.variant == "emulator"
    n = g.n
    partition = singleton_partition(n)
    spanner_edges: set = set()
    virtual: dict = {}
    stats: list[PhaseStats] = []
    retired: list[list[np.ndarray]] = []

    def add_virtual(u, v, w):
        key = (min(u, v), max(u, v))
        prev = virtual.get(key)
        if prev is None or w < prev:
            virtual[key] = w

    for i in range(schedule.i1 + 1):
        deg = schedule.deg[i]
        before = len(spanner_edges) + len(virtual)
        key = _rng.stream_key(seed, STREAM_NEARADD, attempt, i)
        partition_next, unclustered, path_edges, virt_edges = supercluster(
            g, partition, deg, schedule.depth(i), key, schedule.variant)
        if emulator:
            for root, rc, w in virt_edges:
                add_virtual(root, rc, w)
        else:
            spanner_edges.update(path_edges)
        cap = CAP_CONST * math.log(max(n, 2)) * max(deg, 1.0)
        pairs, edges, overflow = interconnect(
            g, partition, unclustered, schedule.half_depth(i), i, cap)
        if overflow:
            return None
        if i == 0:
            if emulator:
                for u, v in edges:
                    add_virtual(u, v, 1)
            else:
                spanner_edges.update(edges)
        else:
            if emulator:
                for rc, tgt, d, _ in pairs:
                    add_virtual(rc, tgt, d)
            else:
                spanner_edges.update(edges)
        stats.append(PhaseStats(
            phase=i, deg=deg, delta=float(schedule.delta[i]),
            clusters=len(partition), unclustered=len(unclustered),
            edges_added=len(spanner_edges) + len(virtual) - before))
        retired.append([c.members for c in unclustered])
        partition = partition_next

    # concluding phase: interconnection only, over the full partition
    ell = schedule.ell
    before = len(spanner_edges) + len(virtual)
    cap = CAP_CONST * math.log(max(n, 2)) * max(float(n) ** schedule.rho, 1.0)
    pairs, edges, overflow = interconnect(
        g, partition, list(partition.clusters), schedule.half_depth(ell),
        ell, cap)
    if overflow:
        return None
    if emulator:
        for rc, tgt, d, _ in pairs:
            add_virtual(rc, tgt, d)
    else:
        spanner_edges.update(edges)
    stats.append(PhaseStats(
        phase=ell, deg=float("nan"), delta=float(schedule.delta[ell]),
        clusters=len(partition), unclustered=len(partition),
        edges_added=len(spanner_edges) + len(virtual) - before))
    retired.append([c.members for c in partition.clusters])

    if emulator:
        items = sorted(virtual.items())
        eu = np.array([k[0] for k, _ in items], dtype=np.int64)
        ev = np.array([k[1] for k, _ in items], dtype=np.int64)
        w = np.array([float(v) for _, v in items], dtype=np.float64)
    else:
        items = sorted(spanner_edges)
        eu = np.array([p[0] for p in items], dtype=np.int64)
        ev = np.array([p[1] for p in items], dtype=np.int64)
        w = None
    return NearAdditiveResult(
        n=n, variant=schedule.variant, schedule=schedule, eu=eu, ev=ev,
        weights=w, seed=seed, attempts=1, phase_stats=stats,
        unclustered_record=retired, beta=schedule.beta())
