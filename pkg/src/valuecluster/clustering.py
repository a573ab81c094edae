"""Clustering of abstracted values over a precomputed distance matrix.

All three algorithms consume only pairwise distances, never the strings
themselves, and are fully deterministic: ties are broken by smallest index
everywhere, so reruns of a session reproduce the identical partition.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .abstraction import AbstractionGroup, AbstractionMapping
from .distance import DistanceMatrix
from .errors import ConfigError, FingerprintMismatchError
from .fingerprint import fingerprint

__all__ = [
    "NOISE",
    "Linkage",
    "Algorithm",
    "HierarchicalOptions",
    "KMedoidsOptions",
    "DBSCANOptions",
    "ClusteringConfig",
    "Clustering",
    "ClusterExpansion",
    "hierarchical_cluster",
    "kmedoids_cluster",
    "dbscan_cluster",
    "run_clustering",
    "expand_to_originals",
]

NOISE = -1


class Linkage(enum.Enum):
    COMPLETE = "complete"
    SINGLE = "single"
    AVERAGE = "average"


class Algorithm(enum.Enum):
    HIERARCHICAL = "hierarchical"
    KMEDOIDS = "kmedoids"
    DBSCAN = "dbscan"


@dataclass(frozen=True)
class HierarchicalOptions:
    linkage: Linkage = Linkage.COMPLETE
    distance_threshold: float | None = None
    n_clusters: int | None = None

    def __post_init__(self):
        if (self.distance_threshold is None) == (self.n_clusters is None):
            raise ConfigError(
                "exactly one of distance_threshold and n_clusters must be set"
            )
        if self.n_clusters is not None and self.n_clusters < 1:
            raise ConfigError("n_clusters must be >= 1")
        if self.distance_threshold is not None and self.distance_threshold < 0:
            raise ConfigError("distance_threshold must be >= 0")


@dataclass(frozen=True)
class KMedoidsOptions:
    k: int
    max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")


@dataclass(frozen=True)
class DBSCANOptions:
    eps: float
    min_samples: int

    def __post_init__(self):
        if self.eps < 0:
            raise ConfigError("eps must be >= 0")
        if self.min_samples < 1:
            raise ConfigError("min_samples must be >= 1")


@dataclass(frozen=True)
class ClusteringConfig:
    algorithm: Algorithm
    hierarchical: HierarchicalOptions | None = None
    kmedoids: KMedoidsOptions | None = None
    dbscan: DBSCANOptions | None = None

    def __post_init__(self):
        active = {
            Algorithm.HIERARCHICAL: self.hierarchical,
            Algorithm.KMEDOIDS: self.kmedoids,
            Algorithm.DBSCAN: self.dbscan,
        }[self.algorithm]
        if active is None:
            raise ConfigError(f"missing options for algorithm {self.algorithm.value}")

    def to_json_dict(self) -> dict:
        d: dict = {"algorithm": self.algorithm.value}
        if self.hierarchical is not None:
            d["hierarchical"] = {
                "linkage": self.hierarchical.linkage.value,
                "distance_threshold": self.hierarchical.distance_threshold,
                "n_clusters": self.hierarchical.n_clusters,
            }
        if self.kmedoids is not None:
            d["kmedoids"] = {
                "k": self.kmedoids.k,
                "max_iter": self.kmedoids.max_iter,
                "seed": self.kmedoids.seed,
            }
        if self.dbscan is not None:
            d["dbscan"] = {"eps": self.dbscan.eps, "min_samples": self.dbscan.min_samples}
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ClusteringConfig":
        h = d.get("hierarchical")
        k = d.get("kmedoids")
        b = d.get("dbscan")
        return cls(
            algorithm=Algorithm(d["algorithm"]),
            hierarchical=HierarchicalOptions(
                linkage=Linkage(h.get("linkage", "complete")),
                distance_threshold=h.get("distance_threshold"),
                n_clusters=h.get("n_clusters"),
            )
            if h
            else None,
            kmedoids=KMedoidsOptions(
                k=k["k"], max_iter=k.get("max_iter", 100), seed=k.get("seed", 0)
            )
            if k
            else None,
            dbscan=DBSCANOptions(eps=b["eps"], min_samples=b["min_samples"]) if b else None,
        )

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.to_json_dict())


@dataclass(frozen=True)
class Clustering:
    """Cluster label per abstracted value; NOISE (-1) only from DBSCAN."""

    labels: tuple[int, ...]
    k: int
    value_index: tuple[str, ...]
    algorithm: Algorithm
    config_fingerprint: str = ""
    matrix_fingerprint: str = ""
    mapping_fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.labels) != len(self.value_index):
            raise ValueError("one label per abstracted value required")
        non_noise = sorted({l for l in self.labels if l != NOISE})
        if non_noise != list(range(self.k)):
            raise ValueError(f"cluster ids must be contiguous 0..{self.k - 1}")

    @property
    def noise_count(self) -> int:
        return sum(1 for l in self.labels if l == NOISE)

    def members(self, cluster_id: int) -> list[int]:
        return [i for i, l in enumerate(self.labels) if l == cluster_id]

    def partition(self) -> set[frozenset[int]]:
        """The clustering as a set of index sets (noise points excluded)."""
        return {frozenset(self.members(c)) for c in range(self.k)}

    def to_json_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "k": self.k,
            "algorithm": self.algorithm.value,
            "config_fingerprint": self.config_fingerprint,
            "matrix_fingerprint": self.matrix_fingerprint,
            "mapping_fingerprint": self.mapping_fingerprint,
            "meta": self.meta,
        }


def _final_clustering(
    cluster_lists: list[list[int]],
    noise: list[int],
    d: DistanceMatrix,
    algorithm: Algorithm,
    config_fingerprint: str,
    meta: dict | None = None,
) -> Clustering:
    cluster_lists = sorted((sorted(m) for m in cluster_lists), key=lambda m: m[0])
    labels = [NOISE] * d.n
    for cid, ms in enumerate(cluster_lists):
        for p in ms:
            labels[p] = cid
    return Clustering(
        labels=tuple(labels),
        k=len(cluster_lists),
        value_index=d.value_index,
        algorithm=algorithm,
        config_fingerprint=config_fingerprint,
        matrix_fingerprint=d.fingerprint,
        mapping_fingerprint=d.mapping_fingerprint,
        meta=meta or {},
    )


def hierarchical_cluster(d: DistanceMatrix, cfg: HierarchicalOptions, config_fingerprint: str = "") -> Clustering:
    """Agglomerative clustering with complete, single or average linkage.

    Starts from singletons and repeatedly merges the pair of clusters with
    minimal linkage (ties: smallest slot index pair), updating linkages via
    the Lance-Williams recurrences.  Stops when the minimal linkage exceeds
    the distance threshold, or when exactly n_clusters remain.
    """
    n = d.n
    if n < 1:
        raise ValueError("need at least one value")
    if cfg.n_clusters is not None and cfg.n_clusters > n:
        raise ConfigError(f"n_clusters={cfg.n_clusters} exceeds number of values {n}")

    members: list[list[int] | None] = [[i] for i in range(n)]
    sizes = [1] * n
    # linkage between active slots, row-indexed dicts keyed j > i
    link: list[dict] = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            link[i][j] = d.get(i, j)

    active = list(range(n))
    target = cfg.n_clusters if cfg.n_clusters is not None else 1

    while len(active) > target:
        best = None
        bi = bj = -1
        for ai in range(len(active)):
            i = active[ai]
            row = link[i]
            for aj in range(ai + 1, len(active)):
                j = active[aj]
                v = row[j]
                if best is None or v < best:
                    best, bi, bj = v, i, j
        if cfg.distance_threshold is not None and best > cfg.distance_threshold:
            break
        # merge slot bj into slot bi
        for k in active:
            if k == bi or k == bj:
                continue
            a, b = (min(k, bi), max(k, bi))
            dik = link[a][b]
            a, b = (min(k, bj), max(k, bj))
            djk = link[a][b]
            if cfg.linkage is Linkage.COMPLETE:
                new = dik if dik >= djk else djk
            elif cfg.linkage is Linkage.SINGLE:
                new = dik if dik <= djk else djk
            else:
                new = (sizes[bi] * dik + sizes[bj] * djk) / (sizes[bi] + sizes[bj])
            a, b = (min(k, bi), max(k, bi))
            link[a][b] = new
        members[bi].extend(members[bj])
        sizes[bi] += sizes[bj]
        members[bj] = None
        active.remove(bj)

    clusters = [m for m in members if m is not None]
    return _final_clustering(clusters, [], d, Algorithm.HIERARCHICAL, config_fingerprint)


def _total_cost(d: DistanceMatrix, medoids: list[int]) -> tuple:
    cost = 0
    for p in range(d.n):
        best = None
        for m in medoids:
            v = d.get(p, m)
            if best is None or v < best:
                best = v
        cost = cost + best
    return cost


def _greedy_build(d: DistanceMatrix, k: int) -> list[int]:
    """Classic BUILD: best single medoid, then greedy additions (ties: lowest index)."""
    n = d.n
    totals = [sum(d.get(i, j) for j in range(n)) for i in range(n)]
    medoids = [min(range(n), key=lambda i: (totals[i], i))]
    nearest = [d.get(p, medoids[0]) for p in range(n)]
    while len(medoids) < k:
        best_c, best_cost = -1, None
        in_set = set(medoids)
        for c in range(n):
            if c in in_set:
                continue
            cost = 0
            for p in range(n):
                v = d.get(p, c)
                cost = cost + (v if v < nearest[p] else nearest[p])
            if best_cost is None or cost < best_cost:
                best_c, best_cost = c, cost
        medoids.append(best_c)
        for p in range(n):
            v = d.get(p, best_c)
            if v < nearest[p]:
                nearest[p] = v
    return medoids


def _swap_descent(d: DistanceMatrix, start: list[int], max_iter: int):
    """Best-improvement single-swap descent from a medoid set.

    Swap deltas are evaluated in O(n) per candidate via each point's nearest
    and second-nearest medoid distances; the running cost is recomputed from
    scratch after every applied swap, so no float drift accumulates.
    """
    n = d.n
    medoids = list(start)
    k = len(medoids)

    def recompute():
        near, second, who = [], [], []
        for p in range(n):
            ds = sorted((d.get(p, m), m) for m in medoids)
            near.append(ds[0][0])
            who.append(ds[0][1])
            second.append(ds[1][0] if k > 1 else None)
        return near, second, who

    near, second, who = recompute()
    cost = sum(near)
    for _ in range(max_iter):
        best_delta = 0
        best_swap = None
        in_set = set(medoids)
        for mi, m in enumerate(medoids):
            for o in range(n):
                if o in in_set:
                    continue
                delta = 0
                for p in range(n):
                    do = d.get(p, o)
                    if who[p] == m:
                        base = second[p]
                        new = do if (base is None or do < base) else base
                        delta = delta + (new - near[p])
                    elif do < near[p]:
                        delta = delta + (do - near[p])
                if delta < best_delta:
                    best_delta = delta
                    best_swap = (mi, o)
        if best_swap is None:
            break
        mi, o = best_swap
        medoids[mi] = o
        near, second, who = recompute()
        cost = sum(near)
    return medoids, cost


_KMEDOIDS_RESTARTS = 16


def kmedoids_cluster(d: DistanceMatrix, cfg: KMedoidsOptions, config_fingerprint: str = "") -> Clustering:
    """Partitioning around medoids with seeded restarts.

    The greedy BUILD initialization plus a fixed number of seeded random
    initializations are each refined by best-improvement swaps until no
    single medoid/non-medoid exchange lowers the total distance to medoids
    (or max_iter swaps); the cheapest final set wins, ties by medoid
    indices.  Points are assigned to their nearest medoid, ties to the
    lowest medoid index, except that a medoid always anchors its own
    cluster.  Deterministic for a given seed.
    """
    import random as _random

    n = d.n
    if cfg.k > n:
        raise ConfigError(f"k={cfg.k} exceeds number of values {n}")

    build_start = _greedy_build(d, cfg.k)
    build_cost = _total_cost(d, build_start)

    rng = _random.Random(cfg.seed)
    starts = [build_start]
    for _ in range(_KMEDOIDS_RESTARTS):
        starts.append(sorted(rng.sample(range(n), cfg.k)))

    best_key = None
    medoids: list[int] = []
    current = None
    for start in starts:
        meds, cost = _swap_descent(d, start, cfg.max_iter)
        key = (cost, tuple(sorted(meds)))
        if best_key is None or key < best_key:
            best_key = key
            medoids = meds
            current = cost

    medoids.sort()
    slot = {m: mi for mi, m in enumerate(medoids)}
    clusters: list[list[int]] = [[] for _ in medoids]
    for p in range(n):
        if p in slot:  # a medoid anchors its own cluster
            clusters[slot[p]].append(p)
            continue
        best_mi = min(range(len(medoids)), key=lambda mi: (d.get(p, medoids[mi]), mi))
        clusters[best_mi].append(p)
    meta = {"medoids": list(medoids), "cost": current, "build_cost": build_cost}
    labels = [0] * n
    for cid, ms in enumerate(clusters):
        for p in ms:
            labels[p] = cid
    return Clustering(
        labels=tuple(labels),
        k=len(medoids),
        value_index=d.value_index,
        algorithm=Algorithm.KMEDOIDS,
        config_fingerprint=config_fingerprint,
        matrix_fingerprint=d.fingerprint,
        mapping_fingerprint=d.mapping_fingerprint,
        meta=meta,
    )


def dbscan_cluster(d: DistanceMatrix, cfg: DBSCANOptions, config_fingerprint: str = "") -> Clustering:
    """Density-based clustering; points reachable from no core point are NOISE.

    Points are processed in index order and clusters expanded breadth-first,
    so a border point in reach of several clusters joins the one created
    first.
    """
    n = d.n
    neighbors = [[j for j in range(n) if j != i and d.get(i, j) <= cfg.eps] for i in range(n)]
    core = [len(neighbors[i]) + 1 >= cfg.min_samples for i in range(n)]

    UNSEEN = -2
    labels = [UNSEEN] * n
    cid = 0
    for i in range(n):
        if labels[i] != UNSEEN:
            continue
        if not core[i]:
            labels[i] = NOISE
            continue
        labels[i] = cid
        queue = deque(neighbors[i])
        while queue:
            q = queue.popleft()
            if labels[q] == NOISE:
                labels[q] = cid  # border point claimed by this cluster
            if labels[q] != UNSEEN:
                continue
            labels[q] = cid
            if core[q]:
                queue.extend(neighbors[q])
        cid += 1

    meta = {"core_count": sum(core)}
    return Clustering(
        labels=tuple(labels),
        k=cid,
        value_index=d.value_index,
        algorithm=Algorithm.DBSCAN,
        config_fingerprint=config_fingerprint,
        matrix_fingerprint=d.fingerprint,
        mapping_fingerprint=d.mapping_fingerprint,
        meta=meta,
    )


def run_clustering(d: DistanceMatrix, config: ClusteringConfig) -> Clustering:
    fp = config.fingerprint
    if config.algorithm is Algorithm.HIERARCHICAL:
        return hierarchical_cluster(d, config.hierarchical, fp)
    if config.algorithm is Algorithm.KMEDOIDS:
        return kmedoids_cluster(d, config.kmedoids, fp)
    return dbscan_cluster(d, config.dbscan, fp)


@dataclass(frozen=True)
class ClusterExpansion:
    cluster_id: int
    groups: tuple[AbstractionGroup, ...]
    total_original_count: int


def expand_to_originals(c: Clustering, m: AbstractionMapping) -> list[ClusterExpansion]:
    """Expand each cluster's abstracted members to their original values.

    Within a cluster, abstraction groups are ordered by descending
    represented count (ties by abstracted value).  The NOISE pseudo-cluster
    comes last when present, so counts stay conserved.
    """
    if c.mapping_fingerprint and c.mapping_fingerprint != m.fingerprint:
        raise FingerprintMismatchError(
            "clustering was computed for a different abstraction mapping"
        )
    if list(c.value_index) != m.abstracted_values:
        raise FingerprintMismatchError("clustering does not refer to this abstraction mapping")

    by_value = {g.abstracted: g for g in m.groups}
    ids = list(range(c.k)) + ([NOISE] if c.noise_count else [])
    out = []
    for cid in ids:
        groups = [by_value[c.value_index[i]] for i in c.members(cid)]
        groups.sort(key=lambda g: (-g.total_count, g.abstracted))
        out.append(
            ClusterExpansion(
                cluster_id=cid,
                groups=tuple(groups),
                total_original_count=sum(g.total_count for g in groups),
            )
        )
    return out
