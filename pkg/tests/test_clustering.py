from __future__ import annotations

import random
from fractions import Fraction

import pytest

from oracles import agglomerate_from_scratch, best_medoid_cost, dbscan_from_definition
from conftest import random_condensed
from valuecluster.abstraction import AbstractionConfig, abstract
from valuecluster.clustering import (
    NOISE,
    Algorithm,
    Clustering,
    ClusteringConfig,
    DBSCANOptions,
    HierarchicalOptions,
    KMedoidsOptions,
    Linkage,
    dbscan_cluster,
    expand_to_originals,
    hierarchical_cluster,
    kmedoids_cluster,
    run_clustering,
)
from valuecluster.corpus import corpus_from_values
from valuecluster.distance import DistanceMatrix
from valuecluster.errors import ConfigError, FingerprintMismatchError


def matrix(n, condensed):
    return DistanceMatrix(n=n, condensed=list(condensed), value_index=tuple(f"v{i}" for i in range(n)))


def int_condensed(rng, n, high=100):
    return matrix(n, [float(rng.randint(1, high)) for _ in range(n * (n - 1) // 2)])


# --- config validation --------------------------------------------------------


def test_hierarchical_stop_is_exactly_one():
    with pytest.raises(ConfigError, match="exactly one"):
        HierarchicalOptions(distance_threshold=1.0, n_clusters=3)
    with pytest.raises(ConfigError, match="exactly one"):
        HierarchicalOptions()


def test_parameter_bounds():
    with pytest.raises(ConfigError):
        KMedoidsOptions(k=0)
    with pytest.raises(ConfigError):
        KMedoidsOptions(k=2, max_iter=0)
    with pytest.raises(ConfigError):
        DBSCANOptions(eps=-1, min_samples=2)
    with pytest.raises(ConfigError):
        DBSCANOptions(eps=1, min_samples=0)


def test_config_requires_options_for_algorithm():
    with pytest.raises(ConfigError, match="missing options"):
        ClusteringConfig(algorithm=Algorithm.DBSCAN)


def test_config_json_roundtrip():
    for config in (
        ClusteringConfig(
            algorithm=Algorithm.HIERARCHICAL,
            hierarchical=HierarchicalOptions(linkage=Linkage.AVERAGE, n_clusters=4),
        ),
        ClusteringConfig(algorithm=Algorithm.KMEDOIDS, kmedoids=KMedoidsOptions(k=3, seed=7)),
        ClusteringConfig(algorithm=Algorithm.DBSCAN, dbscan=DBSCANOptions(eps=0.5, min_samples=3)),
    ):
        assert ClusteringConfig.from_json_dict(config.to_json_dict()) == config


# --- hierarchical ---------------------------------------------------------------


def test_hierarchical_small_example():
    d = matrix(3, [1.0, 5.0, 6.0])  # d(A,B)=1, d(A,C)=5, d(B,C)=6
    c = hierarchical_cluster(d, HierarchicalOptions(distance_threshold=2.0))
    assert c.partition() == {frozenset({0, 1}), frozenset({2})}
    assert c.k == 2


def test_hierarchical_threshold_above_everything_gives_one_cluster():
    rng = random.Random(0)
    d = random_condensed(rng, 6)
    c = hierarchical_cluster(d, HierarchicalOptions(distance_threshold=1e9))
    assert c.k == 1


def test_hierarchical_zero_threshold_gives_singletons():
    rng = random.Random(1)
    d = random_condensed(rng, 6, low=0.1)
    c = hierarchical_cluster(d, HierarchicalOptions(distance_threshold=0.0))
    assert c.k == 6


def test_hierarchical_n_clusters_stop():
    rng = random.Random(2)
    d = random_condensed(rng, 8)
    for target in (1, 3, 8):
        c = hierarchical_cluster(d, HierarchicalOptions(n_clusters=target))
        assert c.k == target


def test_hierarchical_n_clusters_exceeding_n_rejected():
    d = matrix(3, [1.0, 2.0, 3.0])
    with pytest.raises(ConfigError, match="exceeds"):
        hierarchical_cluster(d, HierarchicalOptions(n_clusters=4))


def test_hierarchical_single_point():
    d = matrix(1, [])
    c = hierarchical_cluster(d, HierarchicalOptions(distance_threshold=1.0))
    assert c.k == 1 and c.labels == (0,)


@pytest.mark.parametrize("linkage", list(Linkage))
def test_hierarchical_matches_from_scratch_oracle(linkage):
    rng = random.Random(hash(linkage.value) % 1000)
    for _ in range(120):
        n = rng.randint(2, 8)
        d = random_condensed(rng, n)
        if rng.random() < 0.5:
            threshold, n_clusters = rng.uniform(0, 12), None
        else:
            threshold, n_clusters = None, rng.randint(1, n)
        got = hierarchical_cluster(
            d,
            HierarchicalOptions(linkage=linkage, distance_threshold=threshold, n_clusters=n_clusters),
        ).partition()
        want = agglomerate_from_scratch(
            d, linkage.value, threshold=threshold, n_clusters=n_clusters
        )
        assert got == want


def test_threshold_scale_covariance_exact():
    rng = random.Random(9)
    n = 7
    base = matrix(n, [Fraction(rng.randint(1, 50), rng.randint(1, 7)) for _ in range(n * (n - 1) // 2)])
    t = Fraction(7, 2)
    for c in (Fraction(2), Fraction(1, 3), Fraction(10)):
        for linkage in Linkage:
            p1 = hierarchical_cluster(base, HierarchicalOptions(linkage=linkage, distance_threshold=t)).partition()
            p2 = hierarchical_cluster(
                base.scaled(c), HierarchicalOptions(linkage=linkage, distance_threshold=c * t)
            ).partition()
            assert p1 == p2


# --- k-medoids -------------------------------------------------------------------


def test_kmedoids_k_equals_n_is_free():
    rng = random.Random(3)
    d = random_condensed(rng, 5, low=0.5)
    c = kmedoids_cluster(d, KMedoidsOptions(k=5))
    assert c.meta["cost"] == 0
    assert sorted(c.labels) == list(range(5))


def test_kmedoids_k1_picks_central_point():
    d = matrix(3, [1.0, 1.0, 2.0])  # d(A,B)=1, d(A,C)=1, d(B,C)=2
    c = kmedoids_cluster(d, KMedoidsOptions(k=1))
    assert c.meta["medoids"] == [0]
    assert c.meta["cost"] == 2
    assert c.k == 1


def test_kmedoids_k_exceeding_n_rejected():
    d = matrix(2, [1.0])
    with pytest.raises(ConfigError, match="exceeds"):
        kmedoids_cluster(d, KMedoidsOptions(k=3))


def test_kmedoids_matches_brute_force_on_small_instances():
    rng = random.Random(11)
    for t in range(150):
        n = rng.randint(2, 7)
        k = rng.randint(1, min(3, n))
        d = int_condensed(rng, n)
        c = kmedoids_cluster(d, KMedoidsOptions(k=k, seed=t))
        assert c.meta["cost"] == best_medoid_cost(d, k)


def test_kmedoids_swap_never_increases_cost():
    rng = random.Random(19)
    for _ in range(60):
        n = rng.randint(2, 12)
        k = rng.randint(1, n)
        d = random_condensed(rng, n)
        c = kmedoids_cluster(d, KMedoidsOptions(k=k))
        assert c.meta["cost"] <= c.meta["build_cost"]


def test_kmedoids_deterministic_given_seed():
    rng = random.Random(23)
    d = random_condensed(rng, 9)
    a = kmedoids_cluster(d, KMedoidsOptions(k=3, seed=42))
    b = kmedoids_cluster(d, KMedoidsOptions(k=3, seed=42))
    assert a.labels == b.labels and a.meta == b.meta


# --- dbscan -----------------------------------------------------------------------


def test_dbscan_all_zero_distances_one_cluster():
    d = matrix(4, [0.0] * 6)
    c = dbscan_cluster(d, DBSCANOptions(eps=0.0, min_samples=4))
    assert c.k == 1 and set(c.labels) == {0}


def test_dbscan_eps_below_everything_all_noise():
    d = matrix(4, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    c = dbscan_cluster(d, DBSCANOptions(eps=0.5, min_samples=2))
    assert c.k == 0
    assert all(l == NOISE for l in c.labels)
    assert c.noise_count == 4


def test_dbscan_chain_is_one_cluster():
    d = matrix(3, [1.0, 2.0, 1.0])  # A-B=1, A-C=2, B-C=1
    c = dbscan_cluster(d, DBSCANOptions(eps=1.0, min_samples=2))
    assert c.partition() == {frozenset({0, 1, 2})}


def test_dbscan_border_point_goes_to_earliest_cluster():
    # two dense 4-point cliques {0,1,2,3} and {5,6,7,8}; point 4 is within
    # eps of one core of each but is not core itself (min_samples=4)
    n = 9
    dist = {}
    for clique in ({0, 1, 2, 3}, {5, 6, 7, 8}):
        for i in clique:
            for j in clique:
                if i < j:
                    dist[(i, j)] = 1.0
    dist[(3, 4)] = 1.0
    dist[(4, 5)] = 1.0
    cond = [dist.get((i, j), 9.0) for i in range(n) for j in range(i + 1, n)]
    d = matrix(n, cond)
    c = dbscan_cluster(d, DBSCANOptions(eps=1.0, min_samples=4))
    assert c.k == 2
    assert c.labels[4] == c.labels[0] == 0  # claimed by the first-created cluster
    assert c.labels[5] == 1


def test_dbscan_matches_definition_oracle():
    rng = random.Random(31)
    for _ in range(120):
        n = rng.randint(2, 50)
        d = random_condensed(rng, n)
        eps = rng.uniform(0, 10)
        min_samples = rng.randint(1, 6)
        c = dbscan_cluster(d, DBSCANOptions(eps=eps, min_samples=min_samples))
        assert list(c.labels) == dbscan_from_definition(d, eps, min_samples)


def test_dbscan_partition_stable_under_point_reordering():
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randint(3, 12)
        d = random_condensed(rng, n)
        eps = rng.uniform(0, 10)
        min_samples = rng.randint(1, 4)
        c1 = dbscan_cluster(d, DBSCANOptions(eps=eps, min_samples=min_samples))

        perm = list(range(n))
        rng.shuffle(perm)
        cond = [d.get(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
        d2 = matrix(n, cond)
        c2 = dbscan_cluster(d2, DBSCANOptions(eps=eps, min_samples=min_samples))

        # core-point partition agrees up to relabeling; border points follow
        # the index-order rule, so only compare clusters restricted to cores
        def core_partition(c, d, permuted):
            parts = set()
            for cid in range(c.k):
                members = []
                for i in c.members(cid):
                    orig = perm[i] if permuted else i
                    within = sum(
                        1 for j in range(n) if j != i and d.get(i, j) <= eps
                    )
                    if within + 1 >= min_samples:
                        members.append(orig)
                if members:
                    parts.add(frozenset(members))
            return parts

        assert core_partition(c1, d, False) == core_partition(c2, d2, True)


# --- expansion back to original values -----------------------------------------


def unit_fixture_clustering():
    from valuecluster.profiles import get_profile, load_fixture
    from valuecluster.distance import distance_matrix

    profile = get_profile("measurement-unit")
    corpus = load_fixture("measurement-unit")
    mapping = abstract(corpus, profile.abstraction)
    d = distance_matrix(mapping, profile.weights, profile.kind)
    return corpus, mapping, run_clustering(d, profile.clustering)


def test_expand_conserves_counts():
    corpus, mapping, clustering = unit_fixture_clustering()
    expansions = expand_to_originals(clustering, mapping)
    assert sum(e.total_original_count for e in expansions) == corpus.total_occurrences
    values = sorted(v for e in expansions for g in e.groups for v, _ in g.originals)
    assert values == sorted(v for v, _ in corpus.entries)


def test_expand_orders_groups_by_represented_count():
    _, mapping, clustering = unit_fixture_clustering()
    for e in expand_to_originals(clustering, mapping):
        counts = [g.total_count for g in e.groups]
        assert counts == sorted(counts, reverse=True)


def test_expand_singleton_identity():
    corpus = corpus_from_values(["solo"])
    mapping = abstract(corpus, AbstractionConfig())
    d = matrix(1, [])
    c = Clustering(
        labels=(0,), k=1, value_index=("solo",), algorithm=Algorithm.HIERARCHICAL
    )
    exps = expand_to_originals(c, mapping)
    assert len(exps) == 1
    assert exps[0].groups[0].originals == (("solo", 1),)


def test_expand_rejects_mismatched_mapping():
    corpus, mapping, clustering = unit_fixture_clustering()
    other = abstract(corpus_from_values(["x", "y"]), AbstractionConfig())
    with pytest.raises(FingerprintMismatchError):
        expand_to_originals(clustering, other)


def test_noise_kept_separate_in_expansion():
    corpus = corpus_from_values(["aa", "ab", "zz"])
    mapping = abstract(corpus, AbstractionConfig())
    d = DistanceMatrix(n=3, condensed=[1.0, 9.0, 9.0], value_index=tuple(mapping.abstracted_values))
    c = dbscan_cluster(d, DBSCANOptions(eps=1.0, min_samples=2))
    exps = expand_to_originals(c, mapping)
    assert exps[-1].cluster_id == NOISE
    assert sum(e.total_original_count for e in exps) == 3


def test_labels_contiguity_enforced():
    with pytest.raises(ValueError, match="contiguous"):
        Clustering(labels=(0, 2), k=2, value_index=("a", "b"), algorithm=Algorithm.DBSCAN)