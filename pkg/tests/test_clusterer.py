import math

import numpy as np
import pytest

from clusterbmc import clusterer


def unit(v):
    a = np.asarray(v, dtype=float)
    n = np.linalg.norm(a)
    return a / n if n else a


def cos_cost_kmeans(points, groups):
    total = 0.0
    for g in groups:
        if not g:
            continue
        rows = np.stack([unit(points[i]) for i in g])
        c = rows.mean(axis=0)
        c = unit(c)
        total += float((1.0 - rows @ c).sum())
    return total


def test_antipodal_separation():
    pts = [(1, 0), (0.95, 0.05), (-1, 0), (-0.9, -0.1)]
    for fn in (clusterer.kmeans, clusterer.kmedoids):
        groups = sorted(fn(pts, 2, seed=0))
        assert groups == [[0, 1], [2, 3]]


def test_k_equals_n_singletons():
    pts = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    groups = clusterer.kmeans(pts, 4, seed=2)
    assert sorted(len(g) for g in groups) == [1, 1, 1, 1]


def test_partition_validity():
    rng = np.random.default_rng(4)
    pts = [tuple(r) for r in rng.normal(size=(9, 3))]
    for fn in (clusterer.kmeans, clusterer.kmedoids):
        for k in (2, 3, 4):
            groups = fn(pts, k, seed=1)
            flat = sorted(i for g in groups for i in g)
            assert flat == list(range(9))


def test_determinism():
    rng = np.random.default_rng(6)
    pts = [tuple(r) for r in rng.normal(size=(8, 4))]
    for fn in (clusterer.kmeans, clusterer.kmedoids):
        assert fn(pts, 3, seed=9) == fn(pts, 3, seed=9)


def test_kmeans_one_move_stability():
    # the converged partition should not improve by moving any single point
    rng = np.random.default_rng(12)
    pts = [tuple(r) for r in rng.normal(size=(7, 3))]
    groups = clusterer.kmeans(pts, 2, seed=0)
    base = cos_cost_kmeans(pts, groups)
    for src in range(2):
        for dst in range(2):
            if src == dst:
                continue
            for p in groups[src]:
                if len(groups[src]) == 1:
                    continue
                trial = [list(g) for g in groups]
                trial[src].remove(p)
                trial[dst].append(p)
                assert cos_cost_kmeans(pts, trial) >= base - 1e-9


def test_kmedoids_swap_stability():
    rng = np.random.default_rng(13)
    pts = [tuple(r) for r in rng.normal(size=(8, 3))]
    d = clusterer._pairwise_cos(pts)
    groups = clusterer.kmedoids(pts, 3, seed=0)

    def cost(medoids):
        return float(np.min(d[:, list(medoids)], axis=1).sum())

    # recover the medoids: the point in each group minimizing in-group cost
    # is not stored, so check stability at the partition level instead:
    # every medoid triple drawn one-per-group is no worse than the best
    # achievable by swapping a single member in
    medoids = [min(g, key=lambda i: d[np.ix_(g, [i])].sum()) for g in groups]
    base = cost(medoids)
    for i in range(3):
        for cand in range(8):
            if cand in medoids:
                continue
            trial = list(medoids)
            trial[i] = cand
            assert cost(trial) >= base - 1e-9


def test_separated_triples_medoids():
    pts = [(1, 0.01 * i, 0) for i in range(3)] + [(0, 0.01 * i, 1) for i in range(3)]
    groups = sorted(clusterer.kmedoids(pts, 2, seed=0))
    assert groups == [[0, 1, 2], [3, 4, 5]]


def test_identical_points_zero_cost():
    pts = [(1.0, 1.0)] * 5
    groups = clusterer.kmedoids(pts, 2, seed=0)
    d = clusterer._pairwise_cos(pts)
    assert float(d.sum()) == pytest.approx(0.0, abs=1e-12)
    assert sorted(i for g in groups for i in g) == list(range(5))


def test_k_out_of_range():
    pts = [(1, 0), (0, 1)]
    for fn in (clusterer.kmeans, clusterer.kmedoids):
        with pytest.raises(clusterer.KOutOfRange):
            fn(pts, 1, seed=0)
        with pytest.raises(clusterer.KOutOfRange):
            fn(pts, 3, seed=0)


def test_family_two_properties():
    fam = clusterer.build_family("d", {0: (1, 0), 1: (0, 1)}, seed=0)
    assert [sorted(c.members) for c in fam.clusters] == [[0, 1]]


def test_family_contains_pairs_and_full_set():
    emb = {0: (1, 0), 1: (0.99, 0.01), 2: (0, 1), 3: (0.01, 0.99)}
    fam = clusterer.build_family("d", emb, seed=0)
    sets = {frozenset(c.members) for c in fam.clusters}
    assert frozenset({0, 1}) in sets
    assert frozenset({2, 3}) in sets
    assert frozenset({0, 1, 2, 3}) in sets
    for c in fam.clusters:
        assert 2 <= len(c.members) <= 4


def test_family_determinism_and_k_range():
    rng = np.random.default_rng(3)
    emb = {i: tuple(r) for i, r in enumerate(rng.normal(size=(10, 4)))}
    a = clusterer.build_family("d", emb, seed=5)
    b = clusterer.build_family("d", emb, seed=5)
    assert [c.members for c in a.clusters] == [c.members for c in b.clusters]
    ks = {
        int(c.origin.split("(")[1][:-1])
        for c in a.clusters if "(" in c.origin
    }
    assert ks and max(ks) <= math.ceil(10 / 2)


def test_family_cap():
    rng = np.random.default_rng(7)
    emb = {i: tuple(r) for i, r in enumerate(rng.normal(size=(12, 3)))}
    fam = clusterer.build_family("d", emb, seed=0, max_clusters=4)
    assert len(fam.clusters) == 4
    # the full set survives the cap (it is added first)
    assert frozenset(range(12)) in {c.members for c in fam.clusters}


def test_too_few_properties():
    with pytest.raises(clusterer.TooFewProperties):
        clusterer.build_family("d", {0: (1.0,)}, seed=0)
