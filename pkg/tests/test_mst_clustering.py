import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from models.disjoint_set import DisjointSet
from models.geo import GeoPoint, haversine_km
from models.mst_clustering import (Edge, build_complete_edge_list, cluster_points, cut_by_threshold,
                                   cut_into_k_clusters, kruskal_mst, mst_total_weight)
from utils.errors import DegenerateCentroid, InputTooLarge, InvalidK, InvalidThreshold
from tests.conftest import PROPERTY_SETTINGS

EQUATOR = [GeoPoint(0, 0), GeoPoint(0, 1), GeoPoint(0, 3)]
FOUR = [GeoPoint(0, 0), GeoPoint(0, 0.1), GeoPoint(0.1, 0), GeoPoint(10, 10)]


def random_points(rng, n):
    return [GeoPoint(rng.uniform(-50, 50), rng.uniform(-100, 100)) for _ in range(n)]


def partition(cluster_set):
    return frozenset(frozenset(c.member_indices) for c in cluster_set.clusters)


# Oracles


def prufer_trees(n):
    """Every labelled spanning tree on n vertices, as edge lists"""
    if n == 2:
        yield [(0, 1)]
        return
    for sequence in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for vertex in sequence:
            degree[vertex] += 1
        edges = []
        for vertex in sequence:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((leaf, vertex))
            degree[leaf] -= 1
            degree[vertex] -= 1
        u, w = [i for i in range(n) if degree[i] == 1]
        edges.append((u, w))
        yield edges


def exhaustive_mst_weight(points):
    n = len(points)
    distance = [[haversine_km(a, b) for b in points] for a in points]
    return min(math.fsum(distance[i][j] for i, j in tree) for tree in prufer_trees(n))


def prim_weight(points):
    n = len(points)
    distance = [[haversine_km(a, b) for b in points] for a in points]
    in_tree = [False] * n
    best = [math.inf] * n
    best[0] = 0.0
    total = []
    for _ in range(n):
        u = min((i for i in range(n) if not in_tree[i]), key=lambda i: best[i])
        in_tree[u] = True
        total.append(best[u])
        for v in range(n):
            if not in_tree[v] and distance[u][v] < best[v]:
                best[v] = distance[u][v]
    return math.fsum(total)


def single_linkage_partitions(points):
    """Naive agglomerative single linkage: partition at every cluster count"""
    n = len(points)
    distance = [[haversine_km(a, b) for b in points] for a in points]
    clusters = [{i} for i in range(n)]
    levels = {n: frozenset(frozenset(c) for c in clusters)}
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                link = min(distance[i][j] for i in clusters[a] for j in clusters[b])
                if best is None or link < best[0]:
                    best = (link, a, b)
        _, a, b = best
        clusters[a] |= clusters.pop(b)
        levels[len(clusters)] = frozenset(frozenset(c) for c in clusters)
    return levels


class TestEdgeList:
    def test_single_point_has_no_edges(self):
        assert build_complete_edge_list([GeoPoint(1, 2)]) == []

    def test_equatorial_points(self):
        edges = build_complete_edge_list(EQUATOR)
        assert [(e.i, e.j) for e in edges] == [(0, 1), (1, 2), (0, 2)]
        assert [e.weight_km for e in edges] == pytest.approx([111.195, 222.390, 333.585], abs=0.01)

    def test_count_and_order(self):
        points = random_points(np.random.default_rng(1), 4)
        edges = build_complete_edge_list(points)
        assert len(edges) == 6
        assert [e.sort_key for e in edges] == sorted(e.sort_key for e in edges)
        for edge in edges:
            assert edge.weight_km == pytest.approx(haversine_km(points[edge.i], points[edge.j]), rel=1e-12)

    def test_ties_break_on_indices(self):
        points = [GeoPoint(0, 0), GeoPoint(0, 0), GeoPoint(0, 0)]
        edges = build_complete_edge_list(points)
        assert [(e.i, e.j, e.weight_km) for e in edges] == [(0, 1, 0.0), (0, 2, 0.0), (1, 2, 0.0)]

    def test_cap_rejects_large_inputs(self):
        with pytest.raises(InputTooLarge):
            build_complete_edge_list(random_points(np.random.default_rng(2), 4), max_points=3)

    def test_edge_orientation_is_enforced(self):
        with pytest.raises(ValueError):
            Edge(2, 1, 5.0)


class TestKruskal:
    def test_single_point(self):
        assert kruskal_mst([GeoPoint(5, 5)]) == []

    def test_equatorial_points(self):
        tree = kruskal_mst(EQUATOR)
        assert {(e.i, e.j) for e in tree} == {(0, 1), (1, 2)}
        assert mst_total_weight(tree) == pytest.approx(333.585, abs=0.01)

    def test_cap_propagates(self):
        with pytest.raises(InputTooLarge):
            kruskal_mst(random_points(np.random.default_rng(3), 5), max_points=4)

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(20100101)
        for _ in range(200):
            points = random_points(rng, int(rng.integers(2, 8)))
            tree = kruskal_mst(points)
            assert len(tree) == len(points) - 1
            assert mst_total_weight(tree) == pytest.approx(exhaustive_mst_weight(points), rel=1e-9)

    def test_matches_prim(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            points = random_points(rng, int(rng.integers(2, 101)))
            assert mst_total_weight(kruskal_mst(points)) == pytest.approx(prim_weight(points), rel=1e-9)

    def test_duplicates_merge_first(self):
        points = [GeoPoint(0, 0), GeoPoint(5, 5), GeoPoint(0, 0)]
        assert kruskal_mst(points)[0] == Edge(0, 2, 0.0)


class TestCutIntoK:
    def test_k_one_is_a_single_cluster(self):
        clusters = cut_into_k_clusters(FOUR, kruskal_mst(FOUR), 1)
        assert clusters.n_clusters == 1
        assert clusters.clusters[0].member_indices == (0, 1, 2, 3)
        assert clusters.cut_edges == ()

    def test_k_n_is_all_singletons(self):
        clusters = cut_into_k_clusters(FOUR, kruskal_mst(FOUR), 4)
        assert clusters.n_clusters == 4
        assert all(c.size == 1 and c.diameter_km == 0.0 for c in clusters.clusters)

    def test_outlier_split(self):
        clusters = cut_into_k_clusters(FOUR, kruskal_mst(FOUR), 2)
        assert partition(clusters) == {frozenset({0, 1, 2}), frozenset({3})}
        assert clusters.assignment == (0, 0, 0, 1)
        assert len(clusters.cut_edges) == 1

    @pytest.mark.parametrize('k', [0, 5, -1, 2.0])
    def test_invalid_k(self, k):
        with pytest.raises(InvalidK):
            cut_into_k_clusters(FOUR, kruskal_mst(FOUR), k)

    def test_cluster_stats(self):
        clusters = cut_into_k_clusters(FOUR, kruskal_mst(FOUR), 2)
        triple = clusters.clusters[0]
        assert triple.size == 3
        expected = max(haversine_km(FOUR[a], FOUR[b]) for a in range(3) for b in range(3))
        assert triple.diameter_km == pytest.approx(expected, rel=1e-12)
        assert clusters.clusters[1].centroid == GeoPoint(10, 10)

    def test_matches_single_linkage_at_every_k(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            points = random_points(rng, int(rng.integers(1, 51)))
            tree = kruskal_mst(points)
            levels = single_linkage_partitions(points)
            for k in range(1, len(points) + 1):
                assert partition(cut_into_k_clusters(points, tree, k)) == levels[k]

    def test_permuting_points_keeps_the_partition(self):
        rng = np.random.default_rng(99)
        points = random_points(rng, 30)
        order = rng.permutation(30).tolist()
        shuffled = [points[i] for i in order]
        for k in (1, 3, 7, 30):
            original = partition(cut_into_k_clusters(points, kruskal_mst(points), k))
            mapped = frozenset(
                frozenset(order[i] for i in c.member_indices)
                for c in cut_into_k_clusters(shuffled, kruskal_mst(shuffled), k).clusters
            )
            assert mapped == original

    def test_larger_k_refines_smaller_k(self):
        rng = np.random.default_rng(11)
        points = random_points(rng, 25)
        tree = kruskal_mst(points)
        for k1 in range(1, 25):
            coarse = cut_into_k_clusters(points, tree, k1).assignment
            fine = cut_into_k_clusters(points, tree, k1 + 1).assignment
            for i in range(25):
                for j in range(25):
                    if fine[i] == fine[j]:
                        assert coarse[i] == coarse[j]

    @PROPERTY_SETTINGS
    @given(
        coords=st.lists(st.tuples(st.floats(-60, 60), st.floats(-120, 120)), min_size=1, max_size=12),
        data=st.data(),
    )
    def test_partition_totality(self, coords, data):
        points = [GeoPoint(lat, lon) for lat, lon in coords]
        n = len(points)
        k = data.draw(st.integers(1, n))
        clusters = cut_into_k_clusters(points, kruskal_mst(points), k)

        members = sorted(i for c in clusters.clusters for i in c.member_indices)
        assert members == list(range(n))
        assert clusters.n_clusters == len(clusters.cut_edges) + 1 == k
        assert sorted(set(clusters.assignment)) == list(range(k))
        for cluster_id, cluster in enumerate(clusters.clusters):
            assert all(clusters.assignment[i] == cluster_id for i in cluster.member_indices)
        sizes = [c.size for c in clusters.clusters]
        assert sizes == sorted(sizes, reverse=True)


class TestCutByThreshold:
    def test_large_threshold_is_one_cluster(self):
        assert cut_by_threshold(FOUR, kruskal_mst(FOUR), 5000.0).n_clusters == 1

    def test_small_threshold_is_all_singletons(self):
        assert cut_by_threshold(FOUR, kruskal_mst(FOUR), 0.001).n_clusters == 4

    def test_hundred_km(self):
        clusters = cut_by_threshold(FOUR, kruskal_mst(FOUR), 100.0)
        assert partition(clusters) == {frozenset({0, 1, 2}), frozenset({3})}
        assert all(e.weight_km > 100.0 for e in clusters.cut_edges)

    @pytest.mark.parametrize('threshold', [0, -5.0, float('nan'), float('inf')])
    def test_invalid_threshold(self, threshold):
        with pytest.raises(InvalidThreshold):
            cut_by_threshold(FOUR, kruskal_mst(FOUR), threshold)

    def test_equals_single_linkage_at_distance(self):
        rng = np.random.default_rng(21)
        points = random_points(rng, 20)
        tree = kruskal_mst(points)
        threshold = sorted(e.weight_km for e in tree)[12] + 1e-6
        clusters = cut_by_threshold(points, tree, threshold)

        # Components of the graph joining every pair within the threshold
        forest = DisjointSet(20)
        for i in range(20):
            for j in range(i + 1, 20):
                if haversine_km(points[i], points[j]) <= threshold:
                    forest.union(i, j)
        expected = frozenset(frozenset(members) for members in forest.components().values())
        assert partition(clusters) == expected
        assert clusters.n_clusters == 7


def test_cluster_points_requires_one_rule():
    with pytest.raises(ValueError):
        cluster_points(FOUR)
    with pytest.raises(ValueError):
        cluster_points(FOUR, k=2, d_max_km=10.0)
    assert cluster_points(FOUR, k=2).n_clusters == 2


class TestAntipodalCluster:
    ANTIPODES = [GeoPoint(0, 0), GeoPoint(0, 180)]

    def test_single_cluster_has_no_centroid(self):
        tree = kruskal_mst(self.ANTIPODES)
        with pytest.raises(DegenerateCentroid):
            cut_into_k_clusters(self.ANTIPODES, tree, 1)
        with pytest.raises(DegenerateCentroid):
            cut_by_threshold(self.ANTIPODES, tree, 25_000.0)

    def test_split_pair_is_fine(self):
        tree = kruskal_mst(self.ANTIPODES)
        assert cut_into_k_clusters(self.ANTIPODES, tree, 2).n_clusters == 2
        assert cut_by_threshold(self.ANTIPODES, tree, 1.0).n_clusters == 2
