"""
MST Clustering Engine
Kruskal's algorithm over the complete great-circle graph of a point set,
then cluster extraction by cutting the heaviest tree edges (fixed k) or every
edge above a distance threshold. Both cuts are single-linkage clusterings.

Every ordering is lexicographic on (weight_km, i, j), so results are
reproducible bit for bit even when weights tie.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from models.disjoint_set import DisjointSet
from models.geo import GeoPoint, haversine_km_matrix, spherical_centroid
from utils.config import MAX_POINTS
from utils.errors import InputTooLarge, InvalidK, InvalidThreshold
from utils.logger import get_logger

logger = get_logger('mst')

DISTANCE_DECIMALS = 3


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    weight_km: float

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError(f"edge endpoints must satisfy i < j, got ({self.i}, {self.j})")
        if not self.weight_km >= 0:
            raise ValueError(f"edge weight must be non-negative, got {self.weight_km}")

    @property
    def sort_key(self):
        return (self.weight_km, self.i, self.j)

    def to_dict(self):
        return {'i': self.i, 'j': self.j, 'weight_km': round(self.weight_km, DISTANCE_DECIMALS)}


@dataclass(frozen=True)
class ClusterStats:
    size: int
    member_indices: Tuple[int, ...]
    centroid: GeoPoint
    diameter_km: float

    def to_dict(self):
        return {
            'size': self.size,
            'member_indices': list(self.member_indices),
            'centroid': self.centroid.to_dict(),
            'diameter_km': round(self.diameter_km, DISTANCE_DECIMALS),
        }


@dataclass(frozen=True)
class ClusterSet:
    assignment: Tuple[int, ...]
    clusters: Tuple[ClusterStats, ...]
    # Removed MST edges, heaviest first
    cut_edges: Tuple[Edge, ...]

    @property
    def n_clusters(self):
        return len(self.clusters)

    def to_dict(self):
        return {
            'n_clusters': self.n_clusters,
            'assignment': list(self.assignment),
            'clusters': [cluster.to_dict() for cluster in self.clusters],
            'cut_edges': [edge.to_dict() for edge in self.cut_edges],
        }


def _check_size(n, max_points):
    cap = MAX_POINTS if max_points is None else max_points
    if n > cap:
        raise InputTooLarge(
            f"{n} points would need {n * (n - 1) // 2} edges; the limit is {cap} points"
        )


def _sorted_edge_arrays(points, max_points=None):
    """Upper-triangle (i, j, weight) arrays in ascending (weight, i, j) order"""
    n = len(points)
    _check_size(n, max_points)
    if n < 2:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, np.empty(0, dtype=np.float64)

    distances = haversine_km_matrix(points)
    i_idx, j_idx = np.triu_indices(n, k=1)
    weights = distances[i_idx, j_idx]

    # lexsort keys are given least significant first
    order = np.lexsort((j_idx, i_idx, weights))
    return i_idx[order], j_idx[order], weights[order]


def build_complete_edge_list(points, max_points=None):
    """All n(n-1)/2 edges of the complete graph, sorted by (weight_km, i, j)"""
    i_idx, j_idx, weights = _sorted_edge_arrays(points, max_points)
    return [
        Edge(i, j, w)
        for i, j, w in zip(i_idx.tolist(), j_idx.tolist(), weights.tolist())
    ]


def kruskal_mst(points, max_points=None):
    """Minimum spanning tree edges (n - 1 of them) in ascending edge order"""
    n = len(points)
    i_idx, j_idx, weights = _sorted_edge_arrays(points, max_points)

    forest = DisjointSet(n)
    tree = []
    if n < 2:
        return tree

    for i, j, w in zip(i_idx.tolist(), j_idx.tolist(), weights.tolist()):
        if forest.union(i, j):
            tree.append(Edge(i, j, w))
            if len(tree) == n - 1:
                break

    logger.debug(f"MST over {n} points: {len(tree)} edges, {mst_total_weight(tree):.3f} km")
    return tree


def mst_total_weight(edges):
    return math.fsum(edge.weight_km for edge in edges)


def _cluster_stats(points, members):
    members = tuple(sorted(members))
    member_points = [points[index] for index in members]
    if len(members) == 1:
        diameter = 0.0
    else:
        diameter = float(haversine_km_matrix(member_points).max())
    return ClusterStats(
        size=len(members),
        member_indices=members,
        centroid=spherical_centroid(member_points),
        diameter_km=diameter,
    )


def _build_cluster_set(points, kept_edges, cut_edges):
    forest = DisjointSet(len(points))
    for edge in kept_edges:
        forest.union(edge.i, edge.j)

    clusters = [_cluster_stats(points, members) for members in forest.components().values()]
    # Largest first, then by centroid; member tuple keeps the order total
    clusters.sort(key=lambda c: (-c.size, c.centroid.lat_deg, c.centroid.lon_deg, c.member_indices))

    assignment = [0] * len(points)
    for cluster_id, cluster in enumerate(clusters):
        for index in cluster.member_indices:
            assignment[index] = cluster_id

    return ClusterSet(
        assignment=tuple(assignment),
        clusters=tuple(clusters),
        cut_edges=tuple(sorted(cut_edges, key=lambda e: e.sort_key, reverse=True)),
    )


def _ordered_tree(points, mst):
    expected = max(len(points) - 1, 0)
    if len(mst) != expected:
        raise ValueError(f"a spanning tree over {len(points)} points has {expected} edges, got {len(mst)}")
    return sorted(mst, key=lambda e: e.sort_key)


def cut_into_k_clusters(points, mst, k):
    """
    Remove the k - 1 heaviest tree edges and return the k components.
    A cluster whose unit vectors cancel (an exact antipodal pair) raises DegenerateCentroid.
    """
    n = len(points)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise InvalidK(f"k must be an integer in [1, {n}], got {k!r}")

    ordered = _ordered_tree(points, mst)
    split = len(ordered) - (k - 1)
    return _build_cluster_set(points, ordered[:split], ordered[split:])


def cut_by_threshold(points, mst, d_max_km):
    """
    Remove every tree edge longer than d_max_km (single linkage at that distance).
    Raises DegenerateCentroid like cut_into_k_clusters.
    """
    if isinstance(d_max_km, bool) or not isinstance(d_max_km, (int, float)) \
            or not math.isfinite(d_max_km) or d_max_km <= 0:
        raise InvalidThreshold(f"threshold must be a positive finite distance, got {d_max_km!r}")

    ordered = _ordered_tree(points, mst)
    kept = [edge for edge in ordered if edge.weight_km <= d_max_km]
    cut = [edge for edge in ordered if edge.weight_km > d_max_km]
    return _build_cluster_set(points, kept, cut)


def cluster_points(points, k=None, d_max_km=None, max_points=None):
    """Build the MST once and cut it with whichever rule is given"""
    if (k is None) == (d_max_km is None):
        raise ValueError("give exactly one of k or d_max_km")
    mst = kruskal_mst(points, max_points)
    if k is not None:
        return cut_into_k_clusters(points, mst, k)
    return cut_by_threshold(points, mst, d_max_km)
