"""
Hometown Predictor
Clusters a user's photo locations on their minimum spanning tree, picks the
cluster holding the most photos and returns its centroid as the estimated
place of living.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

from models.geo import GeoPoint, haversine_km, initial_bearing_deg
from models.mst_clustering import ClusterSet, ClusterStats, DISTANCE_DECIMALS, cluster_points
from utils.config import DEFAULT_K, DEFAULT_MIN_PHOTOS, MAX_POINTS
from utils.errors import InvalidConfig, TooFewPhotos
from utils.logger import get_logger, log_prediction

logger = get_logger('predictor')

FIXED_K = 'fixed_k'
THRESHOLD = 'threshold'


@dataclass(frozen=True)
class PredictorConfig:
    mode: str = FIXED_K
    k: Optional[int] = None
    d_max_km: Optional[float] = None
    min_photos: int = DEFAULT_MIN_PHOTOS
    max_points: int = field(default=MAX_POINTS, compare=False)

    def __post_init__(self):
        if self.mode == FIXED_K:
            if self.k is None:
                object.__setattr__(self, 'k', DEFAULT_K)
            if self.d_max_km is not None:
                raise InvalidConfig("fixed_k mode takes k, not d_max_km")
            if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
                raise InvalidConfig(f"k must be an integer >= 1, got {self.k!r}")
        elif self.mode == THRESHOLD:
            if self.k is not None:
                raise InvalidConfig("threshold mode takes d_max_km, not k")
            if self.d_max_km is None or not math.isfinite(self.d_max_km) or self.d_max_km <= 0:
                raise InvalidConfig(f"d_max_km must be a positive distance, got {self.d_max_km!r}")
        else:
            raise InvalidConfig(f"unknown mode {self.mode!r}; use '{FIXED_K}' or '{THRESHOLD}'")

        if isinstance(self.min_photos, bool) or not isinstance(self.min_photos, int) or self.min_photos < 1:
            raise InvalidConfig(f"min_photos must be an integer >= 1, got {self.min_photos!r}")

    @classmethod
    def fixed_k(cls, k=None, min_photos=DEFAULT_MIN_PHOTOS, **kwargs):
        return cls(mode=FIXED_K, k=k, min_photos=min_photos, **kwargs)

    @classmethod
    def threshold(cls, d_max_km, min_photos=DEFAULT_MIN_PHOTOS, **kwargs):
        return cls(mode=THRESHOLD, d_max_km=float(d_max_km), min_photos=min_photos, **kwargs)

    @property
    def threshold_mode(self):
        return self.mode == THRESHOLD

    def to_dict(self):
        data = {'mode': self.mode, 'min_photos': self.min_photos}
        if self.mode == FIXED_K:
            data['k'] = self.k
        else:
            data['d_max_km'] = self.d_max_km
        return data


@dataclass(frozen=True)
class PredictionResult:
    predicted_home: GeoPoint
    chosen_cluster: ClusterStats
    cluster_set: ClusterSet
    error_km: Optional[float] = None
    # Direction from the predicted home to the true one; None without truth or at zero error
    bearing_to_truth_deg: Optional[float] = None

    def to_dict(self):
        data = {
            'predicted_home': self.predicted_home.to_dict(),
            'chosen_cluster': {
                'size': self.chosen_cluster.size,
                'diameter_km': round(self.chosen_cluster.diameter_km, DISTANCE_DECIMALS),
                'member_indices': list(self.chosen_cluster.member_indices),
            },
            'n_clusters': self.cluster_set.n_clusters,
            'cluster_sizes': [cluster.size for cluster in self.cluster_set.clusters],
        }
        if self.error_km is not None:
            data['error_km'] = round(self.error_km, DISTANCE_DECIMALS)
        if self.bearing_to_truth_deg is not None:
            data['bearing_to_truth_deg'] = round(self.bearing_to_truth_deg, 1) % 360.0
        return data


def _densest_cluster_key(cluster):
    # Most photos, then the tighter cluster, then the centroid for totality
    return (-cluster.size, cluster.diameter_km, cluster.centroid.lat_deg,
            cluster.centroid.lon_deg, cluster.member_indices)


def select_densest_cluster(cluster_set):
    return min(cluster_set.clusters, key=_densest_cluster_key)


def predict_hometown(photos, config=None, truth=None):
    """
    Estimate a user's home from their photos.
    photos may be PhotoRecords or bare GeoPoints; error_km is filled only
    when a ground-truth home is supplied.
    """
    config = config or PredictorConfig()
    n = len(photos)
    if n < config.min_photos:
        raise TooFewPhotos(f"{n} photos, at least {config.min_photos} required")
    if config.mode == FIXED_K and n < config.k:
        raise TooFewPhotos(f"{n} photos cannot form k={config.k} clusters")

    points = [getattr(photo, 'location', photo) for photo in photos]
    if config.threshold_mode:
        cluster_set = cluster_points(points, d_max_km=config.d_max_km, max_points=config.max_points)
    else:
        cluster_set = cluster_points(points, k=config.k, max_points=config.max_points)

    chosen = select_densest_cluster(cluster_set)
    error_km = haversine_km(chosen.centroid, truth) if truth is not None else None
    bearing = initial_bearing_deg(chosen.centroid, truth) if error_km else None

    return PredictionResult(
        predicted_home=chosen.centroid,
        chosen_cluster=chosen,
        cluster_set=cluster_set,
        error_km=error_km,
        bearing_to_truth_deg=bearing,
    )


class HometownPredictor:
    def __init__(self, config=None):
        self.config = config or PredictorConfig()

    def predict(self, photos, truth=None):
        return predict_hometown(photos, self.config, truth)

    def predict_dataset(self, dataset):
        """Predict one UserDataset, scoring against its reported home when present"""
        result = self.predict(dataset.photos, dataset.reported_home)
        log_prediction(dataset.owner_id, result)
        return result
