"""
Synthetic photo cohorts
Each user has a home; a photo is either taken near home at a truncated
power-law distance, or inside one of a few far-away travel clusters.

Randomness comes from numpy's PCG64 bit generator. Only Generator.random()
uniforms are consumed, each transformed by an explicit inverse CDF, so a
cohort depends on nothing but (params, seed). User i is seeded with
seed XOR i, which makes users independent of cohort size and order.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from models.geo import COORD_DECIMALS, GeoPoint, geodesic_destination
from models.records import PhotoRecord, UserDataset
from utils.errors import InvalidParams
from utils.logger import get_logger

logger = get_logger('synth')

HOME_LAT_LIMIT_DEG = 60.0

# 21 219 photos over 31 users in the crawled cohort this model mimics
DEFAULT_COHORT_SIZE = 31
DEFAULT_PHOTOS_PER_USER = 685


@dataclass(frozen=True)
class SynthParams:
    n_photos: int = DEFAULT_PHOTOS_PER_USER
    home_fraction: float = 0.8
    exponent: float = 2.38
    x_min_km: float = 0.5
    r_cap_km: float = 50.0
    n_travel_clusters: int = 3
    travel_spread_km: float = 30.0
    travel_min_km: float = 500.0
    travel_max_km: float = 10000.0
    seed: int = 0

    def validate(self):
        if isinstance(self.n_photos, bool) or not isinstance(self.n_photos, int) or self.n_photos < 0:
            raise InvalidParams(f"n_photos must be a non-negative integer, got {self.n_photos!r}")
        if not 0.0 <= self.home_fraction <= 1.0:
            raise InvalidParams(f"home_fraction must lie in [0, 1], got {self.home_fraction}")
        _check_pareto(self.exponent, self.x_min_km, self.r_cap_km)
        if not isinstance(self.n_travel_clusters, int) or self.n_travel_clusters < 0:
            raise InvalidParams(f"n_travel_clusters must be >= 0, got {self.n_travel_clusters!r}")
        if self.n_travel_clusters == 0 and self.home_fraction < 1.0:
            raise InvalidParams("travel photos need at least one travel cluster")
        if not self.travel_spread_km >= 0:
            raise InvalidParams(f"travel_spread_km must be >= 0, got {self.travel_spread_km}")
        if not 0 <= self.travel_min_km < self.travel_max_km:
            raise InvalidParams(
                f"need 0 <= travel_min_km < travel_max_km, got {self.travel_min_km}, {self.travel_max_km}"
            )
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidParams(f"seed must be a non-negative integer, got {self.seed!r}")
        return self

    def to_dict(self):
        return {
            'n_photos': self.n_photos,
            'home_fraction': self.home_fraction,
            'exponent': self.exponent,
            'x_min_km': self.x_min_km,
            'r_cap_km': self.r_cap_km,
            'n_travel_clusters': self.n_travel_clusters,
            'travel_spread_km': self.travel_spread_km,
            'travel_min_km': self.travel_min_km,
            'travel_max_km': self.travel_max_km,
            'seed': self.seed,
            'rng': 'numpy.PCG64, per-user seed = seed XOR user_index',
        }


@dataclass(frozen=True)
class SyntheticUser:
    user_id: str
    true_home: GeoPoint
    photos: Tuple[PhotoRecord, ...]
    home_generated: Tuple[bool, ...] = field(default=(), compare=False)
    travel_centers: Tuple[GeoPoint, ...] = field(default=(), compare=False)

    def to_dataset(self):
        return UserDataset(owner_id=self.user_id, photos=list(self.photos), reported_home=self.true_home)

    @property
    def home_photos(self):
        return [photo for photo, is_home in zip(self.photos, self.home_generated) if is_home]


def _check_pareto(exponent, x_min_km, r_cap_km):
    if not exponent > 1.0:
        raise InvalidParams(f"exponent must exceed 1, got {exponent}")
    if not 0.0 < x_min_km < r_cap_km or not math.isfinite(r_cap_km):
        raise InvalidParams(f"need 0 < x_min_km < r_cap_km, got {x_min_km}, {r_cap_km}")


def truncated_pareto_from_uniform(u, exponent, x_min_km, r_cap_km):
    """Inverse CDF of the power-law density restricted to [x_min, r_cap]; u=0 -> x_min, u=1 -> r_cap"""
    _check_pareto(exponent, x_min_km, r_cap_km)
    u = np.asarray(u, dtype=np.float64)
    one_minus_b = 1.0 - exponent
    tail_mass = 1.0 - (r_cap_km / x_min_km) ** one_minus_b
    values = x_min_km * (1.0 - u * tail_mass) ** (1.0 / one_minus_b)
    values = np.clip(values, x_min_km, r_cap_km)
    return float(values) if values.ndim == 0 else values


def sample_truncated_pareto(rng, exponent, x_min_km, r_cap_km, size=None):
    """Draw from the truncated power law with a numpy Generator"""
    _check_pareto(exponent, x_min_km, r_cap_km)
    return truncated_pareto_from_uniform(rng.random(size), exponent, x_min_km, r_cap_km)


def truncated_pareto_mean(exponent, x_min_km, r_cap_km):
    """Closed-form mean of the truncated power law"""
    _check_pareto(exponent, x_min_km, r_cap_km)
    b = exponent
    ratio = r_cap_km / x_min_km
    norm = (b - 1.0) / (1.0 - ratio ** (1.0 - b))
    if math.isclose(b, 2.0):
        return norm * x_min_km * math.log(ratio)
    return norm * x_min_km * (ratio ** (2.0 - b) - 1.0) / (2.0 - b)


def user_rng(seed, user_index):
    return np.random.Generator(np.random.PCG64(seed ^ user_index))


def _quantize(point):
    return GeoPoint(round(point.lat_deg, COORD_DECIMALS), round(point.lon_deg, COORD_DECIMALS))


def _uniform_home(rng):
    # Uniform by area inside the latitude band
    z_max = math.sin(math.radians(HOME_LAT_LIMIT_DEG))
    z = (2.0 * rng.random() - 1.0) * z_max
    lat = math.degrees(math.asin(z))
    lon = 360.0 * rng.random() - 180.0
    return GeoPoint(lat, lon)


def generate_user(params, user_index):
    """One synthetic user, deterministic in (params.seed, user_index)"""
    params.validate()
    if isinstance(user_index, bool) or not isinstance(user_index, int) or user_index < 0:
        raise InvalidParams(f"user_index must be a non-negative integer, got {user_index!r}")

    rng = user_rng(params.seed, user_index)
    user_id = f"synth_{user_index:04d}"
    home = _quantize(_uniform_home(rng))

    centers = []
    for _ in range(params.n_travel_clusters):
        distance = params.travel_min_km + rng.random() * (params.travel_max_km - params.travel_min_km)
        bearing = 360.0 * rng.random()
        centers.append(geodesic_destination(home, bearing, distance))

    photos = []
    home_generated = []
    for photo_index in range(params.n_photos):
        if rng.random() < params.home_fraction:
            distance = sample_truncated_pareto(rng, params.exponent, params.x_min_km, params.r_cap_km)
            bearing = 360.0 * rng.random()
            location = geodesic_destination(home, bearing, distance)
            home_generated.append(True)
        else:
            center = centers[min(int(rng.random() * len(centers)), len(centers) - 1)]
            # Uniform over the disc of radius travel_spread_km
            distance = params.travel_spread_km * math.sqrt(rng.random())
            bearing = 360.0 * rng.random()
            location = geodesic_destination(center, bearing, distance)
            home_generated.append(False)

        photos.append(PhotoRecord(
            photo_id=f"{user_id}_p{photo_index:05d}",
            owner_id=user_id,
            location=_quantize(location),
        ))

    return SyntheticUser(
        user_id=user_id,
        true_home=home,
        photos=tuple(photos),
        home_generated=tuple(home_generated),
        travel_centers=tuple(centers),
    )


def generate_cohort(params, n_users=DEFAULT_COHORT_SIZE):
    """n_users independent synthetic users"""
    params.validate()
    if isinstance(n_users, bool) or not isinstance(n_users, int) or n_users < 1:
        raise InvalidParams(f"n_users must be an integer >= 1, got {n_users!r}")

    cohort = [generate_user(params, index) for index in range(n_users)]
    logger.info(f"Generated cohort: {n_users} users x {params.n_photos} photos (seed {params.seed})")
    return cohort


def with_overrides(params, **overrides):
    """Copy of params with the non-None overrides applied"""
    return replace(params, **{key: value for key, value in overrides.items() if value is not None})
