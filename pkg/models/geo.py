"""
Great-circle geometry
Distances, spherical centroids and forward destinations on a sphere of
mean Earth radius. Degrees at the interface, radians inside.
"""
import math
from dataclasses import dataclass

import numpy as np

from utils.errors import DegenerateCentroid, InvalidCoordinate

# Mean Earth radius in kilometers (IUGG)
EARTH_RADIUS_KM = 6371.0088

# Below this norm the 3-D mean has no meaningful direction
CENTROID_EPSILON = 1e-9

COORD_DECIMALS = 6


def normalize_longitude(lon_deg):
    """Map a longitude into (-180, 180]"""
    if -180.0 < lon_deg <= 180.0:
        return lon_deg
    lon_deg = math.fmod(lon_deg + 180.0, 360.0)
    if lon_deg < 0:
        lon_deg += 360.0
    lon_deg -= 180.0
    return 180.0 if lon_deg == -180.0 else lon_deg


@dataclass(frozen=True)
class GeoPoint:
    lat_deg: float
    lon_deg: float

    def __post_init__(self):
        lat = float(self.lat_deg)
        lon = float(self.lon_deg)
        if not (math.isfinite(lat) and math.isfinite(lon)):
            raise InvalidCoordinate(f"non-finite coordinate ({self.lat_deg}, {self.lon_deg})")
        if not -90.0 <= lat <= 90.0:
            raise InvalidCoordinate(f"latitude out of range: {lat}")
        object.__setattr__(self, 'lat_deg', lat)
        object.__setattr__(self, 'lon_deg', normalize_longitude(lon))

    def to_unit_vector(self):
        phi = math.radians(self.lat_deg)
        lam = math.radians(self.lon_deg)
        return (math.cos(phi) * math.cos(lam), math.cos(phi) * math.sin(lam), math.sin(phi))

    def to_dict(self):
        return {
            'lat': round(self.lat_deg, COORD_DECIMALS),
            'lon': round(self.lon_deg, COORD_DECIMALS),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data['lat'], data['lon'])


def _arc_km(h):
    h = min(1.0, max(0.0, h))
    return EARTH_RADIUS_KM * 2.0 * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def _haversine_term(lat1_deg, lon1_deg, lat2_deg, lon2_deg):
    phi1 = math.radians(lat1_deg)
    phi2 = math.radians(lat2_deg)
    d_phi = math.radians(lat2_deg - lat1_deg)
    d_lambda = math.radians(lon2_deg - lon1_deg)
    return math.sin(d_phi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(d_lambda / 2.0) ** 2


def haversine_km(a, b):
    """Great-circle distance between two GeoPoints in kilometers"""
    # Canonical order makes the result exactly symmetric
    if (a.lat_deg, a.lon_deg) > (b.lat_deg, b.lon_deg):
        a, b = b, a
    h = _haversine_term(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg)
    if h <= 0.5:
        return _arc_km(h)
    # Past a quarter circle, measure to b's antipode instead; h near 1 loses precision
    h_anti = _haversine_term(a.lat_deg, a.lon_deg, -b.lat_deg, b.lon_deg + 180.0)
    return math.pi * EARTH_RADIUS_KM - _arc_km(h_anti)


def _to_degree_arrays(points):
    lat = np.array([p.lat_deg for p in points], dtype=np.float64)
    lon = np.array([p.lon_deg for p in points], dtype=np.float64)
    return lat, lon


def _haversine_term_matrix(lat_a, lon_a, lat_b, lon_b):
    d_phi = np.radians(lat_b[None, :] - lat_a[:, None])
    d_lambda = np.radians(lon_b[None, :] - lon_a[:, None])
    cos_product = np.cos(np.radians(lat_a))[:, None] * np.cos(np.radians(lat_b))[None, :]
    return np.sin(d_phi / 2.0) ** 2 + cos_product * np.sin(d_lambda / 2.0) ** 2


def _arc_km_array(h):
    h = np.clip(h, 0.0, 1.0)
    return EARTH_RADIUS_KM * 2.0 * np.arctan2(np.sqrt(h), np.sqrt(1.0 - h))


def haversine_km_matrix(points):
    """Symmetric n x n matrix of great-circle distances (km)"""
    lat, lon = _to_degree_arrays(points)
    h = _haversine_term_matrix(lat, lon, lat, lon)
    distances = _arc_km_array(h)

    far = h > 0.5
    if far.any():
        h_anti = _haversine_term_matrix(lat, lon, -lat, lon + 180.0)
        distances = np.where(far, math.pi * EARTH_RADIUS_KM - _arc_km_array(h_anti), distances)

    # Mirror the upper triangle so the matrix is exactly symmetric
    upper = np.triu(distances, k=1)
    return upper + upper.T


def spherical_centroid(points):
    """
    Average location of a point set.
    The 3-D unit vectors are summed (exactly rounded, so input order does not
    matter), normalized and projected back to latitude/longitude.
    """
    points = list(points)
    if not points:
        raise DegenerateCentroid("centroid of an empty point set")

    first = points[0]
    if all(p == first for p in points):
        return first

    vectors = [p.to_unit_vector() for p in points]
    n = len(vectors)
    x = math.fsum(v[0] for v in vectors) / n
    y = math.fsum(v[1] for v in vectors) / n
    z = math.fsum(v[2] for v in vectors) / n

    norm = math.sqrt(x * x + y * y + z * z)
    if norm < CENTROID_EPSILON:
        raise DegenerateCentroid(
            f"mean vector norm {norm:.3e} below {CENTROID_EPSILON:g}; points are balanced around the sphere"
        )

    lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    lon = math.degrees(math.atan2(y, x))
    return GeoPoint(max(-90.0, min(90.0, lat)), lon)


def geodesic_destination(origin, bearing_deg, distance_km):
    """Point reached by travelling distance_km from origin along an initial bearing"""
    if distance_km < 0 or not math.isfinite(distance_km):
        raise InvalidCoordinate(f"distance must be finite and non-negative, got {distance_km}")
    if distance_km == 0:
        return origin

    delta = distance_km / EARTH_RADIUS_KM
    theta = math.radians(bearing_deg)
    phi1 = math.radians(origin.lat_deg)
    lam1 = math.radians(origin.lon_deg)

    sin_phi2 = math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    phi2 = math.asin(max(-1.0, min(1.0, sin_phi2)))
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * sin_phi2,
    )
    return GeoPoint(math.degrees(phi2), math.degrees(lam2))


def initial_bearing_deg(a, b):
    """Forward azimuth from a to b, degrees clockwise from north in [0, 360)"""
    phi1 = math.radians(a.lat_deg)
    phi2 = math.radians(b.lat_deg)
    d_lambda = math.radians(b.lon_deg - a.lon_deg)
    y = math.sin(d_lambda) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(d_lambda)
    bearing = math.degrees(math.atan2(y, x)) % 360.0
    return 0.0 if bearing == 360.0 else bearing
