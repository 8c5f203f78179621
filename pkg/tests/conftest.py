"""Shared fixtures."""
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from models.geo import GeoPoint
from models.mobility_synth import SynthParams, generate_cohort
from models.records import PhotoRecord

FIXTURES = Path(__file__).parent / 'fixtures'

PROPERTY_SETTINGS = settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

latitudes = st.floats(min_value=-90.0, max_value=90.0, allow_nan=False)
longitudes = st.floats(min_value=-180.0, max_value=180.0, allow_nan=False)
geo_points = st.builds(GeoPoint, latitudes, longitudes)


def photos_at(points, owner_id='u1'):
    return [
        PhotoRecord(photo_id=f"p{index}", owner_id=owner_id, location=point)
        for index, point in enumerate(points)
    ]


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def five_plus_two_points():
    """Five photos within 1 km of (0, 0) and two within 1 km of (40, 40)"""
    return [
        GeoPoint(0.0, 0.0),
        GeoPoint(0.001, 0.0),
        GeoPoint(0.0, 0.001),
        GeoPoint(-0.001, 0.0),
        GeoPoint(0.0, -0.001),
        GeoPoint(40.0, 40.0),
        GeoPoint(40.001, 40.0),
    ]


@pytest.fixture
def five_plus_two_photos(five_plus_two_points):
    return photos_at(five_plus_two_points)


@pytest.fixture(scope='session')
def default_cohort():
    """31 users x 685 photos with the default mobility parameters"""
    return generate_cohort(SynthParams(seed=2010), 31)
