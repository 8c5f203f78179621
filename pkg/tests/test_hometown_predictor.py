import numpy as np
import pytest

from models.geo import GeoPoint, haversine_km, spherical_centroid
from models.hometown_predictor import (FIXED_K, THRESHOLD, HometownPredictor, PredictorConfig,
                                       predict_hometown)
from models.records import UserDataset
from utils.errors import InvalidConfig, TooFewPhotos
from tests.conftest import photos_at

EIFFEL = GeoPoint(48.8584, 2.2945)


def scattered_points(seed, n):
    rng = np.random.default_rng(seed)
    centers = [GeoPoint(rng.uniform(-40, 40), rng.uniform(-150, 150)) for _ in range(4)]
    return [
        GeoPoint(center.lat_deg + rng.normal(0, 0.2), center.lon_deg + rng.normal(0, 0.2))
        for center in (centers[int(rng.integers(0, 4))] for _ in range(n))
    ]


class TestPredictorConfig:
    def test_defaults(self):
        config = PredictorConfig()
        assert config.mode == FIXED_K
        assert config.k == 5
        assert config.min_photos == 10
        assert not config.threshold_mode

    def test_threshold_constructor(self):
        config = PredictorConfig.threshold(100)
        assert config.mode == THRESHOLD
        assert config.d_max_km == 100.0
        assert config.k is None
        assert config.to_dict() == {'mode': THRESHOLD, 'min_photos': 10, 'd_max_km': 100.0}

    @pytest.mark.parametrize('kwargs', [
        {'k': 0},
        {'k': -3},
        {'k': True},
        {'k': 2, 'd_max_km': 10.0},
        {'mode': THRESHOLD},
        {'mode': THRESHOLD, 'd_max_km': 0.0},
        {'mode': THRESHOLD, 'd_max_km': float('inf')},
        {'mode': THRESHOLD, 'd_max_km': 5.0, 'k': 2},
        {'mode': 'nearest'},
        {'min_photos': 0},
    ])
    def test_invalid_configs(self, kwargs):
        with pytest.raises(InvalidConfig):
            PredictorConfig(**kwargs)


class TestPredictHometown:
    def test_all_photos_at_one_place(self):
        photos = photos_at([EIFFEL] * 10)
        result = predict_hometown(photos, PredictorConfig.fixed_k(1), truth=EIFFEL)
        assert result.predicted_home == EIFFEL
        assert result.error_km == 0.0
        assert result.chosen_cluster.size == 10
        assert result.bearing_to_truth_deg is None
        assert 'bearing_to_truth_deg' not in result.to_dict()

    def test_densest_cluster_wins(self, five_plus_two_photos):
        result = predict_hometown(five_plus_two_photos, PredictorConfig.fixed_k(2, min_photos=1))
        assert result.chosen_cluster.member_indices == (0, 1, 2, 3, 4)
        assert haversine_km(result.predicted_home, GeoPoint(0, 0)) < 1.0
        assert result.cluster_set.n_clusters == 2
        assert result.bearing_to_truth_deg is None
        assert result.error_km is None

    def test_threshold_mode(self, five_plus_two_photos):
        result = predict_hometown(five_plus_two_photos, PredictorConfig.threshold(100, min_photos=1))
        assert result.cluster_set.n_clusters == 2
        assert result.chosen_cluster.size == 5

    def test_accepts_bare_points(self, five_plus_two_points):
        from_points = predict_hometown(five_plus_two_points, PredictorConfig.fixed_k(2, min_photos=1))
        from_photos = predict_hometown(photos_at(five_plus_two_points), PredictorConfig.fixed_k(2, min_photos=1))
        assert from_points.predicted_home == from_photos.predicted_home

    def test_too_few_photos_for_min_photos(self, five_plus_two_photos):
        with pytest.raises(TooFewPhotos):
            predict_hometown(five_plus_two_photos, PredictorConfig())

    def test_too_few_photos_for_k(self, five_plus_two_photos):
        with pytest.raises(TooFewPhotos):
            predict_hometown(five_plus_two_photos[:3], PredictorConfig.fixed_k(5, min_photos=1))

    def test_error_against_truth(self, five_plus_two_photos):
        truth = GeoPoint(0.0, 1.0)
        result = predict_hometown(five_plus_two_photos, PredictorConfig.fixed_k(2, min_photos=1), truth)
        assert result.error_km == pytest.approx(haversine_km(result.predicted_home, truth))
        assert result.error_km == pytest.approx(111.195, abs=1.0)
        # Truth lies due east of the home cluster
        assert result.bearing_to_truth_deg == pytest.approx(90.0, abs=0.1)
        assert result.to_dict()['bearing_to_truth_deg'] == pytest.approx(90.0, abs=0.1)

    def test_equal_sizes_prefer_the_tighter_cluster(self):
        loose = [GeoPoint(0.0, 0.0), GeoPoint(0.01, 0.0), GeoPoint(0.0, 0.01)]
        tight = [GeoPoint(30.0, 30.0), GeoPoint(30.001, 30.0), GeoPoint(30.0, 30.001)]
        result = predict_hometown(photos_at(loose + tight), PredictorConfig.fixed_k(2, min_photos=1))
        assert result.chosen_cluster.member_indices == (3, 4, 5)
        assert haversine_km(result.predicted_home, GeoPoint(30, 30)) < 0.2

    def test_chosen_cluster_is_the_largest(self):
        for seed in range(20):
            points = scattered_points(seed, 60)
            result = predict_hometown(photos_at(points), PredictorConfig.fixed_k(4))
            assert all(result.chosen_cluster.size >= c.size for c in result.cluster_set.clusters)
            assert result.predicted_home == result.chosen_cluster.centroid

    def test_k_one_is_centroid_of_everything(self):
        points = scattered_points(3, 40)
        result = predict_hometown(photos_at(points), PredictorConfig.fixed_k(1))
        assert result.predicted_home == spherical_centroid(points)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(17)
        for seed in range(10):
            points = scattered_points(100 + seed, 50)
            shuffled = [points[i] for i in rng.permutation(len(points))]
            config = PredictorConfig.fixed_k(3)
            assert predict_hometown(shuffled, config).predicted_home == predict_hometown(points, config).predicted_home

    def test_duplicate_in_densest_cluster_keeps_it_chosen(self):
        for seed in range(10):
            points = scattered_points(200 + seed, 40)
            config = PredictorConfig.fixed_k(3)
            before = predict_hometown(points, config)
            duplicate = points[before.chosen_cluster.member_indices[0]]
            after = predict_hometown(points + [duplicate], config)
            assert after.chosen_cluster.size == before.chosen_cluster.size + 1
            assert set(before.chosen_cluster.member_indices) < set(after.chosen_cluster.member_indices)

    def test_repeated_runs_serialize_identically(self, five_plus_two_photos):
        config = PredictorConfig.fixed_k(3, min_photos=1)
        first = predict_hometown(five_plus_two_photos, config, GeoPoint(0, 0)).to_dict()
        second = predict_hometown(five_plus_two_photos, config, GeoPoint(0, 0)).to_dict()
        assert first == second
        assert first['n_clusters'] == 3


def test_predictor_scores_a_dataset(five_plus_two_photos):
    dataset = UserDataset(owner_id='u1', photos=five_plus_two_photos, reported_home=GeoPoint(0, 0))
    result = HometownPredictor(PredictorConfig.fixed_k(2, min_photos=1)).predict_dataset(dataset)
    assert result.error_km < 1.0
