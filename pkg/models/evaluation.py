"""
Cohort Evaluation
Runs the predictor over every user with a reported home and summarizes the
prediction errors: per-user rows, the empirical error CDF, the fraction of
users within each "low error" threshold, and an error histogram.
"""
import math
import statistics
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from models.distance_distribution import HistogramSeries, histogram
from models.geo import GeoPoint
from models.hometown_predictor import HometownPredictor
from models.mst_clustering import DISTANCE_DECIMALS
from utils.config import DEFAULT_CDF_RESOLUTION, DEFAULT_THRESHOLDS_KM
from utils.errors import (DegenerateCentroid, DuplicateOwner, EmptyCohort, EmptyErrors,
                          InputTooLarge, InvalidThresholds, NoGroundTruth, TooFewPhotos)
from utils.logger import get_logger

logger = get_logger('evaluation')

ERROR_HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class UserError:
    user_id: str
    error_km: float
    n_photos: int
    chosen_cluster_size: int
    predicted_home: GeoPoint

    def to_dict(self):
        return {
            'user_id': self.user_id,
            'error_km': round(self.error_km, DISTANCE_DECIMALS),
            'n_photos': self.n_photos,
            'chosen_cluster_size': self.chosen_cluster_size,
            'predicted_home': self.predicted_home.to_dict(),
        }


@dataclass(frozen=True)
class EvalReport:
    per_user: Tuple[UserError, ...]
    cdf: Tuple[Tuple[float, float], ...]
    fraction_within: Dict[float, float]
    failures: Tuple[Tuple[str, str], ...] = ()
    median_error_km: Optional[float] = None
    mean_error_km: Optional[float] = None
    error_histogram: Optional[HistogramSeries] = field(default=None, compare=False)

    @property
    def n_failed(self):
        return len(self.failures)

    @property
    def n_users(self):
        return len(self.per_user) + self.n_failed

    def to_dict(self):
        def km(value):
            return None if value is None else round(value, DISTANCE_DECIMALS)

        return {
            'n_users': self.n_users,
            'n_predicted': len(self.per_user),
            'n_failed': self.n_failed,
            'failures': [{'user_id': user_id, 'reason': reason} for user_id, reason in self.failures],
            'per_user': [row.to_dict() for row in self.per_user],
            'fraction_within': {f"{threshold:g}": fraction for threshold, fraction in self.fraction_within.items()},
            'median_error_km': km(self.median_error_km),
            'mean_error_km': km(self.mean_error_km),
            'cdf': [[round(x, DISTANCE_DECIMALS), fraction] for x, fraction in self.cdf],
            'error_histogram': self.error_histogram.to_dict() if self.error_histogram else None,
        }


def _check_thresholds(thresholds):
    values = [float(t) for t in thresholds]
    if not values:
        raise InvalidThresholds("at least one threshold is required")
    if any(not math.isfinite(v) or v <= 0 for v in values):
        raise InvalidThresholds(f"thresholds must be positive distances, got {values}")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidThresholds(f"thresholds must be strictly increasing, got {values}")
    return values


def fraction_within(errors, threshold_km):
    """Share of errors at or below threshold_km"""
    if not errors:
        raise EmptyErrors("no errors to summarize")
    return sum(1 for e in errors if e <= threshold_km) / len(errors)


def error_cdf(errors, resolution=DEFAULT_CDF_RESOLUTION):
    """Empirical CDF (right-continuous) sampled at `resolution` points over [0, max error]"""
    if isinstance(resolution, bool) or not isinstance(resolution, (int, np.integer)) or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    values = np.sort(np.asarray(errors, dtype=np.float64))
    if values.size == 0:
        raise EmptyErrors("error CDF of an empty sample")

    grid = np.linspace(0.0, float(values[-1]), resolution)
    counts = np.searchsorted(values, grid, side='right')
    return [(float(x), float(c) / values.size) for x, c in zip(grid, counts)]


def evaluate_cohort(users, config=None, thresholds=DEFAULT_THRESHOLDS_KM,
                    cdf_resolution=DEFAULT_CDF_RESOLUTION):
    """
    Predict every user's home and score it against the reported one.
    Users without a reported home or failing the predictor's preconditions
    are listed in failures with a reason; fractions use successes only.
    """
    if not users:
        raise EmptyCohort("no users to evaluate")
    thresholds = _check_thresholds(thresholds)

    owner_ids = [user.owner_id for user in users]
    if len(set(owner_ids)) != len(owner_ids):
        raise DuplicateOwner("cohort contains the same owner_id more than once")
    if all(user.reported_home is None for user in users):
        raise NoGroundTruth("no user in the cohort has a reported home")

    predictor = HometownPredictor(config)
    rows = []
    failures = []

    for dataset in sorted(users, key=lambda u: u.owner_id):
        if dataset.reported_home is None:
            failures.append((dataset.owner_id, 'no reported home'))
            continue
        try:
            result = predictor.predict_dataset(dataset)
        except (TooFewPhotos, DegenerateCentroid, InputTooLarge) as e:
            logger.warning(f"Skipping {dataset.owner_id}: {e}")
            failures.append((dataset.owner_id, f"{type(e).__name__}: {e}"))
            continue

        rows.append(UserError(
            user_id=dataset.owner_id,
            error_km=result.error_km,
            n_photos=dataset.n_photos,
            chosen_cluster_size=result.chosen_cluster.size,
            predicted_home=result.predicted_home,
        ))

    errors = [row.error_km for row in rows]
    if not errors:
        logger.warning("No user could be predicted; summary fractions are zero")
        return EvalReport(
            per_user=(),
            cdf=(),
            fraction_within={t: 0.0 for t in thresholds},
            failures=tuple(failures),
        )

    report = EvalReport(
        per_user=tuple(rows),
        cdf=tuple(error_cdf(errors, cdf_resolution)),
        fraction_within={t: fraction_within(errors, t) for t in thresholds},
        failures=tuple(failures),
        median_error_km=float(statistics.median(errors)),
        mean_error_km=math.fsum(errors) / len(errors),
        error_histogram=histogram(errors, bins=ERROR_HISTOGRAM_BINS),
    )
    logger.info(
        f"Evaluated {report.n_users} users: {len(rows)} predicted, {report.n_failed} failed, "
        f"median error {report.median_error_km:.3f} km"
    )
    return report
