"""
Photo-to-home distance analysis
Distances from each photo to its owner's home, density histograms for
plotting, and power-law fits of the distance tail. Exponents are stored
positive: density ~ d^(-exponent).
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from models.geo import haversine_km
from utils.errors import (EmptySamples, InsufficientTail, NegativeSample,
                          NonPositiveCutoff, NonPositiveSampleInLogScale)
from utils.logger import get_logger

logger = get_logger('distance')

MLE = 'mle'
LSQ = 'lsq'
LINEAR = 'linear'
LOG = 'log'

DEFAULT_X_MIN_KM = 1.0
DEFAULT_LSQ_BINS = 20


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    x_min_km: float
    n_tail: int
    log_likelihood: float
    method: str = MLE
    std_error: float = float('nan')

    def pdf(self, distance_km):
        """Fitted density at a distance (zero below x_min)"""
        if distance_km < self.x_min_km:
            return 0.0
        b = self.exponent
        return (b - 1.0) / self.x_min_km * (distance_km / self.x_min_km) ** (-b)

    def ccdf(self, distance_km):
        """Probability that a tail distance exceeds distance_km"""
        if distance_km <= self.x_min_km:
            return 1.0
        return (distance_km / self.x_min_km) ** (1.0 - self.exponent)

    def to_dict(self):
        return {
            'exponent': self.exponent,
            'signed_exponent': -self.exponent,
            'density_law': 'p(d) ~ d^(-exponent)',
            'x_min_km': self.x_min_km,
            'n_tail': self.n_tail,
            'log_likelihood': self.log_likelihood,
            'method': self.method,
            'std_error': None if math.isnan(self.std_error) else self.std_error,
        }


@dataclass(frozen=True)
class HistogramSeries:
    bin_edges: Tuple[float, ...]
    densities: Tuple[float, ...]
    counts: Tuple[int, ...]
    scale: str = LINEAR

    def to_dict(self):
        return {
            'scale': self.scale,
            'bin_edges': list(self.bin_edges),
            'densities': list(self.densities),
            'counts': list(self.counts),
        }


def distances_from_home(photos, home):
    """Great-circle distance (km) from every photo to home, in photo order"""
    return [haversine_km(photo.location, home) for photo in photos]


def pooled_home_distances(datasets):
    """Distances to the reported home for every photo of every user that has one"""
    pooled = []
    for dataset in datasets:
        if dataset.reported_home is None:
            continue
        pooled.extend(distances_from_home(dataset.photos, dataset.reported_home))
    return pooled


def _tail(samples, x_min_km):
    if not x_min_km > 0 or not math.isfinite(x_min_km):
        raise NonPositiveCutoff(f"x_min must be a positive distance, got {x_min_km!r}")
    values = np.asarray(samples, dtype=np.float64)
    if np.count_nonzero(values > x_min_km) < 2:
        raise InsufficientTail(f"fewer than 2 samples above x_min = {x_min_km} km")
    return values[values >= x_min_km]


def _log_likelihood(tail, x_min_km, exponent):
    n = tail.size
    log_ratio_sum = float(np.sum(np.log(tail / x_min_km)))
    return n * math.log(exponent - 1.0) - n * math.log(x_min_km) - exponent * log_ratio_sum


def fit_power_law_mle(samples, x_min_km=DEFAULT_X_MIN_KM):
    """
    Continuous maximum-likelihood exponent over the samples >= x_min:
    exponent = 1 + n / sum(ln(x / x_min)).
    """
    tail = _tail(samples, x_min_km)
    n = int(tail.size)
    log_ratio_sum = math.fsum(np.log(tail / x_min_km).tolist())
    exponent = 1.0 + n / log_ratio_sum

    fit = PowerLawFit(
        exponent=exponent,
        x_min_km=float(x_min_km),
        n_tail=n,
        log_likelihood=_log_likelihood(tail, x_min_km, exponent),
        method=MLE,
        std_error=(exponent - 1.0) / math.sqrt(n),
    )
    logger.debug(f"MLE fit: exponent={exponent:.4f} over {n} tail samples (x_min={x_min_km} km)")
    return fit


def fit_power_law_lsq(samples, x_min_km=DEFAULT_X_MIN_KM, bins=DEFAULT_LSQ_BINS):
    """Least-squares line through the log-log, log-binned density of the tail"""
    tail = _tail(samples, x_min_km)
    if tail.max() <= x_min_km:
        raise InsufficientTail("tail has no spread above x_min")

    edges = np.geomspace(x_min_km, tail.max(), bins + 1)
    counts, edges = np.histogram(tail, bins=edges)
    widths = np.diff(edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    densities = counts / (tail.size * widths)

    occupied = counts > 0
    if np.count_nonzero(occupied) < 2:
        raise InsufficientTail("fewer than 2 occupied log bins in the tail")

    slope, _ = np.polyfit(np.log(centers[occupied]), np.log(densities[occupied]), 1)
    exponent = float(-slope)
    log_likelihood = _log_likelihood(tail, x_min_km, exponent) if exponent > 1.0 else float('-inf')
    return PowerLawFit(
        exponent=exponent,
        x_min_km=float(x_min_km),
        n_tail=int(tail.size),
        log_likelihood=log_likelihood,
        method=LSQ,
    )


def fit_power_law(samples, x_min_km=DEFAULT_X_MIN_KM, method=MLE):
    if method == MLE:
        return fit_power_law_mle(samples, x_min_km)
    if method == LSQ:
        return fit_power_law_lsq(samples, x_min_km)
    raise ValueError(f"unknown fitting method {method!r}; use '{MLE}' or '{LSQ}'")


def histogram(samples, bins=30, scale=LINEAR):
    """Density-normalized histogram spanning [min, max] of the samples"""
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 1:
        raise ValueError(f"bins must be an integer >= 1, got {bins!r}")
    if scale not in (LINEAR, LOG):
        raise ValueError(f"unknown scale {scale!r}; use '{LINEAR}' or '{LOG}'")

    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        raise EmptySamples("histogram of an empty sample")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise NegativeSample("distances must be finite and non-negative")
    if scale == LOG and np.any(values <= 0):
        raise NonPositiveSampleInLogScale("log-scale bins need strictly positive samples")

    low, high = float(values.min()), float(values.max())
    if scale == LOG:
        # A single repeated value gets one decade of width
        edges = np.geomspace(low, high if high > low else low * 10.0, bins + 1)
    else:
        edges = np.linspace(low, high if high > low else low + 1.0, bins + 1)

    counts, edges = np.histogram(values, bins=edges)
    densities = counts / (values.size * np.diff(edges))
    return HistogramSeries(
        bin_edges=tuple(edges.tolist()),
        densities=tuple(densities.tolist()),
        counts=tuple(int(c) for c in counts),
        scale=scale,
    )
