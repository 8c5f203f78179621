"""
Runtime settings loaded from the environment (.env supported)
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _int_env(name, default):
    value = os.getenv(name, '')
    return int(value) if value.strip() else default


def _thresholds_env(name, default):
    value = os.getenv(name, '')
    if not value.strip():
        return default
    return tuple(float(part) for part in value.split(',') if part.strip())


LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

# Predictor defaults
DEFAULT_K = _int_env('HOMETOWN_DEFAULT_K', 5)
DEFAULT_MIN_PHOTOS = _int_env('HOMETOWN_MIN_PHOTOS', 10)

# Complete-graph clustering refuses inputs above this many points
MAX_POINTS = _int_env('HOMETOWN_MAX_POINTS', 50000)

# Evaluation defaults
DEFAULT_THRESHOLDS_KM = _thresholds_env('HOMETOWN_EVAL_THRESHOLDS', (10.0, 25.0, 50.0, 100.0, 500.0))
DEFAULT_CDF_RESOLUTION = _int_env('HOMETOWN_CDF_RESOLUTION', 101)

# HTTP API
API_HOST = os.getenv('API_HOST', '127.0.0.1')
API_PORT = _int_env('API_PORT', 5000)
