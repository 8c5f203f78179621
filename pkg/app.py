"""
Hometown - geotagged photo hometown prediction API
Flask application exposing the predictor and the MST clustering over HTTP
"""
from flask import Flask, request, jsonify
from flask_cors import CORS
import time
from datetime import datetime, timezone

from models.geo import GeoPoint
from models.hometown_predictor import HometownPredictor, PredictorConfig
from models.mst_clustering import cluster_points
from models.records import PhotoRecord
from utils.config import API_HOST, API_PORT, DEFAULT_MIN_PHOTOS
from utils.errors import HometownError
from utils.logger import get_logger
from utils.validators import (parse_utc_timestamp, validate_identifier, validate_latitude,
                              validate_longitude, validate_positive)

# Initialize Flask app
app = Flask(__name__)
CORS(app)

# Initialize logger
logger = get_logger('api')


class RequestError(HometownError):
    pass


def _point_from_payload(item, label):
    if not isinstance(item, dict):
        raise RequestError(f"{label} must be an object with lat and lon")
    is_valid, lat = validate_latitude(item.get('lat'))
    if not is_valid:
        raise RequestError(f"{label}: {lat}")
    is_valid, lon = validate_longitude(item.get('lon'))
    if not is_valid:
        raise RequestError(f"{label}: {lon}")
    return GeoPoint(lat, lon)


def _photos_from_payload(data):
    items = data.get('photos')
    if not isinstance(items, list) or not items:
        raise RequestError("photos must be a non-empty list")

    photos = []
    for index, item in enumerate(items):
        location = _point_from_payload(item, f"photos[{index}]")
        is_valid, photo_id = validate_identifier(item.get('photo_id', f"p{index}"), 'photo_id')
        if not is_valid:
            raise RequestError(f"photos[{index}]: {photo_id}")
        is_valid, owner_id = validate_identifier(item.get('owner_id', 'anonymous'), 'owner_id')
        if not is_valid:
            raise RequestError(f"photos[{index}]: {owner_id}")
        is_valid, taken_at = parse_utc_timestamp(item.get('taken_at'))
        if not is_valid:
            raise RequestError(f"photos[{index}]: {taken_at}")
        photos.append(PhotoRecord(photo_id=photo_id, owner_id=owner_id, location=location, taken_at=taken_at))
    return photos


def _config_from_payload(data):
    min_photos = data.get('min_photos', DEFAULT_MIN_PHOTOS)
    if data.get('threshold_km') is not None:
        if data.get('k') is not None:
            raise RequestError("give either k or threshold_km, not both")
        is_valid, threshold = validate_positive(data['threshold_km'], 'threshold_km')
        if not is_valid:
            raise RequestError(threshold)
        return PredictorConfig.threshold(threshold, min_photos=min_photos)
    return PredictorConfig.fixed_k(data.get('k'), min_photos=min_photos)


def _request_body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise RequestError("request body must be a JSON object")
    return data


@app.route('/')
def home():
    """API home endpoint"""
    return jsonify({
        'name': 'Hometown API',
        'version': '1.0.0',
        'description': 'Hometown prediction from geotagged photos (MST clustering)',
        'endpoints': {
            'predict': '/api/predict',
            'cluster': '/api/cluster',
            'health': '/api/health'
        }
    })


@app.route('/api/predict', methods=['POST'])
def predict():
    """
    Predict a hometown from one user's photos
    Request body: { "photos": [{"lat": .., "lon": ..}, ...], "k": 5, "truth": {"lat": .., "lon": ..} }
    """
    start_time = time.time()

    try:
        data = _request_body()
        photos = _photos_from_payload(data)
        config = _config_from_payload(data)
        truth = _point_from_payload(data['truth'], 'truth') if data.get('truth') is not None else None

        result = HometownPredictor(config).predict(photos, truth)

        response = result.to_dict()
        response['config'] = config.to_dict()
        response['response_time_ms'] = round((time.time() - start_time) * 1000, 2)

        logger.info(f"Prediction completed: {len(photos)} photos - {response['n_clusters']} clusters")
        return jsonify(response)

    except HometownError as e:
        logger.warning(f"Rejected prediction request: {e}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error predicting hometown: {e}")
        return jsonify({'error': str(e)}), 500


@app.route('/api/cluster', methods=['POST'])
def cluster():
    """
    Cluster photo locations on their minimum spanning tree
    Request body: { "photos": [...], "k": 3 } or { "photos": [...], "threshold_km": 100 }
    """
    try:
        data = _request_body()
        photos = _photos_from_payload(data)
        config = _config_from_payload(data)
        points = [photo.location for photo in photos]

        if config.threshold_mode:
            cluster_set = cluster_points(points, d_max_km=config.d_max_km)
        else:
            cluster_set = cluster_points(points, k=config.k)

        response = cluster_set.to_dict()
        response['config'] = config.to_dict()
        return jsonify(response)

    except HometownError as e:
        logger.warning(f"Rejected cluster request: {e}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error clustering photos: {e}")
        return jsonify({'error': str(e)}), 500


@app.route('/api/health', methods=['GET'])
def health_check():
    """Health check endpoint"""
    return jsonify({
        'status': 'healthy',
        'timestamp': datetime.now(timezone.utc).isoformat()
    })


if __name__ == '__main__':
    print("=" * 60)
    print("Hometown - photo-based hometown prediction")
    print("=" * 60)
    print(f"Server starting on http://{API_HOST}:{API_PORT}")
    print("=" * 60)

    app.run(host=API_HOST, port=API_PORT)
