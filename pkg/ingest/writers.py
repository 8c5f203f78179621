"""
Serialization of photos, homes and JSON reports
Coordinates are written with 6 decimals, distances with 3.
"""
import csv
import json
import math

from ingest.parsers import HOME_COLUMNS, PHOTO_COLUMNS

SCHEMA_VERSION = 1

PER_USER_COLUMNS = ['user_id', 'error_km', 'n_photos', 'chosen_cluster_size', 'pred_lat', 'pred_lon']


def format_coordinate(value):
    return f"{value:.6f}"


def format_distance(value):
    return f"{value:.3f}"


def format_timestamp(moment):
    """RFC-3339 UTC, e.g. 2009-06-01T12:00:00Z"""
    if moment is None:
        return ''
    text = moment.strftime('%Y-%m-%dT%H:%M:%S')
    if moment.microsecond:
        text += f".{moment.microsecond:06d}"
    return text + 'Z'


def write_photos_csv(records, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(PHOTO_COLUMNS)
    for record in records:
        writer.writerow([
            record.photo_id,
            record.owner_id,
            format_coordinate(record.location.lat_deg),
            format_coordinate(record.location.lon_deg),
            format_timestamp(record.taken_at),
        ])


def write_homes_csv(homes, stream):
    """homes: mapping owner_id -> GeoPoint, written in owner order"""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(HOME_COLUMNS)
    for owner_id, home in sorted(homes.items()):
        writer.writerow([owner_id, format_coordinate(home.lat_deg), format_coordinate(home.lon_deg)])


def write_flickr_json(records, stream):
    """Flickr envelope form; datetaken loses its zone the way the API presents it"""
    entries = []
    for record in records:
        entry = {
            'id': record.photo_id,
            'owner': record.owner_id,
            'latitude': format_coordinate(record.location.lat_deg),
            'longitude': format_coordinate(record.location.lon_deg),
        }
        if record.taken_at is not None:
            entry['datetaken'] = record.taken_at.strftime('%Y-%m-%d %H:%M:%S')
        entries.append(entry)
    json.dump({'photos': {'photo': entries}}, stream, indent=2, sort_keys=True)
    stream.write('\n')


def write_per_user_csv(report, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(PER_USER_COLUMNS)
    for row in report.per_user:
        writer.writerow([
            row.user_id,
            format_distance(row.error_km),
            row.n_photos,
            row.chosen_cluster_size,
            format_coordinate(row.predicted_home.lat_deg),
            format_coordinate(row.predicted_home.lon_deg),
        ])


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(key): _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def build_report(command, config, payload):
    """Top-level report object; new fields are only ever added"""
    report = {'schema_version': SCHEMA_VERSION, 'command': command, 'config': config}
    report.update(payload)
    return _json_safe(report)


def dump_report(report, stream):
    json.dump(report, stream, indent=2, sort_keys=True)
    stream.write('\n')


def report_to_text(report):
    return json.dumps(report, indent=2, sort_keys=True) + '\n'
