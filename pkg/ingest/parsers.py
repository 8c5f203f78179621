"""
Photo, Flickr and hometown file parsers
CSV photos:  photo_id,owner_id,lat,lon,taken_at   (taken_at ISO-8601 UTC or empty)
Homes CSV:   owner_id,lat,lon
Flickr JSON: a bare array of photo objects or the {"photos": {"photo": [...]}} envelope
"""
import csv
import io
import json
from pathlib import Path

from models.geo import GeoPoint
from models.records import PhotoRecord, UserDataset
from utils.errors import DuplicateOwner, MalformedDocument, MalformedEntry, MalformedRow
from utils.logger import get_logger
from utils.validators import (parse_flickr_datetaken, parse_utc_timestamp, validate_identifier,
                              validate_latitude, validate_longitude)

logger = get_logger('ingest')

PHOTO_COLUMNS = ['photo_id', 'owner_id', 'lat', 'lon', 'taken_at']
HOME_COLUMNS = ['owner_id', 'lat', 'lon']


class _TextSource:
    """Text view over bytes, a binary stream or a text stream; detaches on exit"""

    def __init__(self, source):
        self.source = source
        self.wrapper = None

    def __enter__(self):
        if isinstance(self.source, (bytes, bytearray)):
            return io.StringIO(bytes(self.source).decode('utf-8-sig'), newline='')
        if isinstance(self.source, io.TextIOBase):
            return self.source
        self.wrapper = io.TextIOWrapper(self.source, encoding='utf-8-sig', newline='')
        return self.wrapper

    def __exit__(self, *exc_info):
        if self.wrapper is not None:
            self.wrapper.detach()
        return False


def _reject(error, strict, rejected):
    if strict:
        raise error
    logger.warning(f"Rejected {error}")
    if rejected is not None:
        rejected.append(error)


def _location(lat_value, lon_value, fail):
    is_valid, lat = validate_latitude(lat_value)
    if not is_valid:
        raise fail(lat)
    is_valid, lon = validate_longitude(lon_value)
    if not is_valid:
        raise fail(lon)
    return GeoPoint(lat, lon)


def _photo_from_row(row, line):
    def fail(reason):
        return MalformedRow(line, reason)

    if len(row) != len(PHOTO_COLUMNS):
        raise fail(f"expected {len(PHOTO_COLUMNS)} fields, got {len(row)}")

    photo_id_raw, owner_id_raw, lat_raw, lon_raw, taken_raw = row
    is_valid, photo_id = validate_identifier(photo_id_raw, 'photo_id')
    if not is_valid:
        raise fail(photo_id)
    is_valid, owner_id = validate_identifier(owner_id_raw, 'owner_id')
    if not is_valid:
        raise fail(owner_id)
    location = _location(lat_raw, lon_raw, fail)
    is_valid, taken_at = parse_utc_timestamp(taken_raw)
    if not is_valid:
        raise fail(taken_at)

    return PhotoRecord(photo_id=photo_id, owner_id=owner_id, location=location, taken_at=taken_at)


def _read_header(reader, expected):
    header = next(reader, None)
    if header is None:
        raise MalformedRow(1, "missing header row")
    if [column.strip() for column in header] != expected:
        raise MalformedRow(1, f"expected header {','.join(expected)}")


def parse_photos_csv(stream, strict=True, rejected=None):
    """
    Parse the photo CSV format.
    Strict mode raises on the first bad row; lenient mode skips it, logs it
    and appends the MalformedRow to `rejected` when a list is given.
    """
    records = []
    with _TextSource(stream) as text:
        reader = csv.reader(text)
        try:
            _read_header(reader, PHOTO_COLUMNS)
            for row in reader:
                if not any(field.strip() for field in row):
                    continue
                try:
                    records.append(_photo_from_row(row, reader.line_num))
                except MalformedRow as e:
                    _reject(e, strict, rejected)
        except (UnicodeDecodeError, csv.Error) as e:
            raise MalformedRow(reader.line_num + 1, f"unreadable CSV: {e}") from e
    return records


def _flickr_entries(document):
    if isinstance(document, list):
        return document
    if isinstance(document, dict):
        photos = document.get('photos')
        if isinstance(photos, dict) and isinstance(photos.get('photo'), list):
            return photos['photo']
    raise MalformedDocument('expected a JSON array or a {"photos": {"photo": [...]}} envelope')


def _photo_from_entry(entry, index):
    def fail(reason):
        return MalformedEntry(index, reason)

    if not isinstance(entry, dict):
        raise fail("entry is not an object")
    is_valid, photo_id = validate_identifier(entry.get('id'), 'id')
    if not is_valid:
        raise fail(photo_id)
    is_valid, owner_id = validate_identifier(entry.get('owner'), 'owner')
    if not is_valid:
        raise fail(owner_id)
    location = _location(entry.get('latitude'), entry.get('longitude'), fail)
    is_valid, taken_at = parse_flickr_datetaken(entry.get('datetaken'))
    if not is_valid:
        raise fail(taken_at)

    return PhotoRecord(
        photo_id=photo_id,
        owner_id=owner_id,
        location=location,
        taken_at=taken_at,
        tz_unknown=taken_at is not None,
    )


def parse_flickr_json(stream, strict=True, rejected=None):
    """Parse pre-crawled Flickr API photo listings (offline; nothing is fetched)"""
    with _TextSource(stream) as text:
        try:
            document = json.loads(text.read())
        except ValueError as e:
            raise MalformedDocument(f"invalid JSON: {e}") from e

    records = []
    for index, entry in enumerate(_flickr_entries(document)):
        try:
            records.append(_photo_from_entry(entry, index))
        except MalformedEntry as e:
            _reject(e, strict, rejected)
    return records


def parse_homes_csv(stream):
    """Parse owner_id,lat,lon rows; a repeated owner is a hard error"""
    homes = {}
    with _TextSource(stream) as text:
        reader = csv.reader(text)
        try:
            _read_header(reader, HOME_COLUMNS)
            for row in reader:
                if not any(field.strip() for field in row):
                    continue
                line = reader.line_num

                def fail(reason, line=line):
                    return MalformedRow(line, reason)

                if len(row) != len(HOME_COLUMNS):
                    raise fail(f"expected {len(HOME_COLUMNS)} fields, got {len(row)}")
                is_valid, owner_id = validate_identifier(row[0], 'owner_id')
                if not is_valid:
                    raise fail(owner_id)
                if owner_id in homes:
                    raise DuplicateOwner(f"line {line}: owner {owner_id} already has a home")
                homes[owner_id] = _location(row[1], row[2], fail)
        except (UnicodeDecodeError, csv.Error) as e:
            raise MalformedRow(reader.line_num + 1, f"unreadable CSV: {e}") from e
    return homes


def group_by_owner(records, homes=None):
    """One UserDataset per owner, photos in input order, datasets sorted by owner_id"""
    homes = homes or {}
    grouped = {}
    for record in records:
        grouped.setdefault(record.owner_id, []).append(record)

    return [
        UserDataset(owner_id=owner_id, photos=photos, reported_home=homes.get(owner_id))
        for owner_id, photos in sorted(grouped.items())
    ]


def load_photos(path, strict=True, rejected=None):
    """Read a photo file, choosing the Flickr JSON parser for .json files"""
    path = Path(path)
    with path.open('rb') as stream:
        if path.suffix.lower() == '.json':
            return parse_flickr_json(stream, strict, rejected)
        return parse_photos_csv(stream, strict, rejected)


def load_homes(path):
    with Path(path).open('rb') as stream:
        return parse_homes_csv(stream)
