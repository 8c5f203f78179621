"""
Input validation utilities
"""
import math
from datetime import datetime, timezone

import validators


def parse_number(value):
    """Coerce a string or number to float; Flickr returns coordinates as strings"""
    if isinstance(value, bool) or value is None:
        return False, "not a number"
    if isinstance(value, (int, float)):
        number = float(value)
    else:
        try:
            number = float(str(value).strip())
        except ValueError:
            return False, f"unparseable number {value!r}"
    if not math.isfinite(number):
        return False, f"non-finite number {value!r}"
    return True, number


def validate_latitude(value):
    """Validate a latitude in degrees"""
    is_valid, number = parse_number(value)
    if not is_valid:
        return False, f"latitude {number}"
    if not validators.between(number, min_val=-90.0, max_val=90.0):
        return False, "latitude out of range"
    return True, number


def validate_longitude(value):
    """Validate a longitude in degrees"""
    is_valid, number = parse_number(value)
    if not is_valid:
        return False, f"longitude {number}"
    if not validators.between(number, min_val=-180.0, max_val=180.0):
        return False, "longitude out of range"
    return True, number


def validate_identifier(value, field):
    """Validate a non-empty identifier"""
    if value is None or isinstance(value, bool):
        return False, f"{field} is missing"
    text = str(value).strip()
    if not text:
        return False, f"{field} cannot be empty"
    return True, text


def parse_utc_timestamp(value):
    """Parse an ISO-8601 timestamp; naive values are taken as UTC"""
    text = (value or '').strip()
    if not text:
        return True, None
    if text.endswith(('Z', 'z')):
        text = text[:-1] + '+00:00'
    try:
        moment = datetime.fromisoformat(text)
    except ValueError:
        return False, f"bad timestamp {value!r}"
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return True, moment.astimezone(timezone.utc)


def parse_flickr_datetaken(value):
    """Parse Flickr's zone-less 'YYYY-MM-DD HH:MM:SS' and store it as if UTC"""
    if value is None or str(value).strip() == '':
        return True, None
    text = str(value).strip()
    for pattern in ('%Y-%m-%d %H:%M:%S', '%Y-%m-%dT%H:%M:%S', '%Y-%m-%d'):
        try:
            return True, datetime.strptime(text, pattern).replace(tzinfo=timezone.utc)
        except ValueError:
            continue
    return False, f"bad datetaken {value!r}"


def validate_positive(value, field):
    """Validate a strictly positive finite number"""
    is_valid, number = parse_number(value)
    if not is_valid or number <= 0:
        return False, f"{field} must be a positive number"
    return True, number
