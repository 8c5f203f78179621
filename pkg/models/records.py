"""
Photo and user records
A photo is a geotag plus an optional capture time; a user dataset is one
owner's photo sequence with an optional reported hometown.
"""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from models.geo import GeoPoint


@dataclass(frozen=True)
class PhotoRecord:
    photo_id: str
    owner_id: str
    location: GeoPoint
    taken_at: Optional[datetime] = None
    # Flickr's datetaken has no zone; it is stored as if UTC and flagged
    tz_unknown: bool = False

    def __post_init__(self):
        if not str(self.photo_id).strip():
            raise ValueError("photo_id cannot be empty")
        if not str(self.owner_id).strip():
            raise ValueError("owner_id cannot be empty")


@dataclass
class UserDataset:
    owner_id: str
    photos: list = field(default_factory=list)
    reported_home: Optional[GeoPoint] = None

    def __post_init__(self):
        for photo in self.photos:
            if photo.owner_id != self.owner_id:
                raise ValueError(
                    f"photo {photo.photo_id} belongs to {photo.owner_id}, not {self.owner_id}"
                )

    @property
    def n_photos(self):
        return len(self.photos)

    @property
    def locations(self):
        return [photo.location for photo in self.photos]

    @property
    def window(self):
        """(earliest, latest) capture times, or None when no photo is timestamped"""
        times = [photo.taken_at for photo in self.photos if photo.taken_at is not None]
        if not times:
            return None
        return min(times), max(times)
