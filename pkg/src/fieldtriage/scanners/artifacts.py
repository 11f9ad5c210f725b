"""Artifact hit types shared by every scanner."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ArtifactKind(str, Enum):
    CARD_NUMBER = "card_number"
    EMAIL = "email"
    ID_PATTERN = "id_pattern"
    MEDIA_FILE = "media_file"
    ENCRYPTION_INDICATOR = "encryption_indicator"
    ATTACHED_DEVICE = "attached_device"


@dataclass(frozen=True, order=True)
class HitLocation:
    """Where a hit was observed: (unit path, byte offset).

    ``path`` is ``""`` for raw images (offset is absolute in the image) and
    the relative file path for trees; for record sources the offset is the
    record index.
    """

    path: str
    offset: int

    def as_str(self) -> str:
        return f"{self.path}@{self.offset}" if self.path else f"@{self.offset}"


@dataclass
class ArtifactHit:
    kind: ArtifactKind
    value: str
    location: HitLocation
    scanner_id: str
    flagged: bool = False
    note: str | None = None

    def sort_key(self) -> tuple:
        return (self.scanner_id, self.location, self.value)


@dataclass
class CardHit(ArtifactHit):
    """A Luhn-valid payment card number.

    Duplicate sightings of the same PAN are collapsed into one hit;
    ``locations`` keeps every sighting, ``location`` is the first.
    """

    pan: str = ""
    bank_code: str = ""
    locations: tuple[HitLocation, ...] = ()


def merge_hits(*hit_lists: list[ArtifactHit]) -> list[ArtifactHit]:
    """Deterministic merge of per-scanner results by (scanner_id, location)."""
    merged: list[ArtifactHit] = []
    for hits in hit_lists:
        merged.extend(hits)
    merged.sort(key=ArtifactHit.sort_key)
    return merged
