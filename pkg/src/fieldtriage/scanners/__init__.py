"""Artifact scanners: the crime-type searches run against evidence."""

from .artifacts import ArtifactHit, ArtifactKind, CardHit, HitLocation, merge_hits
from .cards import extract_card_numbers, luhn_check, sort_by_bank_code
from .devices import AttachedDeviceRecord, extract_attached_devices
from .encryption import (
    DEFAULT_PROGRAM_NAMES,
    EncryptionFindings,
    EncryptionSummary,
    FdeSignature,
    detect_encryption_indicators,
    load_program_names,
)
from .media import inventory_media_files
from .patterns import NamedPattern, PatternSet, scan_pattern

__all__ = [
    "ArtifactHit",
    "ArtifactKind",
    "AttachedDeviceRecord",
    "CardHit",
    "DEFAULT_PROGRAM_NAMES",
    "EncryptionFindings",
    "EncryptionSummary",
    "FdeSignature",
    "HitLocation",
    "NamedPattern",
    "PatternSet",
    "detect_encryption_indicators",
    "extract_attached_devices",
    "extract_card_numbers",
    "inventory_media_files",
    "load_program_names",
    "luhn_check",
    "merge_hits",
    "scan_pattern",
    "sort_by_bank_code",
]
