"""Full-disk-encryption and encryption-program indicators.

Volume headers are checked for the LUKS magic at offset 0 and the
BitLocker OEM marker at offset 3 of the volume boot record. Installed
encryption software is inferred from tree paths matched against a
configurable program-name list; the shipped default covers the common
desktop tools.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..integrity import EvidenceHandle, SourceKind
from .artifacts import HitLocation

SCANNER_ID = "encryption"

_LUKS_MAGIC = b"LUKS\xba\xbe"
_BITLOCKER_OEM = b"-FVE-FS-"
_BITLOCKER_OEM_OFFSET = 3  # OEM id field of the NTFS-style boot record

DEFAULT_PROGRAM_NAMES = (
    "VeraCrypt",
    "TrueCrypt",
    "BitLocker",
    "PGP",
    "GnuPG",
    "AxCrypt",
    "DiskCryptor",
    "BestCrypt",
    "FileVault",
)


class EncryptionSummary(str, Enum):
    NONE = "none"
    POSSIBLE = "possible"
    STRONG = "strong"


@dataclass(frozen=True)
class FdeSignature:
    name: str
    location: HitLocation


@dataclass
class EncryptionFindings:
    fde_signatures: list[FdeSignature] = field(default_factory=list)
    suspect_programs: list[str] = field(default_factory=list)

    @property
    def summary(self) -> EncryptionSummary:
        if self.fde_signatures:
            return EncryptionSummary.STRONG
        if self.suspect_programs:
            return EncryptionSummary.POSSIBLE
        return EncryptionSummary.NONE


def load_program_names(text: str) -> list[str]:
    """Parse a program list: one name per line, # comments allowed."""
    names = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            names.append(line)
    return names


def _header_signatures(head: bytes, unit: str) -> list[FdeSignature]:
    found = []
    if head.startswith(_LUKS_MAGIC):
        found.append(FdeSignature(name="luks", location=HitLocation(unit, 0)))
    if head[_BITLOCKER_OEM_OFFSET:_BITLOCKER_OEM_OFFSET + len(_BITLOCKER_OEM)] == _BITLOCKER_OEM:
        found.append(FdeSignature(name="bitlocker", location=HitLocation(unit, _BITLOCKER_OEM_OFFSET)))
    return found


def detect_encryption_indicators(
    handle: EvidenceHandle,
    program_names: list[str] | None = None,
) -> EncryptionFindings:
    """Look for volume-header FDE signatures and installed-program traces.

    Raw images are checked at the volume header; trees are checked file by
    file (container files keep their headers) and path by path against the
    program list.
    """
    names = program_names if program_names is not None else list(DEFAULT_PROGRAM_NAMES)
    findings = EncryptionFindings()

    if handle.source_kind is SourceKind.RAW_IMAGE:
        head = handle.read("", 0, 512)
        findings.fde_signatures.extend(_header_signatures(head, ""))
    elif handle.source_kind is SourceKind.DIRECTORY_TREE:
        lowered = [(n, n.lower()) for n in names]
        seen: set[str] = set()
        for unit, length in handle.units():
            if length >= len(_LUKS_MAGIC):
                head = handle.read(unit, 0, 512)
                findings.fde_signatures.extend(_header_signatures(head, unit))
            path_lower = unit.lower()
            for name, name_lower in lowered:
                if name_lower in path_lower and name not in seen:
                    seen.add(name)
                    findings.suspect_programs.append(name)
    findings.suspect_programs.sort()
    return findings
