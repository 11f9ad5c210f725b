"""Attached-device history extraction.

Two ingest formats: kernel-style log text inside a directory tree, where
lines carrying ``idVendor=XXXX, idProduct=XXXX`` each yield one record,
and normalized artifact_records sources, which pass through with
validation. Every record keeps a provenance reference to its source line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import MalformedRecord, ReadFailure
from ..integrity import EvidenceHandle, SourceKind

SCANNER_ID = "devices"

_KERNEL_LINE_RE = re.compile(
    r"idVendor=(?P<vendor>[0-9a-fA-F]{4}),\s*idProduct=(?P<product>[0-9a-fA-F]{4})"
)
_HEX4_RE = re.compile(r"^[0-9a-fA-F]{4}$")
# Optional ISO-8601 timestamp at the head of a log line.
_ISO_PREFIX_RE = re.compile(r"^(\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:Z|[+-]\d{2}:?\d{2})?)")


@dataclass(frozen=True)
class AttachedDeviceRecord:
    vendor_id: str
    product_id: str
    serial: str | None
    first_seen: str | None
    source_line: str  # provenance: "path:lineno" or "record:index"


def _parse_log_line(line: str, provenance: str) -> AttachedDeviceRecord | None:
    m = _KERNEL_LINE_RE.search(line)
    if not m:
        return None
    first_seen = None
    ts = _ISO_PREFIX_RE.match(line.strip())
    if ts:
        first_seen = ts.group(1)
    return AttachedDeviceRecord(
        vendor_id=m.group("vendor").lower(),
        product_id=m.group("product").lower(),
        serial=None,
        first_seen=first_seen,
        source_line=provenance,
    )


def extract_attached_devices(handle: EvidenceHandle) -> list[AttachedDeviceRecord]:
    """Pull the attached-device history out of logs or normalized records."""
    records: list[AttachedDeviceRecord] = []
    if handle.source_kind is SourceKind.ARTIFACT_RECORDS:
        for index, raw in enumerate(handle.records()):
            vendor = str(raw.get("vendor_id", ""))
            product = str(raw.get("product_id", ""))
            if not _HEX4_RE.match(vendor) or not _HEX4_RE.match(product):
                raise MalformedRecord(index, "vendor_id/product_id must be 4 hex digits")
            serial = raw.get("serial")
            records.append(
                AttachedDeviceRecord(
                    vendor_id=vendor.lower(),
                    product_id=product.lower(),
                    serial=str(serial) if serial is not None else None,
                    first_seen=raw.get("first_seen"),
                    source_line=f"record:{index}",
                )
            )
    elif handle.source_kind is SourceKind.DIRECTORY_TREE:
        for unit, _length in handle.units():
            with handle.open_unit(unit) as fh:
                data = fh.read()
            text = data.decode("utf-8", "replace")
            for lineno, line in enumerate(text.splitlines(), start=1):
                record = _parse_log_line(line, f"{unit}:{lineno}")
                if record:
                    records.append(record)
    else:
        raise ReadFailure("device extraction requires a directory_tree or artifact_records source")
    return records
