"""Evidence integrity layer: read-only handles, hash manifests, audit log.

Everything downstream (scanners, triage, reporting) reaches evidence bytes
only through an :class:`EvidenceHandle`, which exposes no write path. Hash
manifests prove the bytes were unchanged by an assessment, and the audit
log records every operation taken on a case.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .errors import (
    AlgorithmUnsupported,
    IntegrityViolation,
    LogClosed,
    NotFound,
    NotReadable,
    ReadFailure,
)

HASH_ALGORITHM = "sha256"
# Per-range digests localize a mutation inside large images without
# bloating the manifest.
DEFAULT_CHUNK_SIZE = 64 * 1024 * 1024
_READ_BLOCK = 1024 * 1024


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SourceKind(str, Enum):
    RAW_IMAGE = "raw_image"
    DIRECTORY_TREE = "directory_tree"
    ARTIFACT_RECORDS = "artifact_records"


class _ReadOnlyFile:
    """File wrapper that turns any write attempt into IntegrityViolation."""

    def __init__(self, raw: io.BufferedReader):
        self._raw = raw

    def read(self, size: int = -1) -> bytes:
        return self._raw.read(size)

    def seek(self, offset: int, whence: int = os.SEEK_SET) -> int:
        return self._raw.seek(offset, whence)

    def tell(self) -> int:
        return self._raw.tell()

    def close(self) -> None:
        self._raw.close()

    def __enter__(self) -> "_ReadOnlyFile":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def write(self, *args, **kwargs):
        raise IntegrityViolation("write attempted through evidence handle")

    def writelines(self, *args, **kwargs):
        raise IntegrityViolation("write attempted through evidence handle")

    def truncate(self, *args, **kwargs):
        raise IntegrityViolation("truncate attempted through evidence handle")


@dataclass(frozen=True)
class EvidenceHandle:
    """Read-only access to one evidence source.

    ``byte_length`` is populated for raw images, ``entry_count`` for
    directory trees (files) and artifact-record sources (records).
    """

    source_id: str
    source_kind: SourceKind
    path: Path
    byte_length: int | None
    entry_count: int | None
    opened_at: str

    # -- unit view: a source is one or more named byte streams --------------

    def units(self) -> list[tuple[str, int]]:
        """(key, length) per scannable byte stream, sorted by key.

        Raw images expose a single unit keyed ``""``; trees expose one unit
        per file keyed by POSIX relative path.
        """
        if self.source_kind is SourceKind.RAW_IMAGE:
            return [("", self.byte_length or 0)]
        if self.source_kind is SourceKind.DIRECTORY_TREE:
            out = []
            for p in sorted(self.path.rglob("*")):
                if p.is_file() and not p.is_symlink():
                    out.append((p.relative_to(self.path).as_posix(), p.stat().st_size))
            return out
        return []

    def _unit_path(self, unit: str) -> Path:
        if self.source_kind is SourceKind.RAW_IMAGE:
            if unit != "":
                raise ReadFailure(f"raw image has no unit {unit!r}")
            return self.path
        target = (self.path / unit).resolve()
        if not str(target).startswith(str(self.path.resolve())):
            raise ReadFailure(f"unit escapes tree: {unit!r}")
        return target

    def read(self, unit: str, offset: int, size: int) -> bytes:
        """Read ``size`` bytes at ``offset`` from the named unit."""
        path = self._unit_path(unit)
        try:
            with open(path, "rb") as fh:
                fh.seek(offset)
                return fh.read(size)
        except OSError as exc:
            raise ReadFailure(f"{path}@{offset}: {exc}") from exc

    def open_unit(self, unit: str) -> _ReadOnlyFile:
        path = self._unit_path(unit)
        try:
            return _ReadOnlyFile(open(path, "rb"))
        except OSError as exc:
            raise ReadFailure(f"{path}: {exc}") from exc

    def records(self) -> list[dict]:
        """Parsed entries of an artifact_records source (one JSON per line)."""
        if self.source_kind is not SourceKind.ARTIFACT_RECORDS:
            raise ReadFailure(f"{self.source_kind.value} source has no records")
        out = []
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        out.append(json.loads(line))
        except OSError as exc:
            raise ReadFailure(f"{self.path}: {exc}") from exc
        return out


def open_evidence(
    path: str | Path,
    kind: SourceKind | str,
    *,
    source_id: str | None = None,
    audit: "AuditLog | None" = None,
    actor: str = "",
) -> EvidenceHandle:
    """Open an evidence source read-only.

    When an audit log is supplied, an ``open`` event is recorded; the case
    workspace always supplies one.
    """
    kind = SourceKind(kind)
    p = Path(path)
    if not p.exists():
        raise NotFound(str(p))
    if not os.access(p, os.R_OK):
        raise NotReadable(str(p))

    byte_length: int | None = None
    entry_count: int | None = None
    if kind is SourceKind.DIRECTORY_TREE:
        if not p.is_dir():
            raise NotReadable(f"{p} is not a directory")
        entry_count = sum(1 for q in p.rglob("*") if q.is_file() and not q.is_symlink())
    elif kind is SourceKind.RAW_IMAGE:
        if not p.is_file():
            raise NotReadable(f"{p} is not a file")
        byte_length = p.stat().st_size
    else:
        if not p.is_file():
            raise NotReadable(f"{p} is not a file")
        with open(p, "r", encoding="utf-8") as fh:
            entry_count = sum(1 for line in fh if line.strip())

    handle = EvidenceHandle(
        source_id=source_id or p.name,
        source_kind=kind,
        path=p,
        byte_length=byte_length,
        entry_count=entry_count,
        opened_at=utc_now(),
    )
    if audit is not None:
        audit.record(actor, "open", {"source_id": handle.source_id, "kind": kind.value})
    return handle


# --- manifests ----------------------------------------------------------------


@dataclass(frozen=True)
class HashManifest:
    algorithm: str
    entries: tuple[tuple[str, str], ...]  # (path-or-range, hex digest), sorted
    computed_at: str

    def to_text(self) -> str:
        return "".join(f"{digest}\t{key}\n" for key, digest in self.entries)

    @classmethod
    def from_text(cls, text: str, algorithm: str = HASH_ALGORITHM) -> "HashManifest":
        entries = []
        for line in text.splitlines():
            if not line.strip():
                continue
            digest, _, key = line.partition("\t")
            entries.append((key, digest))
        entries.sort()
        return cls(algorithm=algorithm, entries=tuple(entries), computed_at=utc_now())


def _digest_file(path: Path) -> str:
    h = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for block in iter(lambda: fh.read(_READ_BLOCK), b""):
                h.update(block)
    except OSError as exc:
        raise ReadFailure(f"{path}: {exc}") from exc
    return h.hexdigest()


def compute_manifest(handle: EvidenceHandle, *, chunk_size: int = DEFAULT_CHUNK_SIZE) -> HashManifest:
    """Digest every file of a tree, or every fixed-size range of an image.

    Raw images additionally get a whole-image digest under the key
    ``whole``; range keys are zero-padded hex so lexicographic order equals
    byte order.
    """
    entries: list[tuple[str, str]] = []
    if handle.source_kind is SourceKind.DIRECTORY_TREE:
        for unit, _length in handle.units():
            entries.append((unit, _digest_file(handle._unit_path(unit))))
    elif handle.source_kind is SourceKind.RAW_IMAGE:
        whole = hashlib.sha256()
        length = handle.byte_length or 0
        try:
            with open(handle.path, "rb") as fh:
                start = 0
                while start < length:
                    end = min(start + chunk_size, length)
                    h = hashlib.sha256()
                    remaining = end - start
                    while remaining:
                        block = fh.read(min(_READ_BLOCK, remaining))
                        if not block:
                            raise ReadFailure(f"{handle.path}@{end - remaining}: short read")
                        h.update(block)
                        whole.update(block)
                        remaining -= len(block)
                    entries.append((f"range:{start:016x}-{end:016x}", h.hexdigest()))
                    start = end
        except OSError as exc:
            raise ReadFailure(f"{handle.path}: {exc}") from exc
        entries.append(("whole", whole.hexdigest()))
    else:
        entries.append(("records", _digest_file(handle.path)))
    entries.sort()
    return HashManifest(algorithm=HASH_ALGORITHM, entries=tuple(entries), computed_at=utc_now())


@dataclass(frozen=True)
class ManifestMismatch:
    key: str
    expected: str | None  # digest in the manifest; None when key is new
    actual: str | None    # recomputed digest; None when key vanished


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    mismatches: tuple[ManifestMismatch, ...]


def _manifest_chunk_size(manifest: HashManifest) -> int:
    # Recomputation must chunk the way the manifest did; the range keys
    # carry the original chunk size.
    for key, _digest in manifest.entries:
        if key.startswith("range:"):
            start_hex, _, end_hex = key[len("range:"):].partition("-")
            return int(end_hex, 16) - int(start_hex, 16)
    return DEFAULT_CHUNK_SIZE


def verify_manifest(handle: EvidenceHandle, manifest: HashManifest) -> VerificationResult:
    """Recompute digests and compare; ok iff every entry matches exactly."""
    if manifest.algorithm != HASH_ALGORITHM:
        raise AlgorithmUnsupported(manifest.algorithm)
    current = dict(compute_manifest(handle, chunk_size=_manifest_chunk_size(manifest)).entries)
    recorded = dict(manifest.entries)
    mismatches = []
    for key in sorted(set(recorded) | set(current)):
        expected = recorded.get(key)
        actual = current.get(key)
        if expected != actual:
            mismatches.append(ManifestMismatch(key=key, expected=expected, actual=actual))
    return VerificationResult(ok=not mismatches, mismatches=tuple(mismatches))


# --- audit log ------------------------------------------------------------------


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    actor: str
    action: str
    parameters: dict
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "actor": self.actor,
                "action": self.action,
                "parameters": self.parameters,
                "timestamp": self.timestamp,
            },
            sort_keys=True,
            ensure_ascii=False,
        )


class AuditLog:
    """Append-only, newline-delimited audit record for one case.

    Appends are serialized by a lock; sequence numbers continue across
    reopen, strictly increasing with no gaps.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._closed = False
        self._seq = 0
        if self.path.exists():
            for event in self.events():
                self._seq = event.seq
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def record(self, actor: str, action: str, parameters: dict | None = None) -> AuditEvent:
        with self._lock:
            if self._closed:
                raise LogClosed(str(self.path))
            event = AuditEvent(
                seq=self._seq + 1,
                actor=actor,
                action=action,
                parameters=dict(parameters or {}),
                timestamp=utc_now(),
            )
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(event.to_json() + "\n")
                fh.flush()
            self._seq = event.seq
            return event

    def events(self) -> list[AuditEvent]:
        out = []
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                raw = json.loads(line)
                out.append(
                    AuditEvent(
                        seq=raw["seq"],
                        actor=raw["actor"],
                        action=raw["action"],
                        parameters=raw["parameters"],
                        timestamp=raw["timestamp"],
                    )
                )
        return out

    def close(self) -> None:
        with self._lock:
            self._closed = True


def record_audit(log: AuditLog, actor: str, action: str, parameters: dict | None = None) -> AuditEvent:
    """Append one event; the returned event has seq = previous + 1."""
    return log.record(actor, action, parameters)
