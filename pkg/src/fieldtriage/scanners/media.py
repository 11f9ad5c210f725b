"""Media file inventory over directory trees.

Detection is by leading-byte signature (JPEG, PNG, MP4 ftyp box) with an
extension cross-check; a file claiming a media extension while carrying a
recognizable non-media signature gets a mismatch note on the hit rather
than being dropped, so the operator still sees it.
"""

from __future__ import annotations

from ..integrity import EvidenceHandle, SourceKind
from ..errors import ReadFailure
from .artifacts import ArtifactKind, ArtifactHit, HitLocation

SCANNER_ID = "media"
_HEAD = 16

# (signature name, matcher over the leading bytes)
_MEDIA_SIGNATURES = (
    ("jpeg", lambda head: head.startswith(b"\xff\xd8\xff")),
    ("png", lambda head: head.startswith(b"\x89PNG")),
    ("mp4", lambda head: len(head) >= 12 and head[4:8] == b"ftyp"),
)

_OTHER_SIGNATURES = (
    ("zip", lambda head: head.startswith(b"PK\x03\x04")),
    ("pdf", lambda head: head.startswith(b"%PDF")),
    ("gzip", lambda head: head.startswith(b"\x1f\x8b")),
    ("elf", lambda head: head.startswith(b"\x7fELF")),
    ("pe-executable", lambda head: head.startswith(b"MZ")),
)

_MEDIA_EXTENSIONS = {
    "jpg": "jpeg", "jpeg": "jpeg", "jfif": "jpeg",
    "png": "png",
    "mp4": "mp4", "m4v": "mp4", "m4a": "mp4", "mov": "mp4",
    "gif": None, "bmp": None, "tif": None, "tiff": None,
    "avi": None, "mkv": None, "mp3": None, "wav": None, "webm": None,
}


def _signature_of(head: bytes) -> str | None:
    for name, matches in _MEDIA_SIGNATURES:
        if matches(head):
            return name
    for name, matches in _OTHER_SIGNATURES:
        if matches(head):
            return name
    return None


def inventory_media_files(handle: EvidenceHandle) -> list[ArtifactHit]:
    """One hit per tree file that looks like media by signature or extension."""
    if handle.source_kind is not SourceKind.DIRECTORY_TREE:
        raise ReadFailure("media inventory requires a directory_tree source")
    media_sig_names = {name for name, _ in _MEDIA_SIGNATURES}
    hits = []
    for unit, _length in handle.units():
        head = handle.read(unit, 0, _HEAD)
        signature = _signature_of(head)
        filename = unit.rsplit("/", 1)[-1]
        ext = filename.rsplit(".", 1)[-1].lower() if "." in filename else ""
        ext_is_media = ext in _MEDIA_EXTENSIONS

        note = None
        if signature in media_sig_names:
            agrees = ext_is_media and _MEDIA_EXTENSIONS[ext] == signature
            if ext and not agrees:
                note = f"signature {signature} disagrees with extension .{ext}"
        elif ext_is_media:
            detected = signature or "unrecognized content"
            note = f"extension .{ext} claims media but signature is {detected}"
        else:
            continue
        hits.append(
            ArtifactHit(
                kind=ArtifactKind.MEDIA_FILE,
                value=unit,
                location=HitLocation(unit, 0),
                scanner_id=SCANNER_ID,
                note=note,
            )
        )
    hits.sort(key=ArtifactHit.sort_key)
    return hits
