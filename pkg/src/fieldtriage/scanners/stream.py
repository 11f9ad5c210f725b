"""Windowed streaming over evidence units.

Multi-GB images are scanned in overlapping windows so memory stays
constant. A window of size W advances by a stride of W/2; a match may be
at most W/2 long, and each match is attributed to exactly one window (the
one whose emit zone contains its start), so nothing is missed or doubled.

A two-byte left guard is read before each window so a scanner can tell
whether a candidate starting on the window edge is genuinely maximal
(the guard covers a digit-separator-digit join).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..integrity import EvidenceHandle

DEFAULT_WINDOW = 1024 * 1024
LEFT_GUARD = 2


@dataclass(frozen=True)
class Window:
    unit: str        # unit key within the source ("" for raw images)
    start: int       # absolute offset of buf[guard] within the unit
    guard: int       # bytes of left context present at the head of buf
    buf: bytes
    emit_end: int    # absolute end (exclusive) of this window's emit zone
    final: bool      # no window follows for this unit


def iter_windows(
    handle: EvidenceHandle, *, window: int = DEFAULT_WINDOW
) -> Iterator[Window]:
    """Yield overlapping windows for every byte unit of the source."""
    stride = window // 2
    for unit, length in handle.units():
        if length == 0:
            yield Window(unit=unit, start=0, guard=0, buf=b"", emit_end=0, final=True)
            continue
        start = 0
        while start < length:
            guard = LEFT_GUARD if start else 0
            buf = handle.read(unit, start - guard, window + guard)
            final = start + stride >= length
            emit_end = length if final else start + stride
            yield Window(
                unit=unit, start=start, guard=guard, buf=buf,
                emit_end=emit_end, final=final,
            )
            if final:
                break
            start += stride
