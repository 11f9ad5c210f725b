"""Named regular-pattern scanning with leftmost-longest match selection.

Pattern sets are plain text, one ``name<TAB>pattern`` per line, so a
coordinator can add crime-type searches without touching code. Python's
regex engine is leftmost-first, so the longest match at a position is
found by anchored re-matching from a bounded cap downward; the cap bounds
work per hit and doubles as the streaming guarantee (max match length
stays under half the scan window).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby

from ..errors import MalformedPattern
from ..integrity import EvidenceHandle
from .artifacts import ArtifactKind, ArtifactHit, HitLocation
from .stream import DEFAULT_WINDOW, iter_windows

# Longest match considered at any position; must stay <= window/2.
DEFAULT_MAX_MATCH = 1024

# Pattern names that map to the email artifact kind; everything else is a
# generic identifier pattern.
_EMAIL_NAMES = {"email"}


@dataclass(frozen=True)
class NamedPattern:
    name: str
    pattern: str

    def kind(self) -> ArtifactKind:
        return ArtifactKind.EMAIL if self.name in _EMAIL_NAMES else ArtifactKind.ID_PATTERN


class PatternSet:
    def __init__(self, patterns: list[NamedPattern]):
        if not patterns:
            raise MalformedPattern("<empty>", "pattern set has no entries")
        self.patterns = list(patterns)
        self._compiled: dict[str, re.Pattern[bytes]] = {}
        for p in self.patterns:
            try:
                self._compiled[p.name] = re.compile(p.pattern.encode("latin-1"))
            except (re.error, UnicodeEncodeError) as exc:
                raise MalformedPattern(p.name, str(exc)) from exc

    @classmethod
    def from_text(cls, text: str) -> "PatternSet":
        patterns = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, pattern = line.partition("\t")
            if not sep or not pattern.strip():
                raise MalformedPattern(name or line, "expected name<TAB>pattern")
            patterns.append(NamedPattern(name=name.strip(), pattern=pattern.strip()))
        return cls(patterns)

    def subset(self, names: list[str]) -> "PatternSet":
        wanted = set(names)
        missing = wanted - {p.name for p in self.patterns}
        if missing:
            raise MalformedPattern(sorted(missing)[0], "not in pattern set")
        return PatternSet([p for p in self.patterns if p.name in wanted])

    def compiled(self, name: str) -> re.Pattern[bytes]:
        return self._compiled[name]


def _longest_match_end(rx: re.Pattern[bytes], buf: bytes, start: int, cap: int) -> int:
    """End of the longest match of rx anchored at ``start``.

    Walks candidate end positions downward from the cap; the first
    anchored full match is the longest one.
    """
    hi = min(len(buf), start + cap)
    greedy = rx.match(buf, start)
    lo = greedy.end() if greedy else start + 1
    for end in range(hi, lo, -1):
        if rx.fullmatch(buf, start, end):
            return end
    return lo


def scan_pattern(
    handle: EvidenceHandle,
    pattern_set: PatternSet,
    *,
    window: int = DEFAULT_WINDOW,
    max_match: int = DEFAULT_MAX_MATCH,
) -> list[ArtifactHit]:
    """Run every named pattern over the source.

    Matches per pattern are leftmost-longest and non-overlapping; hits
    carry the pattern name as scanner id and the byte offset. Selection is
    the same as a single pass over the whole unit: a resume position per
    pattern carries the non-overlap constraint across window boundaries.
    """
    if max_match > window // 2:
        raise MalformedPattern("<config>", "max_match must not exceed window/2")
    hits: list[ArtifactHit] = []
    for unit, windows in groupby(iter_windows(handle, window=window), key=lambda w: w.unit):
        resume = {p.name: 0 for p in pattern_set.patterns}
        for win in windows:
            base = win.start - win.guard
            for named in pattern_set.patterns:
                rx = pattern_set.compiled(named.name)
                pos = max(0, resume[named.name] - base)
                while pos < len(win.buf):
                    m = rx.search(win.buf, pos)
                    if m is None:
                        break
                    abs_start = base + m.start()
                    if abs_start >= win.emit_end:
                        break  # the next window owns this match
                    end = _longest_match_end(rx, win.buf, m.start(), max_match)
                    if end <= m.start():  # zero-width match; never a hit
                        pos = m.start() + 1
                        continue
                    hits.append(
                        ArtifactHit(
                            kind=named.kind(),
                            value=win.buf[m.start():end].decode("utf-8", "replace"),
                            location=HitLocation(unit, abs_start),
                            scanner_id=f"pattern:{named.name}",
                        )
                    )
                    resume[named.name] = base + end
                    pos = end
    hits.sort(key=ArtifactHit.sort_key)
    return hits
