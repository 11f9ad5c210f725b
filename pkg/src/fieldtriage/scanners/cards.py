"""Payment card extraction: Luhn validation, PAN scanning, bank-code grouping.

A candidate is a maximal run of 13-19 decimal digits, allowing a single
space or hyphen between digit groups; separators are stripped before the
Luhn check. A run of 20+ digits is not a candidate (it is its own maximal
run), which keeps random digit noise out of the results.
"""

from __future__ import annotations

import re
from typing import Iterable

from ..errors import NonDigitInput
from ..integrity import EvidenceHandle
from .artifacts import ArtifactKind, CardHit, HitLocation
from .stream import iter_windows

SCANNER_ID = "cards"
PAN_MIN_DIGITS = 13
PAN_MAX_DIGITS = 19
BANK_CODE_DIGITS = 6

# Maximal digit run with optional single space/hyphen joins, e.g.
# "4111111111111111" or "4111-1111-1111-1111". Always ends on a digit.
_RUN_RE = re.compile(rb"\d(?:[ -]?\d)*")

# Checking a digit at an even position from the right is equivalent to
# translating it through the doubled-and-summed table.
_DOUBLED = str.maketrans("0123456789", "0246813579")


def luhn_check(digits: str) -> bool:
    """True iff the digit string's Luhn checksum is 0 (mod 10).

    Accepts 1-19 decimal digits; anything else raises NonDigitInput.
    """
    if not digits or not (digits.isascii() and digits.isdigit()):
        raise NonDigitInput(repr(digits))
    if len(digits) > PAN_MAX_DIGITS:
        raise NonDigitInput(f"{len(digits)} digits exceeds {PAN_MAX_DIGITS}")
    odd = digits[-1::-2]
    even = digits[-2::-2].translate(_DOUBLED)
    total = sum(map(ord, odd)) + sum(map(ord, even)) - 48 * len(digits)
    return total % 10 == 0


def extract_card_numbers(handle: EvidenceHandle) -> list[CardHit]:
    """Scan an evidence source for Luhn-valid PANs.

    Duplicate PANs collapse into one hit carrying every location; output
    is ordered by first location.
    """
    sightings: dict[str, list[HitLocation]] = {}
    for win in iter_windows(handle):
        for match in _RUN_RE.finditer(win.buf):
            abs_start = win.start - win.guard + match.start()
            if abs_start < win.start or abs_start >= win.emit_end:
                continue
            if match.end() == len(win.buf) and not win.final:
                continue  # run continues past the window; too long for a PAN
            pan = match.group().translate(None, b" -").decode("ascii")
            if not (PAN_MIN_DIGITS <= len(pan) <= PAN_MAX_DIGITS):
                continue
            if not luhn_check(pan):
                continue
            sightings.setdefault(pan, []).append(HitLocation(win.unit, abs_start))

    hits = []
    for pan, locations in sightings.items():
        locations.sort()
        hits.append(
            CardHit(
                kind=ArtifactKind.CARD_NUMBER,
                value=pan,
                location=locations[0],
                scanner_id=SCANNER_ID,
                pan=pan,
                bank_code=pan[:BANK_CODE_DIGITS],
                locations=tuple(locations),
            )
        )
    hits.sort(key=lambda h: h.location)
    return hits


def sort_by_bank_code(hits: Iterable[CardHit]) -> dict[str, list[CardHit]]:
    """Group hits by issuing-institution prefix, keys ascending.

    Within a group hits keep location order; the hit multiset is preserved.
    """
    groups: dict[str, list[CardHit]] = {}
    for hit in hits:
        groups.setdefault(hit.bank_code, []).append(hit)
    ordered = {}
    for code in sorted(groups):
        ordered[code] = sorted(groups[code], key=lambda h: h.location)
    return ordered
