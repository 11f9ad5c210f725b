"""Independent reference implementations used as test oracles.

Everything here is deliberately written by a different method than the
code under test: explicit loops instead of translation tables, character
walks instead of regexes, an earliest-free-server recurrence instead of
an event heap. None of it imports from the package's scanner internals.
"""

from __future__ import annotations


def luhn_oracle(digits: str) -> bool:
    """Textbook Luhn: double every second digit from the right, subtract 9."""
    total = 0
    for position, ch in enumerate(reversed(digits)):
        value = int(ch)
        if position % 2 == 1:
            value *= 2
            if value > 9:
                value -= 9
        total += value
    return total % 10 == 0


def luhn_complete(prefix_digits: str) -> str:
    """Append the check digit that makes the prefix Luhn-valid."""
    for check in "0123456789":
        if luhn_oracle(prefix_digits + check):
            return prefix_digits + check
    raise AssertionError("unreachable")


def maximal_digit_runs(buf: bytes) -> list[tuple[int, str]]:
    """Character-walk enumeration of maximal digit runs.

    A run is digits optionally joined by single space/hyphen separators;
    returns (start offset, digits with separators stripped) per run.
    """
    digits = set(b"0123456789")
    seps = set(b" -")
    runs = []
    i = 0
    n = len(buf)
    while i < n:
        if buf[i] not in digits:
            i += 1
            continue
        start = i
        collected = [chr(buf[i])]
        j = i
        while True:
            if j + 1 < n and buf[j + 1] in digits:
                j += 1
                collected.append(chr(buf[j]))
            elif j + 2 < n and buf[j + 1] in seps and buf[j + 2] in digits:
                j += 2
                collected.append(chr(buf[j]))
            else:
                break
        runs.append((start, "".join(collected)))
        i = j + 1
    return runs


def pan_oracle(buf: bytes) -> dict[str, list[int]]:
    """Expected PAN -> offsets mapping for a buffer, via the run walk."""
    expected: dict[str, list[int]] = {}
    for offset, digits in maximal_digit_runs(buf):
        if 13 <= len(digits) <= 19 and luhn_oracle(digits):
            expected.setdefault(digits, []).append(offset)
    return expected


def leftmost_longest_oracle(rx, buf: bytes) -> list[tuple[int, int]]:
    """Non-overlapping leftmost-longest spans by all-substring enumeration."""
    n = len(buf)
    spans = []
    pos = 0
    while pos < n:
        found = None
        for start in range(pos, n):
            best_end = None
            for end in range(n, start, -1):
                if rx.fullmatch(buf, start, end):
                    best_end = end
                    break
            if best_end is not None:
                found = (start, best_end)
                break
        if found is None:
            break
        spans.append(found)
        pos = found[1]
    return spans


def fifo_multiserver_oracle(
    arrivals: list[float], services: list[float], servers: int, horizon: float
) -> dict:
    """Earliest-free-server recurrence for a FIFO queue.

    Independent of the event-driven simulator: start time is the max of
    the arrival and the earliest server-free time, taken in arrival order.
    """
    free = [0.0] * servers
    waits = []
    completions = 0
    for arrival, service in zip(arrivals, services):
        free.sort()
        start = max(arrival, free[0])
        finish = start + service
        free[0] = finish
        if start <= horizon:
            waits.append(start - arrival)
        else:
            waits.append(horizon - arrival)  # censored at the horizon
        if finish <= horizon:
            completions += 1
    return {
        "waits": waits,
        "completions": completions,
        "backlog": len(arrivals) - completions,
    }


def threshold_oracle(
    hit_kinds: list[str],
    targets: set[str],
    encryption_summary: str,
    score: float,
    cutoff: float,
) -> str:
    """Brute-force restatement of the threshold postcondition."""
    if any(kind in targets for kind in hit_kinds):
        return "meets"
    if encryption_summary != "none":
        return "forward_despite_no_findings"
    if score >= cutoff:
        return "forward_despite_no_findings"
    return "does_not_meet"
