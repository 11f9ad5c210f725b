"""Parent-unit coordination: file numbers, member registry, program metrics.

State is an append-only journal replayed at startup, so the coordinator
is self-contained (no database) and restart-safe. File-number issuance
serializes through one lock; reads work on plain snapshots.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .errors import (
    DuplicateReportForFileNumber,
    MalformedRow,
    NoData,
    NotCertified,
    UnknownFileNumber,
    UnknownMember,
)
from .integrity import utc_now

DEFAULT_QUALIFICATION_MINIMUM = 4
DEFAULT_EXHIBIT_REDUCTION = 0.75
# Reported parent-unit backlog snapshot: 30 of 58 queued files had already
# been assessed in the field.
DEFAULT_BACKLOG_SNAPSHOT = (58, 30)

DISTRICTS = ("HQ", "D1", "D2", "D3", "D4")
BUSINESS_LINES = ("DCFT", "DMFT")

_NUMBER_RE = re.compile(r"^DFT-(\d{4})-(\d{6})$")


class QualificationStatus(str, Enum):
    CURRENT = "current"
    LAPSED = "lapsed"


@dataclass(frozen=True)
class DftFileNumber:
    value: str  # "DFT-<year>-<zero-padded sequence>"
    member_id: str
    investigation_id: str
    issued_at: str

    @property
    def year(self) -> int:
        m = _NUMBER_RE.match(self.value)
        return int(m.group(1)) if m else 0


@dataclass
class MemberRecord:
    member_id: str
    name: str
    station: str = ""
    district: str = "HQ"
    business_lines: tuple[str, ...] = ("DCFT",)
    certified_on: str | None = None
    assessments_by_year: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class YearRow:
    label: str  # verbatim year field, e.g. "2015 (June)"
    year: int
    dft_files: int
    dcft_members: int
    dmft_members: int
    tcu_files: int

    def to_dict(self) -> dict:
        return {
            "year": self.label,
            "dft_files": self.dft_files,
            "dcft_members": self.dcft_members,
            "dmft_members": self.dmft_members,
            "tcu_files": self.tcu_files,
        }


@dataclass(frozen=True)
class BacklogSnapshot:
    total: int
    dft_assessed: int

    @property
    def dft_share(self) -> float:
        return self.dft_assessed / self.total if self.total else 0.0


@dataclass(frozen=True)
class MetricsSummary:
    rows: tuple[YearRow, ...]
    exhibit_reduction_ratio: float
    backlog_snapshot: BacklogSnapshot

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "exhibit_reduction_ratio": self.exhibit_reduction_ratio,
            "backlog_snapshot": {
                "total": self.backlog_snapshot.total,
                "dft_assessed": self.backlog_snapshot.dft_assessed,
                "dft_share": self.backlog_snapshot.dft_share,
            },
        }


def parse_year_label(label: str) -> int:
    m = re.match(r"\s*(\d{4})", label)
    if not m:
        raise ValueError(f"no year in {label!r}")
    return int(m.group(1))


class Coordinator:
    def __init__(self, journal_path: str | Path | None = None):
        self._lock = threading.RLock()
        self._members: dict[str, MemberRecord] = {}
        self._numbers: dict[str, DftFileNumber] = {}            # value -> number
        self._by_pair: dict[tuple[str, str], str] = {}          # (member, investigation) -> value
        self._year_seq: dict[int, int] = {}
        self._reports: dict[str, str] = {}                      # file number -> report ref
        self._historical_raw: dict[str, str] = {}               # table name -> verbatim text
        self._historical_rows: tuple[YearRow, ...] = ()
        self._exhibits_assessed = 0
        self._exhibits_forwarded = 0
        self._exhibit_reduction = DEFAULT_EXHIBIT_REDUCTION
        self._backlog = BacklogSnapshot(*DEFAULT_BACKLOG_SNAPSHOT)
        self._journal_path = Path(journal_path) if journal_path else None
        if self._journal_path and self._journal_path.exists():
            self._replay()

    # -- journal -------------------------------------------------------------

    def _append(self, entry: dict) -> None:
        if self._journal_path is None:
            return
        self._journal_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")
            fh.flush()

    def _replay(self) -> None:
        with open(self._journal_path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                kind = entry.pop("event")
                if kind == "member":
                    record = MemberRecord(
                        member_id=entry["member_id"],
                        name=entry["name"],
                        station=entry.get("station", ""),
                        district=entry.get("district", "HQ"),
                        business_lines=tuple(entry.get("business_lines", ())),
                        certified_on=entry.get("certified_on"),
                    )
                    self._members[record.member_id] = record
                elif kind == "file_number":
                    number = DftFileNumber(
                        value=entry["value"],
                        member_id=entry["member_id"],
                        investigation_id=entry["investigation_id"],
                        issued_at=entry["issued_at"],
                    )
                    self._numbers[number.value] = number
                    self._by_pair[(number.member_id, number.investigation_id)] = number.value
                    year = number.year
                    seq = int(number.value.rsplit("-", 1)[1])
                    self._year_seq[year] = max(self._year_seq.get(year, 0), seq)
                elif kind == "assessment":
                    self._apply_assessment(
                        entry["file_number"],
                        entry["report_ref"],
                        entry.get("exhibits_assessed"),
                        entry.get("exhibits_forwarded"),
                    )
                elif kind == "historical":
                    self._apply_historical(entry["table"], entry["text"])
                elif kind == "backlog_snapshot":
                    self._backlog = BacklogSnapshot(entry["total"], entry["dft_assessed"])
                elif kind == "config":
                    self._exhibit_reduction = entry["exhibit_reduction"]

    # -- members ---------------------------------------------------------------

    def register_member(
        self,
        member_id: str,
        name: str,
        *,
        station: str = "",
        district: str = "HQ",
        business_lines: tuple[str, ...] = ("DCFT",),
        certified_on: str | None = None,
    ) -> MemberRecord:
        if district not in DISTRICTS:
            raise ValueError(f"unknown district {district!r}")
        for line in business_lines:
            if line not in BUSINESS_LINES:
                raise ValueError(f"unknown business line {line!r}")
        with self._lock:
            record = MemberRecord(
                member_id=member_id,
                name=name,
                station=station,
                district=district,
                business_lines=tuple(business_lines),
                certified_on=certified_on,
            )
            self._members[member_id] = record
            self._append(
                {
                    "event": "member",
                    "member_id": member_id,
                    "name": name,
                    "station": station,
                    "district": district,
                    "business_lines": list(business_lines),
                    "certified_on": certified_on,
                }
            )
            return record

    def member(self, member_id: str) -> MemberRecord:
        try:
            return self._members[member_id]
        except KeyError:
            raise UnknownMember(member_id) from None

    def members(self) -> list[MemberRecord]:
        return list(self._members.values())

    # -- file numbers ------------------------------------------------------------

    def issue_file_number(
        self, member_id: str, investigation_id: str, *, year: int | None = None
    ) -> DftFileNumber:
        """Issue (or re-return) the member's number for an investigation.

        Idempotent per (member, investigation); distinct members on the
        same investigation get distinct numbers; the sequence is global
        and strictly increasing within a year.
        """
        member = self.member(member_id)
        if not member.certified_on:
            raise NotCertified(member_id)
        with self._lock:
            existing = self._by_pair.get((member_id, investigation_id))
            if existing:
                return self._numbers[existing]
            y = year or datetime.now(timezone.utc).year
            seq = self._year_seq.get(y, 0) + 1
            self._year_seq[y] = seq
            number = DftFileNumber(
                value=f"DFT-{y}-{seq:06d}",
                member_id=member_id,
                investigation_id=investigation_id,
                issued_at=utc_now(),
            )
            self._numbers[number.value] = number
            self._by_pair[(member_id, investigation_id)] = number.value
            self._append(
                {
                    "event": "file_number",
                    "value": number.value,
                    "member_id": member_id,
                    "investigation_id": investigation_id,
                    "issued_at": number.issued_at,
                }
            )
            return number

    def file_number(self, value: str) -> DftFileNumber:
        try:
            return self._numbers[value]
        except KeyError:
            raise UnknownFileNumber(value) from None

    # -- assessments ---------------------------------------------------------------

    def _apply_assessment(
        self,
        file_number: str,
        report_ref: str,
        exhibits_assessed: int | None,
        exhibits_forwarded: int | None,
    ) -> MemberRecord:
        number = self.file_number(file_number)
        previous = self._reports.get(file_number)
        if previous is not None:
            if previous != report_ref:
                raise DuplicateReportForFileNumber(
                    f"{file_number} already has report {previous}"
                )
            return self.member(number.member_id)  # same report again: no recount
        self._reports[file_number] = report_ref
        member = self.member(number.member_id)
        year = number.year
        member.assessments_by_year[year] = member.assessments_by_year.get(year, 0) + 1
        if exhibits_assessed:
            self._exhibits_assessed += int(exhibits_assessed)
            self._exhibits_forwarded += int(exhibits_forwarded or 0)
        return member

    def record_assessment(
        self,
        file_number: str,
        report_ref: str,
        *,
        exhibits_assessed: int | None = None,
        exhibits_forwarded: int | None = None,
    ) -> MemberRecord:
        """Count one conducted file per number; further exhibits don't recount."""
        with self._lock:
            member = self._apply_assessment(
                file_number, report_ref, exhibits_assessed, exhibits_forwarded
            )
            self._append(
                {
                    "event": "assessment",
                    "file_number": file_number,
                    "report_ref": report_ref,
                    "exhibits_assessed": exhibits_assessed,
                    "exhibits_forwarded": exhibits_forwarded,
                }
            )
            return member

    def qualification_status(
        self, member_id: str, year: int, minimum: int = DEFAULT_QUALIFICATION_MINIMUM
    ) -> QualificationStatus:
        member = self.member(member_id)
        count = member.assessments_by_year.get(year, 0)
        return QualificationStatus.CURRENT if count >= minimum else QualificationStatus.LAPSED

    # -- historical tables ------------------------------------------------------------

    def _apply_historical(self, table: str, text: str) -> None:
        if table == "dft_files":
            self._historical_rows = _parse_dft_files(text)
        elif table == "member_locations":
            _parse_member_locations(text)  # validation only; raw text is the record
        else:
            raise MalformedRow(0, f"unknown table {table!r}")
        self._historical_raw[table] = text

    def ingest_historical(self, text: str, *, table: str = "dft_files") -> MetricsSummary:
        """Store a historical table verbatim; parsing validates every row."""
        with self._lock:
            self._apply_historical(table, text)
            self._append({"event": "historical", "table": table, "text": text})
        return self._summary(self._historical_rows)

    def export_historical(self, table: str = "dft_files") -> str:
        try:
            return self._historical_raw[table]
        except KeyError:
            raise NoData(f"table {table!r} never ingested") from None

    def set_backlog_snapshot(self, total: int, dft_assessed: int) -> None:
        with self._lock:
            self._backlog = BacklogSnapshot(total, dft_assessed)
            self._append({"event": "backlog_snapshot", "total": total, "dft_assessed": dft_assessed})

    def set_exhibit_reduction(self, ratio: float) -> None:
        with self._lock:
            self._exhibit_reduction = ratio
            self._append({"event": "config", "exhibit_reduction": ratio})

    def program_metrics(self, period: tuple[int, int] | None = None) -> MetricsSummary:
        """Summarize the program: table rows, exhibit reduction, backlog share.

        The reduction ratio comes from live exhibit counts when any were
        recorded, otherwise from configuration.
        """
        rows = self._historical_rows
        if period:
            lo, hi = period
            rows = tuple(r for r in rows if lo <= r.year <= hi)
        if not self._historical_rows and not self._reports and not self._historical_raw:
            raise NoData("no historical rows ingested and no assessments recorded")
        return self._summary(rows)

    def _summary(self, rows: tuple[YearRow, ...]) -> MetricsSummary:
        if self._exhibits_assessed:
            reduction = 1.0 - (self._exhibits_forwarded / self._exhibits_assessed)
        else:
            reduction = self._exhibit_reduction
        return MetricsSummary(
            rows=rows,
            exhibit_reduction_ratio=reduction,
            backlog_snapshot=self._backlog,
        )


def _parse_dft_files(text: str) -> tuple[YearRow, ...]:
    lines = text.splitlines()
    if not lines:
        raise MalformedRow(0, "empty table")
    rows = []
    seen_years = set()
    for lineno, line in enumerate(lines[1:], start=2):  # line 1 is the header
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise MalformedRow(lineno, f"expected 5 fields, got {len(parts)}")
        label = parts[0]
        try:
            year = parse_year_label(label)
            files, dcft, dmft, tcu = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise MalformedRow(lineno, str(exc)) from None
        if year in seen_years:
            raise MalformedRow(lineno, f"duplicate year {year}")
        seen_years.add(year)
        rows.append(
            YearRow(
                label=label, year=year, dft_files=files,
                dcft_members=dcft, dmft_members=dmft, tcu_files=tcu,
            )
        )
    return tuple(rows)


def _parse_member_locations(text: str) -> list[tuple[str, list[int]]]:
    lines = text.splitlines()
    if not lines:
        raise MalformedRow(0, "empty table")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise MalformedRow(lineno, f"expected 7 fields, got {len(parts)}")
        try:
            counts = [int(p) for p in parts[1:]]
        except ValueError as exc:
            raise MalformedRow(lineno, str(exc)) from None
        # No district-vs-total cross check: the table is stored verbatim,
        # and published figures do not always reconcile.
        out.append((parts[0], counts))
    return out
