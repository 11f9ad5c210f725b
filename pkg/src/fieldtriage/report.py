"""The Observation Report: searches run, artifacts observed, nothing more.

The schema is observation-only by construction. There is no field where a
conclusion, an attribution, or a how-it-got-there narrative can live;
notes are preserved verbatim and policing their content is the
coordinator's review duty, not the serializer's.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .casefile import CaseRecord
from .errors import InvalidReport, MissingManifest, UnknownFlagReference
from .integrity import utc_now
from .scanners import ArtifactHit, ArtifactKind, CardHit, HitLocation
from .scanners.encryption import EncryptionFindings, FdeSignature
from .triage import (
    ChecklistResult,
    ChecklistRow,
    ChecklistStatus,
    Decision,
    ThresholdDecision,
)

SCHEMA_VERSION = 1

_TOP_KEYS = {
    "schema_version", "dft_file_number", "case_id", "member_id",
    "items", "notes", "threshold_decisions", "manifests", "created_at",
}
_ITEM_KEYS = {"item_id", "searches_run", "hits", "encryption", "checklist"}


def hit_reference(item_id: str, hit: ArtifactHit) -> str:
    """Stable identifier for one observed artifact within a case."""
    return f"{item_id}|{hit.scanner_id}|{hit.location.path}|{hit.location.offset}"


def config_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class SearchRun:
    scanner_id: str
    config_digest: str


@dataclass
class ItemAssessment:
    """Everything one item's assessment produced, as reporting input."""

    item_id: str
    searches_run: list[SearchRun]
    hits: list[ArtifactHit] = field(default_factory=list)
    findings: EncryptionFindings | None = None
    checklist: ChecklistResult | None = None
    manifest_ref: str | None = None


# --- serialization helpers shared with the workspace and service -------------


def hit_to_dict(item_id: str, hit: ArtifactHit) -> dict:
    out = {
        "hit_id": hit_reference(item_id, hit),
        "kind": hit.kind.value,
        "value": hit.value,
        "location": {"path": hit.location.path, "offset": hit.location.offset},
        "scanner_id": hit.scanner_id,
        "flagged": hit.flagged,
    }
    if hit.note:
        out["note"] = hit.note
    if isinstance(hit, CardHit):
        out["bank_code"] = hit.bank_code
        out["locations"] = [
            {"path": loc.path, "offset": loc.offset} for loc in hit.locations
        ]
    return out


def hit_from_dict(raw: dict) -> ArtifactHit:
    location = HitLocation(raw["location"]["path"], raw["location"]["offset"])
    common = dict(
        kind=ArtifactKind(raw["kind"]),
        value=raw["value"],
        location=location,
        scanner_id=raw["scanner_id"],
        flagged=raw.get("flagged", False),
        note=raw.get("note"),
    )
    if "bank_code" in raw:
        return CardHit(
            **common,
            pan=raw["value"],
            bank_code=raw["bank_code"],
            locations=tuple(
                HitLocation(loc["path"], loc["offset"]) for loc in raw.get("locations", [])
            ),
        )
    return ArtifactHit(**common)


def findings_to_dict(findings: EncryptionFindings) -> dict:
    return {
        "summary": findings.summary.value,
        "fde_signatures": [
            {"name": s.name, "location": {"path": s.location.path, "offset": s.location.offset}}
            for s in findings.fde_signatures
        ],
        "suspect_programs": list(findings.suspect_programs),
    }


def findings_from_dict(raw: dict) -> EncryptionFindings:
    return EncryptionFindings(
        fde_signatures=[
            FdeSignature(
                name=s["name"],
                location=HitLocation(s["location"]["path"], s["location"]["offset"]),
            )
            for s in raw.get("fde_signatures", [])
        ],
        suspect_programs=list(raw.get("suspect_programs", [])),
    )


def checklist_to_list(checklist: ChecklistResult) -> list[dict]:
    return [
        {"name": r.name, "status": r.status.value, "detail": r.detail}
        for r in checklist.rows
    ]


def checklist_from_list(raw: list[dict]) -> ChecklistResult:
    return ChecklistResult(
        rows=tuple(
            ChecklistRow(name=r["name"], status=ChecklistStatus(r["status"]), detail=r.get("detail", ""))
            for r in raw
        )
    )


def decision_to_dict(item_id: str, decision: ThresholdDecision) -> dict:
    return {
        "item_id": item_id,
        "decision": decision.decision.value,
        "basis": list(decision.basis),
        "decided_by": decision.decided_by,
        "decided_at": decision.decided_at,
    }


def decision_from_dict(raw: dict) -> ThresholdDecision:
    return ThresholdDecision(
        decision=Decision(raw["decision"]),
        basis=tuple(raw.get("basis", [])),
        decided_by=raw.get("decided_by", ""),
        decided_at=raw.get("decided_at", ""),
    )


def assessment_to_dict(assessment: ItemAssessment) -> dict:
    out: dict = {
        "item_id": assessment.item_id,
        "searches_run": [
            {"scanner_id": run.scanner_id, "config_digest": run.config_digest}
            for run in assessment.searches_run
        ],
        "hits": [hit_to_dict(assessment.item_id, h) for h in sorted(assessment.hits, key=ArtifactHit.sort_key)],
        "manifest_ref": assessment.manifest_ref,
    }
    if assessment.findings is not None:
        out["encryption"] = findings_to_dict(assessment.findings)
    if assessment.checklist is not None:
        out["checklist"] = checklist_to_list(assessment.checklist)
    return out


def assessment_from_dict(raw: dict) -> ItemAssessment:
    return ItemAssessment(
        item_id=raw["item_id"],
        searches_run=[
            SearchRun(scanner_id=r["scanner_id"], config_digest=r["config_digest"])
            for r in raw.get("searches_run", [])
        ],
        hits=[hit_from_dict(h) for h in raw.get("hits", [])],
        findings=findings_from_dict(raw["encryption"]) if "encryption" in raw else None,
        checklist=checklist_from_list(raw["checklist"]) if "checklist" in raw else None,
        manifest_ref=raw.get("manifest_ref"),
    )


# --- the report ----------------------------------------------------------------


@dataclass
class ObservationReport:
    schema_version: int
    dft_file_number: str
    case_id: str
    member_id: str
    items: list[dict]
    notes: str
    threshold_decisions: list[dict]
    manifests: dict[str, str]
    created_at: str

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "dft_file_number": self.dft_file_number,
            "case_id": self.case_id,
            "member_id": self.member_id,
            "items": self.items,
            "notes": self.notes,
            "threshold_decisions": self.threshold_decisions,
            "manifests": self.manifests,
            "created_at": self.created_at,
        }

    def core_dict(self) -> dict:
        """The report minus timestamps, for determinism comparisons."""
        raw = json.loads(json.dumps(self.to_dict()))
        raw.pop("created_at")
        raw["threshold_decisions"] = [
            {k: v for k, v in d.items() if k != "decided_at"}
            for d in raw["threshold_decisions"]
        ]
        return raw

    def core_bytes(self) -> bytes:
        return _canonical(self.core_dict())


def _canonical(obj: dict) -> bytes:
    return (json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def build_report(
    case: CaseRecord,
    assessments: list[ItemAssessment],
    flags: list[str] | None = None,
    notes: str = "",
    decisions: dict[str, ThresholdDecision] | None = None,
) -> ObservationReport:
    """Assemble the report from assessment outputs.

    ``flags`` are hit references to mark salient. The report core is a
    pure function of the inputs; hits are ordered by (item, scanner,
    location).
    """
    flags = list(flags or [])
    decisions = decisions or {}

    known_refs = set()
    sections = []
    manifests = {}
    for assessment in sorted(assessments, key=lambda a: a.item_id):
        if assessment.manifest_ref is None:
            raise MissingManifest(assessment.item_id)
        manifests[assessment.item_id] = assessment.manifest_ref
        section = assessment_to_dict(assessment)
        section.pop("manifest_ref")
        for hit in section["hits"]:
            known_refs.add(hit["hit_id"])
        sections.append(section)

    unknown = [ref for ref in flags if ref not in known_refs]
    if unknown:
        raise UnknownFlagReference(", ".join(unknown))
    flagged = set(flags)
    for section in sections:
        for hit in section["hits"]:
            if hit["hit_id"] in flagged:
                hit["flagged"] = True

    return ObservationReport(
        schema_version=SCHEMA_VERSION,
        dft_file_number=case.dft_file_number,
        case_id=case.case_id,
        member_id=case.member_id,
        items=sections,
        notes=notes,
        threshold_decisions=[
            decision_to_dict(item_id, d) for item_id, d in sorted(decisions.items())
        ],
        manifests=manifests,
        created_at=utc_now(),
    )


def validate_report(report: ObservationReport) -> list[str]:
    """Structural validation; returns one message per violation."""
    errors = []
    if report.schema_version != SCHEMA_VERSION:
        errors.append(f"unsupported schema_version {report.schema_version}")
    seen_flagged: dict[str, int] = {}
    for section in report.items:
        item_id = section.get("item_id", "<missing>")
        if not section.get("searches_run"):
            errors.append(f"item {item_id}: no searches_run listed")
        for hit in section.get("hits", []):
            ref = hit.get("hit_id", "")
            if not ref.startswith(f"{item_id}|"):
                errors.append(f"hit {ref!r} does not belong to item {item_id}")
            if hit.get("flagged"):
                seen_flagged[ref] = seen_flagged.get(ref, 0) + 1
    for ref, count in seen_flagged.items():
        if count > 1:
            errors.append(f"flagged hit {ref!r} appears in {count} sections")
    item_ids = {s.get("item_id") for s in report.items}
    for decision in report.threshold_decisions:
        if decision.get("item_id") not in item_ids:
            errors.append(f"threshold decision for unknown item {decision.get('item_id')!r}")
        if decision.get("decision") == Decision.MEETS.value and not any(
            b.startswith("hit:") for b in decision.get("basis", [])
        ):
            errors.append(f"meets decision for {decision.get('item_id')!r} lacks a hit basis")
    for item_id in report.manifests:
        if item_id not in item_ids:
            errors.append(f"manifest reference for unknown item {item_id!r}")
    return errors


def render_report(report: ObservationReport, format: str = "structured") -> bytes:
    """Serialize: canonical machine form, or a sectioned readable document."""
    errors = validate_report(report)
    if errors:
        raise InvalidReport(errors)
    if format == "structured":
        return _canonical(report.to_dict())
    if format != "readable":
        raise InvalidReport([f"unknown format {format!r}"])

    lines = [
        f"OBSERVATION REPORT {report.dft_file_number}".rstrip(),
        f"case: {report.case_id}",
        f"member: {report.member_id}",
        f"created: {report.created_at}",
        "",
    ]
    for section in report.items:
        lines.append(f"== item {section['item_id']} ==")
        lines.append("searches run:")
        for run in section["searches_run"]:
            lines.append(f"  - {run['scanner_id']} (config {run['config_digest']})")
        lines.append("observed artifacts:")
        if not section["hits"]:
            lines.append("  (none)")
        for hit in section["hits"]:
            marker = "*" if hit["flagged"] else " "
            loc = hit["location"]
            where = f"{loc['path']}@{loc['offset']}" if loc["path"] else f"@{loc['offset']}"
            note = f"  [{hit['note']}]" if hit.get("note") else ""
            lines.append(f"  {marker} {hit['kind']}: {hit['value']} ({where}, {hit['scanner_id']}){note}")
        if "encryption" in section:
            enc = section["encryption"]
            lines.append(
                f"encryption: {enc['summary']} "
                f"({len(enc['fde_signatures'])} signature(s), "
                f"{len(enc['suspect_programs'])} program(s))"
            )
        if "checklist" in section:
            lines.append("absence-of-evidence checklist:")
            for row in section["checklist"]:
                lines.append(f"  - {row['name']}: {row['status']} ({row['detail']})")
        lines.append("")
    if report.notes:
        lines.append("== notes ==")
        lines.append(report.notes)
        lines.append("")
    lines.append("== threshold decisions ==")
    if not report.threshold_decisions:
        lines.append("  (none)")
    for decision in report.threshold_decisions:
        lines.append(
            f"  - {decision['item_id']}: {decision['decision']} "
            f"(basis: {', '.join(decision['basis']) or 'none'}; by {decision['decided_by']})"
        )
    lines.append("")
    lines.append("manifests:")
    for item_id, ref in sorted(report.manifests.items()):
        lines.append(f"  - {item_id}: {ref}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_report(data: bytes) -> ObservationReport:
    """Parse the structured rendering; rejects any key outside the schema."""
    raw = json.loads(data.decode("utf-8"))
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise InvalidReport([f"unknown report field {k!r}" for k in sorted(unknown)])
    for section in raw.get("items", []):
        bad = set(section) - _ITEM_KEYS
        if bad:
            raise InvalidReport(
                [f"unknown item field {k!r} in {section.get('item_id')}" for k in sorted(bad)]
            )
    return ObservationReport(
        schema_version=raw["schema_version"],
        dft_file_number=raw["dft_file_number"],
        case_id=raw["case_id"],
        member_id=raw["member_id"],
        items=raw["items"],
        notes=raw["notes"],
        threshold_decisions=raw["threshold_decisions"],
        manifests=raw["manifests"],
        created_at=raw["created_at"],
    )
