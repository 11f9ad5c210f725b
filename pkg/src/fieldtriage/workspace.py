"""Case workspace: one directory per DFT file number.

The workspace holds everything an assessment produces (manifests, hits,
findings, ranking, decisions, the report) plus the audit log. Every
pipeline operation appends exactly one audit event, and every output file
is written canonically so a rerun over unchanged evidence reproduces the
bytes. A lock marker rejects concurrent writers.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from . import report as reporting
from .casefile import CaseRecord, load_case_file, save_case_file
from .errors import MissingManifest, NotFound, WorkspaceLocked
from .integrity import (
    AuditLog,
    EvidenceHandle,
    HashManifest,
    SourceKind,
    VerificationResult,
    compute_manifest,
    open_evidence,
    verify_manifest,
)
from .profiles import (
    SearchProfile,
    load_default_patterns_text,
    load_default_program_names_text,
    load_profile,
)
from .scanners import (
    ArtifactHit,
    PatternSet,
    detect_encryption_indicators,
    extract_attached_devices,
    extract_card_numbers,
    inventory_media_files,
    load_program_names,
    merge_hits,
    scan_pattern,
)
from .scanners.artifacts import ArtifactKind, HitLocation
from .triage import (
    EvidenceItem,
    ThresholdDecision,
    TriageWeights,
    absence_checklist,
    evaluate_threshold,
    propagate_attachment_priority,
    rank_evidence,
)

LOCK_NAME = "workspace.lock"

# Which source kinds a scanner can run against. A listed scanner that does
# not apply to an item's source still counts as run (with zero results),
# so profile execution stays uniform across evidence kinds.
_SCANNER_SOURCES = {
    "cards": {SourceKind.RAW_IMAGE, SourceKind.DIRECTORY_TREE},
    "patterns": {SourceKind.RAW_IMAGE, SourceKind.DIRECTORY_TREE},
    "media": {SourceKind.DIRECTORY_TREE},
    "encryption": {SourceKind.RAW_IMAGE, SourceKind.DIRECTORY_TREE},
    "devices": {SourceKind.DIRECTORY_TREE, SourceKind.ARTIFACT_RECORDS},
}


def _write_canonical_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


class WorkspaceLock:
    def __init__(self, root: Path):
        self.path = root / LOCK_NAME
        self._fd: int | None = None

    def acquire(self) -> None:
        try:
            self._fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            os.write(self._fd, f"{os.getpid()}\n".encode())
        except FileExistsError:
            raise WorkspaceLocked(str(self.path)) from None

    def release(self) -> None:
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None
        if self.path.exists():
            self.path.unlink()

    def __enter__(self) -> "WorkspaceLock":
        self.acquire()
        return self

    def __exit__(self, *exc) -> None:
        self.release()


class CaseWorkspace:
    """Filesystem-backed state for one case assessment."""

    def __init__(self, root: str | Path, case: CaseRecord):
        self.root = Path(root)
        self.case = case
        self.root.mkdir(parents=True, exist_ok=True)
        self.audit = AuditLog(self.root / "audit.log")
        self._handles: dict[str, EvidenceHandle] = {}
        # workspace-local pattern/program files override the shipped defaults
        patterns_file = self.root / "patterns.txt"
        programs_file = self.root / "encryption_programs.txt"
        self._patterns = PatternSet.from_text(
            patterns_file.read_text(encoding="utf-8")
            if patterns_file.exists()
            else load_default_patterns_text()
        )
        self._programs = load_program_names(
            programs_file.read_text(encoding="utf-8")
            if programs_file.exists()
            else load_default_program_names_text()
        )

    # -- construction ---------------------------------------------------------

    @classmethod
    def create(cls, root: str | Path, case: CaseRecord) -> "CaseWorkspace":
        ws = cls(root, case)
        save_case_file(case, ws.root / "case.json")
        return ws

    @classmethod
    def load(cls, root: str | Path) -> "CaseWorkspace":
        root = Path(root)
        case_path = root / "case.json"
        if not case_path.exists():
            raise NotFound(f"no case.json under {root}")
        return cls(root, load_case_file(case_path))

    def lock(self) -> WorkspaceLock:
        return WorkspaceLock(self.root)

    @property
    def member_id(self) -> str:
        return self.case.member_id

    def profile(self) -> SearchProfile:
        return load_profile(self.case.profile_name)

    # -- paths ------------------------------------------------------------------

    def manifest_path(self, item_id: str) -> Path:
        return self.root / "manifests" / f"{item_id}.manifest"

    def assessment_path(self, item_id: str) -> Path:
        return self.root / "assessments" / f"{item_id}.json"

    def ranking_path(self) -> Path:
        return self.root / "ranking.json"

    def decisions_path(self) -> Path:
        return self.root / "decisions.json"

    def flags_path(self) -> Path:
        return self.root / "flags.json"

    def report_path(self) -> Path:
        return self.root / "report.obsreport"

    # -- evidence ---------------------------------------------------------------

    def handle(self, item_id: str) -> EvidenceHandle:
        if item_id not in self._handles:
            ref = self.case.sources.get(item_id)
            if ref is None:
                raise NotFound(f"item {item_id} has no evidence source")
            self._handles[item_id] = open_evidence(
                ref.path, ref.kind,
                source_id=item_id, audit=self.audit, actor=self.member_id,
            )
        return self._handles[item_id]

    def open_all(self) -> dict[str, EvidenceHandle]:
        """Open every item's evidence and persist its manifest."""
        handles = {}
        for item in self.case.items:
            if item.item_id not in self.case.sources:
                continue
            handle = self.handle(item.item_id)
            manifest = compute_manifest(handle)
            self.audit.record(
                self.member_id, "compute_manifest",
                {"item": item.item_id, "entries": len(manifest.entries)},
            )
            path = self.manifest_path(item.item_id)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(manifest.to_text(), encoding="utf-8")
            handles[item.item_id] = handle
        return handles

    def verify_all(self) -> dict[str, VerificationResult]:
        """Re-hash every item against its stored manifest."""
        results = {}
        for item in self.case.items:
            path = self.manifest_path(item.item_id)
            if not path.exists():
                continue
            manifest = HashManifest.from_text(path.read_text(encoding="utf-8"))
            result = verify_manifest(self.handle(item.item_id), manifest)
            self.audit.record(
                self.member_id, "verify_manifest",
                {"item": item.item_id, "ok": result.ok, "mismatches": len(result.mismatches)},
            )
            results[item.item_id] = result
        return results

    # -- scanning ----------------------------------------------------------------

    def _run_scanner(self, spec, handle: EvidenceHandle):
        """Returns (hits, findings, devices) for one scanner invocation."""
        hits: list[ArtifactHit] = []
        findings = None
        if handle.source_kind not in _SCANNER_SOURCES.get(spec.scanner_id, set()):
            return hits, findings
        if spec.scanner_id == "cards":
            hits = list(extract_card_numbers(handle))
        elif spec.scanner_id == "patterns":
            patterns = self._patterns.subset(list(spec.args)) if spec.args else self._patterns
            hits = scan_pattern(handle, patterns)
        elif spec.scanner_id == "media":
            hits = inventory_media_files(handle)
        elif spec.scanner_id == "encryption":
            findings = detect_encryption_indicators(handle, self._programs)
            hits = [
                ArtifactHit(
                    kind=ArtifactKind.ENCRYPTION_INDICATOR,
                    value=sig.name,
                    location=sig.location,
                    scanner_id="encryption",
                )
                for sig in findings.fde_signatures
            ] + [
                ArtifactHit(
                    kind=ArtifactKind.ENCRYPTION_INDICATOR,
                    value=program,
                    location=HitLocation("", 0),
                    scanner_id="encryption",
                    note="installed-program match",
                )
                for program in findings.suspect_programs
            ]
        elif spec.scanner_id == "devices":
            records = extract_attached_devices(handle)
            hits = [
                ArtifactHit(
                    kind=ArtifactKind.ATTACHED_DEVICE,
                    value=f"{r.vendor_id}:{r.product_id}" + (f":{r.serial}" if r.serial else ""),
                    location=HitLocation(r.source_line, index),
                    scanner_id="devices",
                )
                for index, r in enumerate(records)
            ]
        return hits, findings

    def scan_item(self, item_id: str, profile: SearchProfile | None = None) -> reporting.ItemAssessment:
        """Run the profile's scanners, in order, against one item."""
        profile = profile or self.profile()
        handle = self.handle(item_id)
        manifest_path = self.manifest_path(item_id)
        if not manifest_path.exists():
            raise MissingManifest(item_id)

        all_hits: list[list[ArtifactHit]] = []
        findings = None
        searches = []
        for spec in profile.scanners:
            hits, scanner_findings = self._run_scanner(spec, handle)
            applicable = handle.source_kind in _SCANNER_SOURCES.get(spec.scanner_id, set())
            self.audit.record(
                self.member_id, f"scan:{spec.scanner_id}",
                {
                    "item": item_id,
                    "hits": len(hits),
                    "applicable": applicable,
                    "config": spec.config_digest_source(),
                },
            )
            searches.append(
                reporting.SearchRun(
                    scanner_id=spec.scanner_id,
                    config_digest=reporting.config_digest(spec.config_digest_source()),
                )
            )
            all_hits.append(hits)
            if scanner_findings is not None:
                findings = scanner_findings

        item = self.case.item(item_id)
        checklist = absence_checklist(item, findings, profile)
        assessment = reporting.ItemAssessment(
            item_id=item_id,
            searches_run=searches,
            hits=merge_hits(*all_hits),
            findings=findings,
            checklist=checklist,
            manifest_ref=str(manifest_path.relative_to(self.root)),
        )
        item.assessed = True
        _write_canonical_json(self.assessment_path(item_id), reporting.assessment_to_dict(assessment))
        self._write_hits_tsv(assessment)
        return assessment

    def hits_tsv_path(self, item_id: str) -> Path:
        return self.root / "hits" / f"{item_id}.tsv"

    def _write_hits_tsv(self, assessment: reporting.ItemAssessment) -> None:
        """Delimited-text export of the hits, one row per observation."""
        lines = ["scanner_id\tkind\tpath\toffset\tvalue"]
        for hit in assessment.hits:
            lines.append(
                f"{hit.scanner_id}\t{hit.kind.value}\t{hit.location.path}"
                f"\t{hit.location.offset}\t{hit.value}"
            )
        path = self.hits_tsv_path(assessment.item_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def scan_all(self, profile: SearchProfile | None = None) -> dict[str, reporting.ItemAssessment]:
        profile = profile or self.profile()
        return {
            item.item_id: self.scan_item(item.item_id, profile)
            for item in self.case.items
            if item.item_id in self.case.sources
        }

    def load_assessments(self) -> dict[str, reporting.ItemAssessment]:
        out = {}
        directory = self.root / "assessments"
        if directory.is_dir():
            for path in sorted(directory.glob("*.json")):
                assessment = reporting.assessment_from_dict(
                    json.loads(path.read_text(encoding="utf-8"))
                )
                out[assessment.item_id] = assessment
        return out

    # -- ranking -----------------------------------------------------------------

    def rank(self, weights: TriageWeights | None = None) -> list[EvidenceItem]:
        profile = self.profile()
        ranked = rank_evidence(self.case.items, profile, weights)
        self.audit.record(self.member_id, "rank_evidence", {"items": len(ranked)})
        ranked = propagate_attachment_priority(ranked, None, weights)
        self.audit.record(self.member_id, "propagate_attachment_priority", {"items": len(ranked)})
        _write_canonical_json(
            self.ranking_path(),
            [{"item_id": i.item_id, "priority": round(i.priority or 0.0, 6)} for i in ranked],
        )
        return ranked

    def load_ranking(self) -> list[dict]:
        path = self.ranking_path()
        if not path.exists():
            return []
        return json.loads(path.read_text(encoding="utf-8"))

    # -- flags ---------------------------------------------------------------------

    def load_flags(self) -> dict[str, bool]:
        path = self.flags_path()
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def set_flag(self, hit_id: str, flagged: bool) -> None:
        assessments = self.load_assessments()
        known = {
            hit["hit_id"]
            for a in assessments.values()
            for hit in reporting.assessment_to_dict(a)["hits"]
        }
        if hit_id not in known:
            raise reporting.UnknownFlagReference(hit_id)
        flags = self.load_flags()
        flags[hit_id] = flagged
        _write_canonical_json(self.flags_path(), flags)
        self.audit.record(self.member_id, "flag_hit", {"hit_id": hit_id, "flagged": flagged})

    # -- threshold --------------------------------------------------------------------

    def decide_threshold(
        self, item_id: str, *, reasoning_note: str | None = None,
        weights: TriageWeights | None = None,
    ) -> ThresholdDecision:
        profile = self.profile()
        assessments = self.load_assessments()
        if item_id not in assessments:
            raise MissingManifest(item_id)
        assessment = assessments[item_id]
        item = self.case.item(item_id)
        ranking = {r["item_id"]: r["priority"] for r in self.load_ranking()}
        if item.priority is None and item_id in ranking:
            item.priority = ranking[item_id]
        decision = evaluate_threshold(
            assessment.hits,
            assessment.findings,
            item,
            profile,
            searches_run=[run.scanner_id for run in assessment.searches_run],
            reasoning_note=reasoning_note,
            decided_by=self.member_id,
            weights=weights,
        )
        self.audit.record(
            self.member_id, "evaluate_threshold",
            {"item": item_id, "decision": decision.decision.value},
        )
        decisions = self.load_decisions()
        decisions[item_id] = reporting.decision_to_dict(item_id, decision)
        _write_canonical_json(self.decisions_path(), decisions)
        return decision

    def load_decisions(self) -> dict[str, dict]:
        path = self.decisions_path()
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    # -- report -----------------------------------------------------------------------

    def build_case_report(self, notes: str = "") -> reporting.ObservationReport:
        assessments = list(self.load_assessments().values())
        flags = [hit_id for hit_id, on in self.load_flags().items() if on]
        decisions = {
            item_id: reporting.decision_from_dict(raw)
            for item_id, raw in self.load_decisions().items()
        }
        report = reporting.build_report(
            self.case, assessments, flags=flags, notes=notes, decisions=decisions
        )
        self.audit.record(self.member_id, "build_report", {"items": len(report.items)})
        errors = reporting.validate_report(report)
        self.audit.record(self.member_id, "validate_report", {"errors": len(errors)})
        if errors:
            raise reporting.InvalidReport(errors)
        structured = reporting.render_report(report, "structured")
        self.audit.record(self.member_id, "render_report", {"format": "structured"})
        self.report_path().write_bytes(structured)
        (self.root / "report.txt").write_bytes(reporting.render_report(report, "readable"))
        return report

    def load_report(self) -> reporting.ObservationReport | None:
        path = self.report_path()
        if not path.exists():
            return None
        return reporting.parse_report(path.read_bytes())
