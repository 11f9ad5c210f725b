"""Evidence prioritization and the forwarding-threshold decision.

Scoring is a weighted sum over who owns the device, their record, and the
device class; the weights are configuration because only the ordering is
prescribed (a suspect's machine outranks a roommate's). Items attached to
a high-priority device inherit its priority.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import AssessmentIncomplete, CyclicAttachment, DuplicateItemId
from .integrity import utc_now
from .profiles import SearchProfile
from .scanners import ArtifactHit
from .scanners.encryption import EncryptionFindings, EncryptionSummary


class OwnerRelation(str, Enum):
    SUSPECT = "suspect"
    ASSOCIATE = "associate"
    UNRELATED = "unrelated"
    UNKNOWN = "unknown"


class OwnerPrior(str, Enum):
    RELEVANT_RECORD = "relevant_record"
    NONE = "none"
    UNKNOWN = "unknown"


class DeviceClass(str, Enum):
    COMPUTER = "computer"
    EXTERNAL_STORAGE = "external_storage"
    PHONE = "phone"
    OTHER = "other"


@dataclass
class EvidenceItem:
    item_id: str
    description: str = ""
    owner_relation: OwnerRelation = OwnerRelation.UNKNOWN
    owner_prior: OwnerPrior = OwnerPrior.UNKNOWN
    device_class: DeviceClass = DeviceClass.OTHER
    attached_to: str | None = None
    priority: float | None = None  # set only by rank_evidence / propagation
    assessed: bool = False


@dataclass(frozen=True)
class TriageWeights:
    """Score contributions; the defaults keep the maximum sum at exactly 1.0."""

    owner_relation: dict[OwnerRelation, float] = field(
        default_factory=lambda: {
            OwnerRelation.SUSPECT: 0.5,
            OwnerRelation.ASSOCIATE: 0.3,
            OwnerRelation.UNKNOWN: 0.15,
            OwnerRelation.UNRELATED: 0.0,
        }
    )
    owner_prior: dict[OwnerPrior, float] = field(
        default_factory=lambda: {
            OwnerPrior.RELEVANT_RECORD: 0.3,
            OwnerPrior.UNKNOWN: 0.1,
            OwnerPrior.NONE: 0.0,
        }
    )
    device_class: dict[DeviceClass, float] = field(
        default_factory=lambda: {
            DeviceClass.COMPUTER: 0.2,
            DeviceClass.EXTERNAL_STORAGE: 0.15,
            DeviceClass.PHONE: 0.15,
            DeviceClass.OTHER: 0.05,
        }
    )
    # Items scoring at or above the band inherit priority through
    # attachment links; items at or above the cutoff are forwarded even
    # without findings.
    priority_band: float = 0.7
    forward_anyway_cutoff: float = 0.8


DEFAULT_WEIGHTS = TriageWeights()


def score_evidence(
    item: EvidenceItem,
    profile: SearchProfile | None = None,
    weights: TriageWeights | None = None,
) -> float:
    """Deterministic relevance score in [0, 1].

    The profile parameter is accepted for interface parity with the rest
    of the assessment pipeline; scoring is driven by the weights.
    """
    w = weights or DEFAULT_WEIGHTS
    score = (
        w.owner_relation[item.owner_relation]
        + w.owner_prior[item.owner_prior]
        + w.device_class[item.device_class]
    )
    return min(1.0, score)


def rank_evidence(
    items: list[EvidenceItem],
    profile: SearchProfile | None = None,
    weights: TriageWeights | None = None,
) -> list[EvidenceItem]:
    """Order items by descending score; ties break by ascending item_id."""
    seen = set()
    for item in items:
        if item.item_id in seen:
            raise DuplicateItemId(item.item_id)
        seen.add(item.item_id)
    for item in items:
        item.priority = score_evidence(item, profile, weights)
    return sorted(items, key=lambda i: (-(i.priority or 0.0), i.item_id))


def propagate_attachment_priority(
    ranked: list[EvidenceItem],
    links: dict[str, str] | None = None,
    weights: TriageWeights | None = None,
) -> list[EvidenceItem]:
    """Lift items attached (transitively) to a priority-band item.

    An item inherits its parent's propagated score when that score reaches
    the band; no score ever decreases. The result is re-ranked.
    """
    w = weights or DEFAULT_WEIGHTS
    by_id = {item.item_id: item for item in ranked}
    parent = dict(links) if links is not None else {
        item.item_id: item.attached_to for item in ranked if item.attached_to
    }
    for child, target in parent.items():
        if child not in by_id or target not in by_id:
            raise ValueError(f"attachment link {child!r} -> {target!r} names an unknown item")

    propagated: dict[str, float] = {}

    def resolve(item_id: str, trail: tuple[str, ...]) -> float:
        if item_id in propagated:
            return propagated[item_id]
        if item_id in trail:
            raise CyclicAttachment(" -> ".join(trail + (item_id,)))
        own = by_id[item_id].priority or 0.0
        target = parent.get(item_id)
        score = own
        if target is not None:
            upstream = resolve(target, trail + (item_id,))
            if upstream >= w.priority_band:
                score = max(own, upstream)
        propagated[item_id] = score
        return score

    for item in ranked:
        item.priority = resolve(item.item_id, ())
    return sorted(ranked, key=lambda i: (-(i.priority or 0.0), i.item_id))


# --- threshold --------------------------------------------------------------


class Decision(str, Enum):
    MEETS = "meets"
    DOES_NOT_MEET = "does_not_meet"
    FORWARD_DESPITE_NO_FINDINGS = "forward_despite_no_findings"


class ChecklistStatus(str, Enum):
    YES = "yes"
    NO = "no"
    NOT_PERFORMED = "not_performed"


@dataclass(frozen=True)
class ChecklistRow:
    name: str
    status: ChecklistStatus
    detail: str = ""


@dataclass(frozen=True)
class ChecklistResult:
    rows: tuple[ChecklistRow, ...]

    def complete(self) -> bool:
        return all(row.status is not ChecklistStatus.NOT_PERFORMED for row in self.rows)

    def row(self, name: str) -> ChecklistRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True)
class ThresholdDecision:
    decision: Decision
    basis: tuple[str, ...]  # hit references or checklist references
    decided_by: str
    decided_at: str


ROW_FDE = "encryption-signatures-checked"
ROW_PROGRAMS = "encryption-programs-checked"
ROW_REASONING = "prioritization-reasoning-recorded"


def absence_checklist(
    item: EvidenceItem,
    findings: EncryptionFindings | None,
    profile: SearchProfile | None = None,
    reasoning_note: str | None = None,
) -> ChecklistResult:
    """The things-to-consider record for an item with no findings.

    Encryption rows read "yes" once the scan ran (the detail carries what
    it saw); the reasoning row reads "no" when nothing was recorded, and
    "not_performed" only distinguishes scans that never happened.
    """
    if findings is None:
        fde_row = ChecklistRow(ROW_FDE, ChecklistStatus.NOT_PERFORMED, "encryption scan never run")
        prog_row = ChecklistRow(ROW_PROGRAMS, ChecklistStatus.NOT_PERFORMED, "encryption scan never run")
    else:
        fde_row = ChecklistRow(
            ROW_FDE,
            ChecklistStatus.YES,
            f"{len(findings.fde_signatures)} full-disk-encryption signature(s)",
        )
        prog_row = ChecklistRow(
            ROW_PROGRAMS,
            ChecklistStatus.YES,
            f"{len(findings.suspect_programs)} suspect program(s)",
        )
    if reasoning_note:
        reason_row = ChecklistRow(ROW_REASONING, ChecklistStatus.YES, reasoning_note)
    else:
        reason_row = ChecklistRow(ROW_REASONING, ChecklistStatus.NO, "no reasoning note recorded")
    return ChecklistResult(rows=(fde_row, prog_row, reason_row))


def evaluate_threshold(
    hits: list[ArtifactHit],
    findings: EncryptionFindings | None,
    item: EvidenceItem,
    profile: SearchProfile,
    *,
    searches_run: list[str] | None = None,
    reasoning_note: str | None = None,
    decided_by: str = "",
    weights: TriageWeights | None = None,
) -> ThresholdDecision:
    """Decide whether the item warrants full laboratory analysis.

    Meets when any hit's kind is a profile threshold target. With no
    target hits, encryption indicators or a priority score at the
    forward-anyway cutoff still forward the item, citing the checklist;
    otherwise the item does not meet, which requires the checklist to be
    complete (an encryption scan that never ran blocks the call).
    """
    w = weights or DEFAULT_WEIGHTS
    if searches_run is not None:
        missing = [s for s in profile.scanner_ids() if s not in searches_run]
        if missing:
            raise AssessmentIncomplete(f"scanners never run: {', '.join(missing)}")

    targets = set(profile.threshold_targets)
    basis_hits = [
        f"hit:{h.scanner_id}:{h.location.as_str()}" for h in hits if h.kind in targets
    ]
    if basis_hits:
        return ThresholdDecision(
            decision=Decision.MEETS,
            basis=tuple(basis_hits),
            decided_by=decided_by,
            decided_at=utc_now(),
        )

    checklist = absence_checklist(item, findings, profile, reasoning_note)
    if findings is not None and findings.summary is not EncryptionSummary.NONE:
        return ThresholdDecision(
            decision=Decision.FORWARD_DESPITE_NO_FINDINGS,
            basis=(f"checklist:{ROW_FDE}", f"checklist:{ROW_PROGRAMS}",
                   f"encryption:{findings.summary.value}"),
            decided_by=decided_by,
            decided_at=utc_now(),
        )
    score = item.priority if item.priority is not None else score_evidence(item, profile, w)
    if score >= w.forward_anyway_cutoff:
        return ThresholdDecision(
            decision=Decision.FORWARD_DESPITE_NO_FINDINGS,
            basis=(f"checklist:{ROW_REASONING}", f"priority:{score:.3f}"),
            decided_by=decided_by,
            decided_at=utc_now(),
        )
    if not checklist.complete():
        raise AssessmentIncomplete(
            "checklist incomplete: "
            + ", ".join(r.name for r in checklist.rows if r.status is ChecklistStatus.NOT_PERFORMED)
        )
    return ThresholdDecision(
        decision=Decision.DOES_NOT_MEET,
        basis=tuple(f"checklist:{r.name}" for r in checklist.rows),
        decided_by=decided_by,
        decided_at=utc_now(),
    )
