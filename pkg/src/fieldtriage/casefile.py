"""Case description files: the items seized, their owners, and links.

A case file is structured JSON text naming each evidence item, who it
belongs to, how it was attached, and where its bytes live on disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .integrity import SourceKind
from .triage import DeviceClass, EvidenceItem, OwnerPrior, OwnerRelation


@dataclass(frozen=True)
class EvidenceSourceRef:
    path: str
    kind: SourceKind


@dataclass
class CaseRecord:
    case_id: str
    dft_file_number: str = ""
    member_id: str = ""
    profile_name: str = "generic"
    items: list[EvidenceItem] = field(default_factory=list)
    sources: dict[str, EvidenceSourceRef] = field(default_factory=dict)
    investigation_id: str = ""

    def item(self, item_id: str) -> EvidenceItem:
        for it in self.items:
            if it.item_id == item_id:
                return it
        raise KeyError(item_id)


def case_from_dict(raw: dict) -> CaseRecord:
    items = []
    sources = {}
    for entry in raw.get("items", []):
        items.append(
            EvidenceItem(
                item_id=entry["item_id"],
                description=entry.get("description", ""),
                owner_relation=OwnerRelation(entry.get("owner_relation", "unknown")),
                owner_prior=OwnerPrior(entry.get("owner_prior", "unknown")),
                device_class=DeviceClass(entry.get("device_class", "other")),
                attached_to=entry.get("attached_to"),
            )
        )
        if "evidence" in entry:
            sources[entry["item_id"]] = EvidenceSourceRef(
                path=entry["evidence"]["path"],
                kind=SourceKind(entry["evidence"]["kind"]),
            )
    return CaseRecord(
        case_id=raw["case_id"],
        dft_file_number=raw.get("dft_file_number", ""),
        member_id=raw.get("member_id", ""),
        profile_name=raw.get("profile", "generic"),
        items=items,
        sources=sources,
        investigation_id=raw.get("investigation_id", ""),
    )


def case_to_dict(case: CaseRecord) -> dict:
    items = []
    for it in case.items:
        entry: dict = {
            "item_id": it.item_id,
            "description": it.description,
            "owner_relation": it.owner_relation.value,
            "owner_prior": it.owner_prior.value,
            "device_class": it.device_class.value,
        }
        if it.attached_to:
            entry["attached_to"] = it.attached_to
        ref = case.sources.get(it.item_id)
        if ref:
            entry["evidence"] = {"path": ref.path, "kind": ref.kind.value}
        items.append(entry)
    return {
        "case_id": case.case_id,
        "dft_file_number": case.dft_file_number,
        "member_id": case.member_id,
        "profile": case.profile_name,
        "investigation_id": case.investigation_id,
        "items": items,
    }


def load_case_file(path: str | Path) -> CaseRecord:
    return case_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_case_file(case: CaseRecord, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(case_to_dict(case), sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
