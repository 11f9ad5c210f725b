from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fieldtriage.casefile import CaseRecord, EvidenceSourceRef
from fieldtriage.integrity import SourceKind
from fieldtriage.triage import DeviceClass, EvidenceItem, OwnerPrior, OwnerRelation
from fieldtriage.workspace import CaseWorkspace


@pytest.fixture
def fixture_tree(tmp_path: Path) -> Path:
    """Small evidence tree with a card number, an email, and a USB log line."""
    tree = tmp_path / "tree"
    tree.mkdir()
    (tree / "note.txt").write_bytes(b"call 4111111111111111 now or mail john@example.com")
    (tree / "logs").mkdir()
    (tree / "logs" / "kern.log").write_bytes(
        b"2015-06-01T10:00:00Z usb 1-1: New USB device found, idVendor=0781, idProduct=5567\n"
    )
    return tree


@pytest.fixture
def fraud_case(fixture_tree: Path) -> CaseRecord:
    return CaseRecord(
        case_id="CASE-7",
        dft_file_number="DFT-2015-000042",
        member_id="m-001",
        profile_name="fraud",
        investigation_id="INV-9",
        items=[
            EvidenceItem(
                item_id="laptop",
                description="suspect laptop",
                owner_relation=OwnerRelation.SUSPECT,
                owner_prior=OwnerPrior.RELEVANT_RECORD,
                device_class=DeviceClass.COMPUTER,
            )
        ],
        sources={"laptop": EvidenceSourceRef(str(fixture_tree), SourceKind.DIRECTORY_TREE)},
    )


@pytest.fixture
def fraud_workspace(tmp_path: Path, fraud_case: CaseRecord) -> CaseWorkspace:
    ws = CaseWorkspace.create(tmp_path / "ws", fraud_case)
    ws.open_all()
    ws.scan_all()
    ws.rank()
    return ws
