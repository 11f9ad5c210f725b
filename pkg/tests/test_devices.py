from __future__ import annotations

import json
from pathlib import Path

import pytest

from fieldtriage.errors import MalformedRecord
from fieldtriage.integrity import SourceKind, open_evidence
from fieldtriage.scanners import extract_attached_devices


def _records_source(tmp_path: Path, records: list[dict]):
    path = tmp_path / "devices.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return open_evidence(path, SourceKind.ARTIFACT_RECORDS)


def test_kernel_log_line(tmp_path):
    tree = tmp_path / "tree"
    tree.mkdir()
    (tree / "kern.log").write_text(
        "usb 1-1: New USB device found, idVendor=0781, idProduct=5567\n", encoding="utf-8"
    )
    handle = open_evidence(tree, SourceKind.DIRECTORY_TREE)
    (record,) = extract_attached_devices(handle)
    assert record.vendor_id == "0781"
    assert record.product_id == "5567"
    assert record.serial is None
    assert record.source_line == "kern.log:1"


def test_iso_timestamp_prefix_captured(tmp_path):
    tree = tmp_path / "tree"
    tree.mkdir()
    (tree / "events.log").write_text(
        "2015-06-01T10:00:00Z usb: New USB device found, idVendor=abcd, idProduct=00FF\n",
        encoding="utf-8",
    )
    handle = open_evidence(tree, SourceKind.DIRECTORY_TREE)
    (record,) = extract_attached_devices(handle)
    assert record.first_seen == "2015-06-01T10:00:00Z"
    assert record.vendor_id == "abcd"
    assert record.product_id == "00ff"


def test_normalized_records_pass_through(tmp_path):
    handle = _records_source(
        tmp_path,
        [
            {"vendor_id": "0781", "product_id": "5567", "serial": "4C5300", "first_seen": "2015-01-02"},
            {"vendor_id": "abcd", "product_id": "ef01"},
        ],
    )
    records = extract_attached_devices(handle)
    assert len(records) == 2
    assert records[0].serial == "4C5300"
    assert records[0].first_seen == "2015-01-02"
    assert records[0].source_line == "record:0"
    assert records[1].serial is None
    assert records[1].source_line == "record:1"


def test_malformed_record_index(tmp_path):
    handle = _records_source(
        tmp_path,
        [{"vendor_id": "0781", "product_id": "5567"}, {"vendor_id": "nope", "product_id": "5567"}],
    )
    with pytest.raises(MalformedRecord) as excinfo:
        extract_attached_devices(handle)
    assert excinfo.value.index == 1


def test_empty_sources(tmp_path):
    tree = tmp_path / "tree"
    tree.mkdir()
    handle = open_evidence(tree, SourceKind.DIRECTORY_TREE)
    assert extract_attached_devices(handle) == []

    empty = tmp_path / "none.jsonl"
    empty.write_text("", encoding="utf-8")
    handle = open_evidence(empty, SourceKind.ARTIFACT_RECORDS)
    assert extract_attached_devices(handle) == []


def test_order_by_appearance(tmp_path):
    tree = tmp_path / "tree"
    tree.mkdir()
    (tree / "a.log").write_text(
        "junk\nNew USB device found, idVendor=1111, idProduct=2222\n"
        "noise\nNew USB device found, idVendor=3333, idProduct=4444\n",
        encoding="utf-8",
    )
    handle = open_evidence(tree, SourceKind.DIRECTORY_TREE)
    records = extract_attached_devices(handle)
    assert [(r.vendor_id, r.source_line) for r in records] == [
        ("1111", "a.log:2"),
        ("3333", "a.log:4"),
    ]
