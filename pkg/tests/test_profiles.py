from __future__ import annotations

import pytest

from fieldtriage.errors import InvalidProfile, UnknownCrimeType
from fieldtriage.profiles import (
    CrimeType,
    ScannerSpec,
    SearchProfile,
    apply_salience,
    load_profile,
    parse_profile,
    validate_profile,
)
from fieldtriage.scanners import ArtifactKind
from fieldtriage.scanners.artifacts import ArtifactHit, HitLocation


ALL_TYPES = ("fraud", "identity_theft", "child_exploitation", "stolen_property", "generic")


@pytest.mark.parametrize("name", ALL_TYPES)
def test_every_builtin_profile_validates(name):
    profile = load_profile(name)
    assert validate_profile(profile) == []
    assert profile.scanners


def test_fraud_profile_contents():
    profile = load_profile("fraud")
    assert "cards" in profile.scanner_ids()
    assert ArtifactKind.CARD_NUMBER in profile.threshold_targets


def test_child_exploitation_profile_contents():
    profile = load_profile("child_exploitation")
    assert "media" in profile.scanner_ids()
    assert ArtifactKind.MEDIA_FILE in profile.threshold_targets


def test_generic_profile_permissive():
    profile = load_profile("generic")
    assert set(profile.scanner_ids()) == {"cards", "patterns", "media", "encryption", "devices"}
    assert profile.threshold_targets == ()


def test_unknown_crime_type():
    with pytest.raises(UnknownCrimeType):
        load_profile("jaywalking")


def test_profile_from_file(tmp_path):
    path = tmp_path / "custom.profile"
    path.write_text(
        "crime_type = fraud\n[scanners]\ncards\n[threshold]\ncard_number\n",
        encoding="utf-8",
    )
    profile = load_profile(path)
    assert profile.crime_type is CrimeType.FRAUD
    assert profile.scanner_ids() == ["cards"]


def test_missing_profile_file(tmp_path):
    with pytest.raises(UnknownCrimeType):
        load_profile(tmp_path / "absent.profile")


def test_empty_scanners_rejected():
    profile = SearchProfile(crime_type=CrimeType.GENERIC, scanners=())
    assert "no scanners" in validate_profile(profile)


def test_unproducible_threshold_target_named():
    profile = SearchProfile(
        crime_type=CrimeType.FRAUD,
        scanners=(ScannerSpec("cards"),),
        threshold_targets=(ArtifactKind.MEDIA_FILE,),
    )
    errors = validate_profile(profile)
    assert any("media_file" in e for e in errors)


def test_parse_rejects_unknown_section():
    with pytest.raises(InvalidProfile) as excinfo:
        parse_profile("crime_type = fraud\n[wat]\nx\n[scanners]\ncards\n")
    assert any("[wat]" in r for r in excinfo.value.reasons)


def test_parse_rejects_missing_crime_type():
    with pytest.raises(InvalidProfile) as excinfo:
        parse_profile("[scanners]\ncards\n")
    assert any("crime_type" in r for r in excinfo.value.reasons)


def test_parse_scanner_args():
    profile = parse_profile(
        "crime_type = generic\n[scanners]\npatterns\temail,sin\ncards\n"
    )
    assert profile.scanners[0].args == ("email", "sin")
    assert profile.scanners[1].args == ()


def _hit(kind: ArtifactKind, value: str, offset: int) -> ArtifactHit:
    return ArtifactHit(kind=kind, value=value, location=HitLocation("", offset), scanner_id="s")


def test_salience_surfaces_matching_kinds_first():
    profile = load_profile("identity_theft")
    email = _hit(ArtifactKind.EMAIL, "a@b.cd", 0)
    ident = _hit(ArtifactKind.ID_PATTERN, "AB123456", 9)
    media = _hit(ArtifactKind.MEDIA_FILE, "x.jpg", 5)
    ordered = apply_salience(profile, [email, ident, media])
    assert ordered[0] is ident and ordered[1] is media
    assert ordered[2] is email


def test_profile_execution_order_is_listed_order(fraud_workspace):
    scans = [
        e.parameters["config"].split("(")[0]
        for e in fraud_workspace.audit.events()
        if e.action.startswith("scan:")
    ]
    assert scans == load_profile("fraud").scanner_ids()
