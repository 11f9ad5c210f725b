"""Crime-type search profiles: which scanners run and what counts as salient.

Profiles are data, not code: the built-ins ship as plain-text files in
``data/profiles/`` using the same sectioned format a coordinator would
hand-edit, so search behavior can change without a rebuild.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import InvalidProfile, UnknownCrimeType
from .scanners import ArtifactHit, ArtifactKind


class CrimeType(str, Enum):
    FRAUD = "fraud"
    IDENTITY_THEFT = "identity_theft"
    CHILD_EXPLOITATION = "child_exploitation"
    STOLEN_PROPERTY = "stolen_property"
    GENERIC = "generic"


# What each scanner can produce; threshold targets must be producible.
SCANNER_KINDS: dict[str, set[ArtifactKind]] = {
    "cards": {ArtifactKind.CARD_NUMBER},
    "patterns": {ArtifactKind.EMAIL, ArtifactKind.ID_PATTERN},
    "media": {ArtifactKind.MEDIA_FILE},
    "encryption": {ArtifactKind.ENCRYPTION_INDICATOR},
    "devices": {ArtifactKind.ATTACHED_DEVICE},
}


@dataclass(frozen=True)
class ScannerSpec:
    scanner_id: str
    args: tuple[str, ...] = ()

    def config_digest_source(self) -> str:
        return f"{self.scanner_id}({','.join(self.args)})"


@dataclass(frozen=True)
class SalienceRule:
    kind: ArtifactKind
    description: str
    value_pattern: str | None = None

    def matches(self, hit: ArtifactHit) -> bool:
        if hit.kind is not self.kind:
            return False
        if self.value_pattern is None:
            return True
        return re.search(self.value_pattern, hit.value) is not None


@dataclass(frozen=True)
class SearchProfile:
    crime_type: CrimeType
    scanners: tuple[ScannerSpec, ...]
    salience_rules: tuple[SalienceRule, ...] = ()
    threshold_targets: tuple[ArtifactKind, ...] = ()

    def scanner_ids(self) -> list[str]:
        return [s.scanner_id for s in self.scanners]


def validate_profile(profile: SearchProfile) -> list[str]:
    """Check the profile invariants; returns one message per violation."""
    errors = []
    if not profile.scanners:
        errors.append("no scanners")
    producible: set[ArtifactKind] = set()
    for spec in profile.scanners:
        kinds = SCANNER_KINDS.get(spec.scanner_id)
        if kinds is None:
            errors.append(f"unknown scanner {spec.scanner_id!r}")
        else:
            producible |= kinds
    for target in profile.threshold_targets:
        if target not in producible:
            errors.append(f"threshold target {target.value!r} not producible by any listed scanner")
    return errors


def parse_profile(text: str) -> SearchProfile:
    """Parse the sectioned plain-text profile format."""
    crime_type: str | None = None
    section = None
    scanners: list[ScannerSpec] = []
    salience: list[SalienceRule] = []
    targets: list[ArtifactKind] = []
    problems: list[str] = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("scanners", "salience", "threshold"):
                problems.append(f"unknown section [{section}]")
            continue
        if section is None:
            key, sep, value = line.partition("=")
            if sep and key.strip() == "crime_type":
                crime_type = value.strip()
            else:
                problems.append(f"unexpected line before sections: {line!r}")
            continue
        if section == "scanners":
            name, _, arg_text = line.partition("\t")
            args = tuple(a.strip() for a in arg_text.split(",") if a.strip()) if arg_text else ()
            scanners.append(ScannerSpec(scanner_id=name.strip(), args=args))
        elif section == "salience":
            parts = line.split("\t")
            if len(parts) < 2:
                problems.append(f"salience rule needs kind<TAB>description: {line!r}")
                continue
            try:
                kind = ArtifactKind(parts[0].strip())
            except ValueError:
                problems.append(f"unknown artifact kind in salience rule: {parts[0]!r}")
                continue
            salience.append(
                SalienceRule(
                    kind=kind,
                    description=parts[1].strip(),
                    value_pattern=parts[2].strip() if len(parts) > 2 else None,
                )
            )
        elif section == "threshold":
            try:
                targets.append(ArtifactKind(line))
            except ValueError:
                problems.append(f"unknown artifact kind in threshold: {line!r}")

    if crime_type is None:
        problems.append("missing crime_type")
    else:
        try:
            parsed_type = CrimeType(crime_type)
        except ValueError:
            problems.append(f"unknown crime_type {crime_type!r}")
    if problems:
        raise InvalidProfile(problems)

    profile = SearchProfile(
        crime_type=parsed_type,
        scanners=tuple(scanners),
        salience_rules=tuple(salience),
        threshold_targets=tuple(targets),
    )
    errors = validate_profile(profile)
    if errors:
        raise InvalidProfile(errors)
    return profile


def load_profile(crime_type: CrimeType | str | Path) -> SearchProfile:
    """Load a built-in profile by crime type, or any profile by file path."""
    if isinstance(crime_type, Path) or (
        isinstance(crime_type, str) and crime_type.endswith(".profile")
    ):
        path = Path(crime_type)
        if not path.exists():
            raise UnknownCrimeType(str(path))
        return parse_profile(path.read_text(encoding="utf-8"))
    try:
        ct = CrimeType(crime_type)
    except ValueError:
        raise UnknownCrimeType(str(crime_type)) from None
    text = (
        resources.files("fieldtriage.data") / "profiles" / f"{ct.value}.profile"
    ).read_text(encoding="utf-8")
    return parse_profile(text)


def load_default_patterns_text() -> str:
    return resources.files("fieldtriage.data").joinpath("patterns.txt").read_text(encoding="utf-8")


def load_default_program_names_text() -> str:
    return (
        resources.files("fieldtriage.data")
        .joinpath("encryption_programs.txt")
        .read_text(encoding="utf-8")
    )


def apply_salience(profile: SearchProfile, hits: list[ArtifactHit]) -> list[ArtifactHit]:
    """Order hits for review: salient ones first, otherwise stable."""
    marks = [any(rule.matches(h) for rule in profile.salience_rules) for h in hits]
    salient = [h for h, m in zip(hits, marks) if m]
    rest = [h for h, m in zip(hits, marks) if not m]
    return salient + rest
