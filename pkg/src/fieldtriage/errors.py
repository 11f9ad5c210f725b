"""Exception types shared across the toolkit.

Every error carries a short machine code (``code``) so the CLI and the
service can emit one-line, parseable diagnostics.
"""

from __future__ import annotations


class FieldTriageError(Exception):
    """Base class for all toolkit errors."""

    code = "fieldtriage.Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


# --- integrity ---------------------------------------------------------------

class NotFound(FieldTriageError):
    code = "integrity.NotFound"


class NotReadable(FieldTriageError):
    code = "integrity.NotReadable"


class IntegrityViolation(FieldTriageError):
    """A write was attempted through a read-only evidence handle."""

    code = "integrity.IntegrityViolation"


class ReadFailure(FieldTriageError):
    code = "integrity.ReadFailure"


class AlgorithmUnsupported(FieldTriageError):
    code = "integrity.AlgorithmUnsupported"


class LogClosed(FieldTriageError):
    code = "integrity.LogClosed"


# --- scanners ----------------------------------------------------------------

class NonDigitInput(FieldTriageError):
    code = "scanners.NonDigitInput"


class MalformedPattern(FieldTriageError):
    code = "scanners.MalformedPattern"

    def __init__(self, name: str, message: str = ""):
        self.name = name
        super().__init__(f"pattern {name!r}: {message}" if message else f"pattern {name!r}")


class MalformedRecord(FieldTriageError):
    code = "scanners.MalformedRecord"

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(f"record {index}: {message}" if message else f"record {index}")


# --- profiles ----------------------------------------------------------------

class UnknownCrimeType(FieldTriageError):
    code = "profiles.UnknownCrimeType"


class InvalidProfile(FieldTriageError):
    code = "profiles.InvalidProfile"

    def __init__(self, reasons: list[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons))


# --- triage ------------------------------------------------------------------

class DuplicateItemId(FieldTriageError):
    code = "triage.DuplicateItemId"


class CyclicAttachment(FieldTriageError):
    code = "triage.CyclicAttachment"


class AssessmentIncomplete(FieldTriageError):
    code = "triage.AssessmentIncomplete"


# --- report ------------------------------------------------------------------

class MissingManifest(FieldTriageError):
    code = "report.MissingManifest"


class UnknownFlagReference(FieldTriageError):
    code = "report.UnknownFlagReference"


class InvalidReport(FieldTriageError):
    code = "report.InvalidReport"

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


# --- coordinator -------------------------------------------------------------

class UnknownMember(FieldTriageError):
    code = "coordinator.UnknownMember"


class NotCertified(FieldTriageError):
    code = "coordinator.NotCertified"


class UnknownFileNumber(FieldTriageError):
    code = "coordinator.UnknownFileNumber"


class DuplicateReportForFileNumber(FieldTriageError):
    code = "coordinator.DuplicateReportForFileNumber"


class MalformedRow(FieldTriageError):
    code = "coordinator.MalformedRow"

    def __init__(self, line_number: int, message: str = ""):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}" if message else f"line {line_number}")


class NoData(FieldTriageError):
    code = "coordinator.NoData"


# --- backlog model -----------------------------------------------------------

class InvalidConfig(FieldTriageError):
    code = "backlog.InvalidConfig"

    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


# --- workspace / cli ---------------------------------------------------------

class WorkspaceLocked(FieldTriageError):
    code = "cli.WorkspaceLocked"


class UnknownCommand(FieldTriageError):
    code = "cli.UnknownCommand"
