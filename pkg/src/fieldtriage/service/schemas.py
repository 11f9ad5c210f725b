"""Request/response models for the coordinator service API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class MemberIn(BaseModel):
    member_id: str
    name: str
    station: str = ""
    district: str = "HQ"
    business_lines: list[str] = Field(default_factory=lambda: ["DCFT"])
    certified_on: str | None = None


class MemberOut(MemberIn):
    assessments_by_year: dict[int, int] = Field(default_factory=dict)


class FileNumberRequest(BaseModel):
    member_id: str
    investigation_id: str


class FileNumberOut(BaseModel):
    value: str
    member_id: str
    investigation_id: str
    issued_at: str


class AssessmentIn(BaseModel):
    file_number: str
    report_ref: str
    exhibits_assessed: int | None = None
    exhibits_forwarded: int | None = None


class MemberStatusOut(BaseModel):
    member_id: str
    year: int
    assessments: int
    minimum: int
    status: str


class HistoricalIn(BaseModel):
    table: str = "dft_files"
    text: str


class CaseCreateIn(BaseModel):
    case: dict
    workspace: str | None = None  # server-side directory; defaults under the state dir


class FlagIn(BaseModel):
    hit_id: str
    flagged: bool


class ThresholdIn(BaseModel):
    item_id: str
    reasoning_note: str | None = None


class FinalizeIn(BaseModel):
    notes: str = ""
    decisions: list[ThresholdIn] = Field(default_factory=list)


class CaseItemView(BaseModel):
    item_id: str
    description: str
    priority: float | None = None
    assessed: bool = False
    hits: list[dict] = Field(default_factory=list)
    encryption: dict | None = None
    checklist: list[dict] = Field(default_factory=list)
    searches_run: list[dict] = Field(default_factory=list)


class CaseView(BaseModel):
    case_id: str
    dft_file_number: str
    member_id: str
    profile: str
    items: list[CaseItemView]
    decisions: dict[str, dict] = Field(default_factory=dict)
    has_report: bool = False


class ErrorOut(BaseModel):
    error: str
    detail: str
