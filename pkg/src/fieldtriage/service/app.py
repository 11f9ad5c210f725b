"""Loopback HTTP service wrapping the coordinator and case workspaces.

The review console talks only to this API; it holds no authoritative
state of its own. All state lives under one directory (coordinator
journal plus case workspaces), so restarting the service loses nothing.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from ..casefile import case_from_dict
from ..coordinator import Coordinator
from ..errors import FieldTriageError, NotFound
from ..profiles import apply_salience
from ..workspace import CaseWorkspace
from .schemas import (
    AssessmentIn,
    CaseCreateIn,
    CaseItemView,
    CaseView,
    FileNumberOut,
    FileNumberRequest,
    FinalizeIn,
    FlagIn,
    HistoricalIn,
    MemberIn,
    MemberStatusOut,
)

_HTTP_STATUS = {
    "integrity.NotFound": 404,
    "coordinator.UnknownMember": 404,
    "coordinator.UnknownFileNumber": 404,
    "coordinator.NoData": 404,
    "report.UnknownFlagReference": 404,
    "coordinator.DuplicateReportForFileNumber": 409,
    "cli.WorkspaceLocked": 409,
    "coordinator.NotCertified": 403,
}


class ServiceState:
    def __init__(self, state_dir: str | Path):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.coordinator = Coordinator(self.state_dir / "coordinator.journal")
        self.cases_dir = self.state_dir / "cases"
        self.cases_dir.mkdir(exist_ok=True)

    def workspace(self, case_id: str) -> CaseWorkspace:
        root = self.cases_dir / case_id
        if not root.exists():
            raise NotFound(f"case {case_id}")
        return CaseWorkspace.load(root)

    def case_ids(self) -> list[str]:
        return sorted(p.name for p in self.cases_dir.iterdir() if (p / "case.json").exists())


def create_app(state_dir: str | Path) -> FastAPI:
    app = FastAPI(title="fieldtriage coordinator", version="0.1.0")
    state = ServiceState(state_dir)
    app.state.service = state

    @app.exception_handler(FieldTriageError)
    async def _handle_toolkit_error(request, exc: FieldTriageError):
        return JSONResponse(
            status_code=_HTTP_STATUS.get(exc.code, 400),
            content={"error": exc.code, "detail": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    # -- coordinator ------------------------------------------------------------

    @app.post("/members")
    def register_member(member: MemberIn) -> dict:
        record = state.coordinator.register_member(
            member.member_id,
            member.name,
            station=member.station,
            district=member.district,
            business_lines=tuple(member.business_lines),
            certified_on=member.certified_on,
        )
        return {"member_id": record.member_id}

    @app.post("/file-numbers", response_model=FileNumberOut)
    def issue_file_number(req: FileNumberRequest) -> FileNumberOut:
        number = state.coordinator.issue_file_number(req.member_id, req.investigation_id)
        return FileNumberOut(
            value=number.value,
            member_id=number.member_id,
            investigation_id=number.investigation_id,
            issued_at=number.issued_at,
        )

    @app.post("/assessments")
    def record_assessment(req: AssessmentIn) -> dict:
        member = state.coordinator.record_assessment(
            req.file_number,
            req.report_ref,
            exhibits_assessed=req.exhibits_assessed,
            exhibits_forwarded=req.exhibits_forwarded,
        )
        return {
            "member_id": member.member_id,
            "assessments_by_year": member.assessments_by_year,
        }

    @app.get("/members/{member_id}/status", response_model=MemberStatusOut)
    def member_status(
        member_id: str, year: int = Query(...), minimum: int = Query(default=4)
    ) -> MemberStatusOut:
        status = state.coordinator.qualification_status(member_id, year, minimum)
        member = state.coordinator.member(member_id)
        return MemberStatusOut(
            member_id=member_id,
            year=year,
            assessments=member.assessments_by_year.get(year, 0),
            minimum=minimum,
            status=status.value,
        )

    @app.get("/metrics")
    def metrics() -> dict:
        return state.coordinator.program_metrics().to_dict()

    @app.post("/historical")
    def ingest_historical(req: HistoricalIn) -> dict:
        state.coordinator.ingest_historical(req.text, table=req.table)
        return {"table": req.table, "status": "ingested"}

    @app.get("/historical/{table}")
    def export_historical(table: str) -> Response:
        return PlainTextResponse(state.coordinator.export_historical(table))

    # -- cases --------------------------------------------------------------------

    @app.get("/cases")
    def list_cases() -> dict:
        return {"cases": state.case_ids()}

    @app.post("/cases")
    def create_case(req: CaseCreateIn) -> dict:
        case = case_from_dict(req.case)
        root = Path(req.workspace) if req.workspace else state.cases_dir / case.case_id
        CaseWorkspace.create(root, case)
        return {"case_id": case.case_id}

    def _case_view(ws: CaseWorkspace) -> CaseView:
        assessments = {
            item_id: a for item_id, a in ws.load_assessments().items()
        }
        flags = ws.load_flags()
        ranking = {r["item_id"]: r["priority"] for r in ws.load_ranking()}
        rank_order = [r["item_id"] for r in ws.load_ranking()]
        profile = ws.profile()

        views = []
        for item in ws.case.items:
            view = CaseItemView(
                item_id=item.item_id,
                description=item.description,
                priority=ranking.get(item.item_id),
                assessed=item.item_id in assessments,
            )
            assessment = assessments.get(item.item_id)
            if assessment:
                from ..report import assessment_to_dict

                raw = assessment_to_dict(assessment)
                ordered = apply_salience(profile, assessment.hits)
                by_id = {h["hit_id"]: h for h in raw["hits"]}
                hits = []
                from ..report import hit_reference

                for hit in ordered:
                    entry = dict(by_id[hit_reference(item.item_id, hit)])
                    entry["flagged"] = flags.get(entry["hit_id"], entry.get("flagged", False))
                    hits.append(entry)
                view.hits = hits
                view.encryption = raw.get("encryption")
                view.checklist = raw.get("checklist", [])
                view.searches_run = raw.get("searches_run", [])
            views.append(view)

        # ranked order first, unranked items after in case order
        if rank_order:
            position = {item_id: i for i, item_id in enumerate(rank_order)}
            views.sort(key=lambda v: position.get(v.item_id, len(position)))

        return CaseView(
            case_id=ws.case.case_id,
            dft_file_number=ws.case.dft_file_number,
            member_id=ws.case.member_id,
            profile=ws.case.profile_name,
            items=views,
            decisions=ws.load_decisions(),
            has_report=ws.report_path().exists(),
        )

    @app.get("/cases/{case_id}", response_model=CaseView)
    def fetch_case(case_id: str) -> CaseView:
        return _case_view(state.workspace(case_id))

    @app.post("/cases/{case_id}/open")
    def open_case_evidence(case_id: str) -> dict:
        ws = state.workspace(case_id)
        with ws.lock():
            handles = ws.open_all()
        return {"opened": sorted(handles)}

    @app.post("/cases/{case_id}/scan")
    def scan_case(case_id: str) -> dict:
        ws = state.workspace(case_id)
        with ws.lock():
            if not any(ws.manifest_path(i.item_id).exists() for i in ws.case.items):
                ws.open_all()
            assessments = ws.scan_all()
            ws.rank()
        return {
            "scanned": sorted(assessments),
            "hits": sum(len(a.hits) for a in assessments.values()),
        }

    @app.post("/cases/{case_id}/flags")
    def flag_hit(case_id: str, req: FlagIn) -> dict:
        ws = state.workspace(case_id)
        with ws.lock():
            ws.set_flag(req.hit_id, req.flagged)
        return {"hit_id": req.hit_id, "flagged": req.flagged}

    @app.post("/cases/{case_id}/finalize")
    def finalize_case(case_id: str, req: FinalizeIn) -> dict:
        ws = state.workspace(case_id)
        with ws.lock():
            for decision in req.decisions:
                ws.decide_threshold(
                    decision.item_id, reasoning_note=decision.reasoning_note
                )
            report = ws.build_case_report(notes=req.notes)
        return {
            "report_ref": str(ws.report_path().name),
            "case_id": case_id,
            "decisions": {
                d["item_id"]: d["decision"] for d in report.threshold_decisions
            },
        }

    @app.get("/cases/{case_id}/report")
    def fetch_report(case_id: str, format: str = Query(default="structured")) -> Response:
        ws = state.workspace(case_id)
        report = ws.load_report()
        if report is None:
            raise NotFound(f"case {case_id} has no report")
        from ..report import render_report

        data = render_report(report, format)
        media = "application/json" if format == "structured" else "text/plain"
        return Response(content=data, media_type=media)

    return app
