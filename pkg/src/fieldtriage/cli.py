"""Command-line entry point for the assessment pipeline.

Evidence-processing subcommands (open, scan, rank, threshold, report,
verify) run the core library against a local workspace directory;
coordinator subcommands (metrics) act as a thin client of the service
when given an address. ``serve`` hosts the service itself.

Every failure is one machine-parsable line on stderr:
``error: <module.Code>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .backlog import SimConfig, compare_disciplines, load_sim_config, simulate
from .casefile import load_case_file
from .coordinator import Coordinator
from .errors import FieldTriageError, NotFound, UnknownCommand
from .profiles import load_profile
from .scanners import CardHit, sort_by_bank_code
from .workspace import CaseWorkspace

COORDINATOR_ENV = "FIELDTRIAGE_COORDINATOR"

SUBCOMMANDS = (
    "open", "scan", "rank", "report", "threshold",
    "verify", "serve", "simulate", "metrics",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one-line, machine-parsable
        raise UnknownCommand(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fieldtriage")
    sub = parser.add_subparsers(dest="command")

    p_open = sub.add_parser("open", help="create a workspace and hash the evidence")
    p_open.add_argument("--case", required=True, help="case description file (JSON)")
    p_open.add_argument("--workspace", required=True)
    p_open.add_argument("--member", default=None, help="override the case's member id")
    p_open.add_argument("--coordinator", default=None, help="service address for a DFT file number")

    p_scan = sub.add_parser("scan", help="run the profile's scanners over the evidence")
    p_scan.add_argument("--workspace", required=True)
    p_scan.add_argument("--profile", default=None, help="crime type or profile file")
    p_scan.add_argument("--evidence", default=None, help="scan one source without a case file")
    p_scan.add_argument("--kind", default="raw_image", help="source kind for --evidence")

    p_rank = sub.add_parser("rank", help="prioritize the case's evidence items")
    p_rank.add_argument("--workspace", required=True)

    p_thresh = sub.add_parser("threshold", help="evaluate the forwarding threshold")
    p_thresh.add_argument("--workspace", required=True)
    p_thresh.add_argument("--item", default=None)
    p_thresh.add_argument("--note", default=None, help="prioritization reasoning note")

    p_report = sub.add_parser("report", help="build and render the Observation Report")
    p_report.add_argument("--workspace", required=True)
    p_report.add_argument("--flag", action="append", default=[], help="hit id to flag (repeatable)")
    p_report.add_argument("--notes", default="")
    p_report.add_argument("--format", choices=("structured", "readable"), default="structured")

    p_verify = sub.add_parser("verify", help="re-hash evidence against stored manifests")
    p_verify.add_argument("--workspace", required=True)

    p_serve = sub.add_parser("serve", help="run the coordinator service")
    p_serve.add_argument("--state-dir", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)

    p_sim = sub.add_parser("simulate", help="run the backlog queue model")
    p_sim.add_argument("--config", default=None, help="simulation config file (JSON)")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--out", default=None, help="write the queue-length series as CSV")
    p_sim.add_argument("--compare", action="store_true", help="compare fifo vs severity")

    p_metrics = sub.add_parser("metrics", help="program metrics from the coordinator")
    p_metrics.add_argument("--coordinator", default=None, help="service address")
    p_metrics.add_argument("--state-dir", default=None, help="read a local journal instead")

    return parser


# -- subcommand bodies ---------------------------------------------------------


def _cmd_open(args) -> int:
    case = load_case_file(args.case)
    if args.member:
        case.member_id = args.member
    if not case.dft_file_number:
        address = args.coordinator or os.environ.get(COORDINATOR_ENV)
        if address and case.member_id and case.investigation_id:
            import httpx

            response = httpx.post(
                f"{address.rstrip('/')}/file-numbers",
                json={"member_id": case.member_id, "investigation_id": case.investigation_id},
                timeout=10.0,
            )
            response.raise_for_status()
            case.dft_file_number = response.json()["value"]
    ws = CaseWorkspace.create(args.workspace, case)
    with ws.lock():
        handles = ws.open_all()
    for item_id in sorted(handles):
        handle = handles[item_id]
        size = handle.byte_length if handle.byte_length is not None else handle.entry_count
        print(f"opened {item_id}: {handle.source_kind.value} ({size} bytes/entries)")
    print(f"workspace: {ws.root}")
    return 0


def _cmd_scan(args) -> int:
    root = Path(args.workspace)
    if args.evidence:
        case = _ad_hoc_case(args)
        ws = CaseWorkspace.create(root, case)
    else:
        ws = CaseWorkspace.load(root)
        if args.profile:
            ws.case.profile_name = args.profile
    profile = load_profile(args.profile) if args.profile else ws.profile()
    with ws.lock():
        if not all(ws.manifest_path(i.item_id).exists() for i in ws.case.items if i.item_id in ws.case.sources):
            ws.open_all()
        assessments = ws.scan_all(profile)
        ws.rank()
    total = 0
    for item_id in sorted(assessments):
        assessment = assessments[item_id]
        total += len(assessment.hits)
        print(f"{item_id}: {len(assessment.hits)} hit(s)")
        cards = [h for h in assessment.hits if isinstance(h, CardHit)]
        for code, group in sort_by_bank_code(cards).items():
            pans = ", ".join(f"{h.pan}@{h.location.offset}" for h in group)
            print(f"  bank {code}: {pans}")
    print(f"total hits: {total}")
    return 0


def _ad_hoc_case(args):
    from .casefile import CaseRecord, EvidenceSourceRef
    from .integrity import SourceKind
    from .triage import EvidenceItem

    item_id = Path(args.evidence).stem or "evidence"
    case = CaseRecord(
        case_id=f"adhoc-{item_id}",
        profile_name=args.profile or "generic",
        items=[EvidenceItem(item_id=item_id)],
        sources={item_id: EvidenceSourceRef(path=args.evidence, kind=SourceKind(args.kind))},
    )
    return case


def _cmd_rank(args) -> int:
    ws = CaseWorkspace.load(args.workspace)
    with ws.lock():
        ranked = ws.rank()
    for position, item in enumerate(ranked, start=1):
        print(f"{position}. {item.item_id}  priority={item.priority:.3f}  ({item.description})")
    return 0


def _cmd_threshold(args) -> int:
    ws = CaseWorkspace.load(args.workspace)
    item_ids = [args.item] if args.item else sorted(ws.load_assessments())
    if not item_ids:
        raise NotFound("no assessed items; run scan first")
    with ws.lock():
        for item_id in item_ids:
            decision = ws.decide_threshold(item_id, reasoning_note=args.note)
            print(f"{item_id}: {decision.decision.value}")
            for basis in decision.basis:
                print(f"  basis: {basis}")
    return 0


def _cmd_report(args) -> int:
    ws = CaseWorkspace.load(args.workspace)
    with ws.lock():
        for hit_id in args.flag:
            ws.set_flag(hit_id, True)
        report = ws.build_case_report(notes=args.notes)
    from .report import render_report

    if args.format == "readable":
        sys.stdout.write(render_report(report, "readable").decode("utf-8"))
    print(f"report: {ws.report_path()}")
    return 0


def _cmd_verify(args) -> int:
    ws = CaseWorkspace.load(args.workspace)
    results = ws.verify_all()
    if not results:
        raise NotFound("no manifests recorded; run open first")
    bad = {item: r for item, r in results.items() if not r.ok}
    if not bad:
        print("integrity: ok")
        return 0
    for item, result in bad.items():
        for mismatch in result.mismatches:
            print(f"integrity: MISMATCH {item} {mismatch.key}")
    return 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.state_dir), host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_simulate(args) -> int:
    config = load_sim_config(args.config) if args.config else SimConfig()
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, seed=args.seed)
    if args.compare:
        comparison = compare_disciplines(config)
        print(json.dumps(comparison.to_dict(), sort_keys=True, indent=2))
        return 0
    trace = simulate(config)
    print(
        f"arrivals={trace.arrivals} completions={trace.completions} "
        f"diverted={trace.diverted} final_backlog={trace.final_backlog}"
    )
    for severity, wait in sorted(trace.mean_wait_by_severity.items()):
        print(f"mean_wait[{severity}]={wait:.3f}")
    if args.out:
        Path(args.out).write_text(trace.series_csv(), encoding="utf-8")
        print(f"trace: {args.out}")
    return 0


def _cmd_metrics(args) -> int:
    address = args.coordinator or os.environ.get(COORDINATOR_ENV)
    if address:
        import httpx

        response = httpx.get(f"{address.rstrip('/')}/metrics", timeout=10.0)
        response.raise_for_status()
        print(json.dumps(response.json(), sort_keys=True, indent=2))
        return 0
    if args.state_dir:
        coordinator = Coordinator(Path(args.state_dir) / "coordinator.journal")
        print(json.dumps(coordinator.program_metrics().to_dict(), sort_keys=True, indent=2))
        return 0
    raise UnknownCommand("metrics needs --coordinator or --state-dir")


_HANDLERS = {
    "open": _cmd_open,
    "scan": _cmd_scan,
    "rank": _cmd_rank,
    "threshold": _cmd_threshold,
    "report": _cmd_report,
    "verify": _cmd_verify,
    "serve": _cmd_serve,
    "simulate": _cmd_simulate,
    "metrics": _cmd_metrics,
}


def run_command(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        raise UnknownCommand("missing subcommand; expected one of " + ", ".join(SUBCOMMANDS))
    return _HANDLERS[args.command](args)


def main(argv: list[str] | None = None) -> int:
    try:
        return run_command(list(sys.argv[1:] if argv is None else argv))
    except FieldTriageError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: os.{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
