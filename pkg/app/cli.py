"""
UniSTPA Command Line Interface

Exit codes: 0 success, 1 analysis findings, 2 parse or validation failure,
3 I/O or usage error. Results go to stdout; diagnostics and logs to stderr.
"""
import argparse
import sys
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

from analysis import Direction, SafetyAnalyzer, WaiverError
from config import ConfigError
from logger import get_logger
from reports import REPORT_FORMATS
from runtime_guard import (
    ROUTING_TABLE,
    NonMonotonicStepError,
    PolicyError,
    TraceFormatError,
    export_decisions,
    format_decision_log,
)
from safety_model import UnknownIdError

from . import __version__
from .core import ModelLoad, UniStpaApp

logger = get_logger()

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_INVALID = 2
EXIT_USAGE = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_USAGE instead of argparse's 2."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _listing(ids: Iterable[str]) -> str:
    ids = list(ids)
    return ", ".join(ids) if ids else "none"


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="unistpa", description="UniSTPA safety analysis as code")
    parser.add_argument("--version", action="version", version=f"unistpa {__version__}")
    parser.add_argument("--config", type=str, default=None, help="Path to configuration file")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level to stderr")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    check = commands.add_parser("check", help="Parse and validate a model")
    check.add_argument("model", help="Model file (.ustpa)")

    ucas = commands.add_parser("ucas", help="Print the UCA worksheet and its gaps")
    ucas.add_argument("model")
    ucas.add_argument("--waivers", type=str, help="Waiver file for undocumented cells")
    ucas.add_argument("--strict", action="store_true", help="Exit 1 on unwaived gaps")

    audit = commands.add_parser("audit", help="Audit traceability from losses to requirements")
    audit.add_argument("model")
    audit.add_argument("--strict", action="store_true", help="Exit 1 on warnings too")

    coverage = commands.add_parser("coverage", help="Print coverage metrics")
    coverage.add_argument("model")

    trace = commands.add_parser("trace", help="Walk the traceability chain from an id")
    trace.add_argument("model")
    trace.add_argument("--from", dest="origin", required=True, help="Origin id")
    trace.add_argument("--dir", dest="direction", required=True, choices=["up", "down"])

    report = commands.add_parser("report", help="Write report files")
    report.add_argument("model")
    report.add_argument("--out", required=True, help="Output directory")
    report.add_argument("--format", default="all", choices=sorted(REPORT_FORMATS) + ["all"])

    simulate = commands.add_parser("simulate", help="Replay a monitor trace through the runtime guard")
    simulate.add_argument("model")
    simulate.add_argument("--trace", required=True, help="Trace file")
    simulate.add_argument("--policy", help="Policy file")
    simulate.add_argument("--log", help="Also write the decision log to this file")
    simulate.add_argument("--format", default="log", choices=["log", "structured"])

    return parser


def _report_load_failure(load: ModelLoad) -> int:
    for diagnostic in load.document.diagnostics:
        _err(diagnostic.render(load.path))
    for violation in load.violations:
        _err(f"{load.path}: error: {violation.message}")
    return EXIT_INVALID


def _load(app: UniStpaApp, path: str, tolerate_dangling: bool = False) -> ModelLoad:
    """Load a model and print its parse warnings."""
    load = app.load_model(path, tolerate_dangling)
    if load.ok:
        for diagnostic in load.document.warnings:
            _err(diagnostic.render(path))
    return load


def cmd_check(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    counts = load.model.counts()
    print(
        f"ok: {counts['losses']} losses, {counts['hazards']} hazards, {counts['ucas']} ucas, "
        f"{counts['scenarios']} scenarios, {counts['requirements']} requirements"
    )
    return EXIT_OK


def cmd_ucas(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    waivers = app.load_waivers(args.waivers) if args.waivers else None
    sheet = SafetyAnalyzer.worksheet(load.model, waivers)

    if sheet.actions:
        print(sheet.to_frame().to_string())
    else:
        print("no control actions")
    print()
    print(f"coverage: {sheet.coverage()}")
    print(f"documented: {len(sheet.documented_cells)}, waived: {len(sheet.waived_cells)}, gaps: {len(sheet.gaps)}")
    for cell in sheet.gaps:
        print(f"gap: {cell.action} {cell.mode.value}")
    for cell in sheet.waived_cells:
        print(f"waived: {cell.action} {cell.mode.value} \"{cell.waiver}\"")
    for note in sheet.waiver_notes:
        print(f"waiver note: {note}")

    strict = args.strict or app.strict
    if strict and (sheet.gaps or sheet.waiver_notes):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_audit(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model, tolerate_dangling=True)
    if not load.ok:
        return _report_load_failure(load)
    audit = SafetyAnalyzer.audit(load.model)

    print(f"orphan losses: {_listing(audit.orphan_losses)}")
    print(f"orphan hazards: {_listing(audit.orphan_hazards)}")
    print(f"orphan ucas: {_listing(audit.orphan_ucas)}")
    print(f"orphan scenarios: {_listing(audit.orphan_scenarios)}")
    print(f"unreached requirements: {_listing(audit.unreached_requirements)}")
    print(f"dangling references: {len(audit.dangling)}")
    for finding in audit.findings:
        print(str(finding))
    print(f"{len(audit.errors)} error(s), {len(audit.warnings)} warning(s)")

    if audit.has_errors:
        return EXIT_FINDINGS
    if (args.strict or app.strict) and audit.warnings:
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_coverage(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    metrics = SafetyAnalyzer.coverage(load.model)

    print(f"uca mode coverage: {metrics.uca_mode_coverage}")
    print(f"hazard mitigation: {metrics.hazard_mitigation_ratio}")
    print(f"unmitigated: {_listing(metrics.unmitigated_hazards)}")
    print(f"loss mitigation: {metrics.loss_mitigation_ratio}")
    print(f"unmitigated losses: {_listing(metrics.unmitigated_losses)}")
    print()
    print(metrics_frame_text(metrics))
    return EXIT_OK


def metrics_frame_text(metrics) -> str:
    """UCA tallies per stage and per failure mode as aligned tables."""
    stages = pd.DataFrame(
        {"UCAs": list(metrics.per_stage_uca_counts.values())},
        index=pd.Index([s.value for s in metrics.per_stage_uca_counts], name="Stage"),
    )
    modes = pd.DataFrame(
        {"UCAs": list(metrics.per_mode_uca_counts.values())},
        index=pd.Index([m.key for m in metrics.per_mode_uca_counts], name="Failure Mode"),
    )
    return stages.to_string() + "\n\n" + modes.to_string()


def cmd_trace(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    direction = Direction.UPSTREAM if args.direction == "up" else Direction.DOWNSTREAM
    try:
        chain = SafetyAnalyzer.trace(load.model, args.origin, direction)
    except UnknownIdError as e:
        _err(f"error: {e}")
        return EXIT_USAGE

    for path in chain.paths:
        print(" -> ".join(path))
    for path in chain.truncated_paths:
        print("truncated: " + " -> ".join(path))
    print(f"{len(chain.paths)} path(s), {len(chain.truncated_paths)} truncated")
    return EXIT_OK


def cmd_report(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    bundle = app.bundle(load.model)
    written = app.write_reports(bundle, args.out, app.report_formats(args.format), args.model)
    if written is None:
        return EXIT_USAGE
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_simulate(app: UniStpaApp, args: argparse.Namespace) -> int:
    load = _load(app, args.model)
    if not load.ok:
        return _report_load_failure(load)
    try:
        policy = app.load_policy(args.policy)
        decisions = app.simulate(args.trace, policy)
    except (PolicyError, TraceFormatError, NonMonotonicStepError) as e:
        _err(f"error: {e}")
        return EXIT_INVALID

    staged = {n.stage for n in load.model.nodes}
    for source, stage in ROUTING_TABLE.items():
        if stage not in staged:
            logger.warning(f"{source.value} feedback routes to {stage.value}, which has no nodes in the model")

    log_text = format_decision_log(decisions)
    if args.log:
        try:
            Path(args.log).write_text(log_text, encoding="utf-8")
        except OSError as e:
            logger.error(f"Error writing decision log to {args.log}: {e}")
            return EXIT_USAGE
    sys.stdout.write(log_text if args.format == "log" else export_decisions(decisions))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "ucas": cmd_ucas,
    "audit": cmd_audit,
    "coverage": cmd_coverage,
    "trace": cmd_trace,
    "report": cmd_report,
    "simulate": cmd_simulate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None

    Returns:
        Exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        app = UniStpaApp(args.config, verbose=args.verbose)
    except ConfigError as e:
        logger.error(str(e))
        _err(f"error: {e}")
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](app, args)
    except WaiverError as e:
        _err(f"error: {e}")
        return EXIT_INVALID
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"I/O error: {e}")
        _err(f"error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
