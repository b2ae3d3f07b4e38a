"""
Pipe-delimited Markdown report mirroring the analysis tables.
"""
from typing import Iterable, List, Sequence

from .bundle import ReportBundle

LOSS_HEADER = ("ID", "Description", "Safety-Critical")
HAZARD_HEADER = ("ID", "Hazard", "Losses")
UCA_HEADER = ("ID", "Control Action", "Description", "Failure Mode", "Hazards")
SCENARIO_HEADER = ("Stage", "UCA ID", "Causal Scenario ID", "Causal Scenario")
REQUIREMENT_HEADER = ("Safety Requirement ID", "Causal Scenario ID", "Safety Requirement")

SECTION_TITLES = (
    "List of Losses",
    "System-Level Hazards and Corresponding Losses",
    "Unsafe Control Actions and Associated System Hazards",
    "Causal Scenarios for Unsafe Control Actions",
    "Safety Requirements Based on Causal Scenarios",
    "Analysis Findings",
)


def _cell(text: str) -> str:
    return text.replace("\\", "\\\\").replace("|", "\\|").replace("\r", " ").replace("\n", " ")


def _table(title: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> List[str]:
    lines = [f"## {title}", "", "| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(_cell(v) for v in row) + " |" for row in rows]
    lines.append("")
    return lines


def _joined(ids: Sequence[str]) -> str:
    return ", ".join(ids) if ids else "none"


def render_tables(bundle: ReportBundle) -> str:
    """
    Render the five analysis tables and a findings section.

    Args:
        bundle: Report bundle

    Returns:
        Markdown text, LF line endings
    """
    model = bundle.model
    lines = [
        f"# UniSTPA Report: {_cell(model.name)}",
        "",
        f"Generated by unistpa {bundle.tool_version}, input {bundle.input_digest}",
        "",
    ]

    lines += _table(SECTION_TITLES[0], LOSS_HEADER, (
        (l.id, l.description, "yes" if l.safety_critical else "no") for l in model.losses
    ))
    lines += _table(SECTION_TITLES[1], HAZARD_HEADER, (
        (h.id, h.description, ", ".join(h.losses)) for h in model.hazards
    ))

    def action_name(action_id: str) -> str:
        action = model.action(action_id)
        return action.name if action is not None else action_id

    lines += _table(SECTION_TITLES[2], UCA_HEADER, (
        (u.id, action_name(u.action), u.description, u.mode.label, ", ".join(u.hazards))
        for u in model.ucas
    ))
    lines += _table(SECTION_TITLES[3], SCENARIO_HEADER, (
        (s.stage.display_name, s.uca, s.id, s.description) for s in model.scenarios
    ))
    lines += _table(SECTION_TITLES[4], REQUIREMENT_HEADER, (
        (r.id, ", ".join(r.scenarios), r.description) for r in model.requirements
    ))

    lines += [f"## {SECTION_TITLES[5]}", ""]
    lines += _findings(bundle)
    return "\n".join(lines) + "\n"


def _findings(bundle: ReportBundle) -> List[str]:
    model = bundle.model
    worksheet = bundle.worksheet
    audit = bundle.audit
    coverage = bundle.coverage
    loops = bundle.loops

    lines = [
        f"- uca mode coverage: {coverage.uca_mode_coverage}",
        f"- documented cells: {len(worksheet.documented_cells)}",
        f"- waived cells: {len(worksheet.waived_cells)}",
        f"- worksheet gaps: {len(worksheet.gaps)}",
    ]
    for cell in worksheet.gaps:
        lines.append(f"  - gap: {cell.action} / {cell.mode.label}")
    for cell in worksheet.waived_cells:
        lines.append(f"  - waived: {cell.action} / {cell.mode.label}: {_cell(cell.waiver)}")
    for note in worksheet.waiver_notes:
        lines.append(f"  - waiver note: {_cell(note)}")

    per_stage = ", ".join(f"{s.value}: {n}" for s, n in coverage.per_stage_uca_counts.items())
    per_mode = ", ".join(f"{m.key}: {n}" for m, n in coverage.per_mode_uca_counts.items())
    lines += [
        f"- ucas per stage: {per_stage}",
        f"- ucas per failure mode: {per_mode}",
    ]
    if coverage.unstaged_ucas:
        lines.append(f"- ucas without a stage: {coverage.unstaged_ucas}")
    lines += [
        f"- hazard mitigation: {coverage.hazard_mitigation_ratio}",
        f"- unmitigated hazards: {_joined(coverage.unmitigated_hazards)}",
        f"- loss mitigation: {coverage.loss_mitigation_ratio}",
        f"- unmitigated losses: {_joined(coverage.unmitigated_losses)}",
        f"- orphan losses: {_joined(audit.orphan_losses)}",
        f"- orphan hazards: {_joined(audit.orphan_hazards)}",
        f"- orphan ucas: {_joined(audit.orphan_ucas)}",
        f"- orphan scenarios: {_joined(audit.orphan_scenarios)}",
        f"- unreached requirements: {_joined(audit.unreached_requirements)}",
        f"- dangling references: {len(audit.dangling)}",
    ]
    for reference in audit.dangling:
        lines.append(f"  - {_cell(reference.message)}")

    lines += [
        f"- controllers without feedback: {_joined(loops.controllers_without_feedback)}",
        f"- unreachable nodes: {_joined(loops.unreachable_nodes)}",
        f"- cross-stage edges: {len(loops.cross_stage_edges)}",
    ]
    for edge in loops.cross_stage_edges:
        stages = f"{model.node(edge.source).stage.value} -> {model.node(edge.target).stage.value}"
        lines.append(f"  - {edge.kind.value} {edge.source} -> {edge.target} ({stages})")
    return lines
