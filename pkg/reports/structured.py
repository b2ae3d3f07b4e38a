"""
Structured (JSON) export of a report bundle and the matching importer.
"""
import json
from typing import Any, Dict, List

from analysis import is_cross_stage
from logger import get_logger
from safety_model import (
    MODE_ORDER,
    CausalScenario,
    ControlAction,
    Edge,
    EdgeKind,
    FailureMode,
    Hazard,
    LifecycleStage,
    Loss,
    ModelHeader,
    Node,
    NodeKind,
    SafetyModel,
    SafetyRequirement,
    Uca,
    build_model,
)

from .bundle import TOOL_NAME, ReportBundle

logger = get_logger()

_MODES_BY_KEY = {mode.key: mode for mode in FailureMode}


def dump_json(document: Any) -> str:
    """Sorted keys, 2-space indent, LF, trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def model_to_dict(model: SafetyModel) -> Dict[str, Any]:
    """Registries as arrays in declaration order."""
    return {
        "name": model.name,
        "losses": [
            {"id": l.id, "description": l.description, "safety_critical": l.safety_critical}
            for l in model.losses
        ],
        "hazards": [
            {"id": h.id, "description": h.description, "losses": list(h.losses)}
            for h in model.hazards
        ],
        "nodes": [
            {"id": n.id, "stage": n.stage.value, "kind": n.kind.value, "label": n.label}
            for n in model.nodes
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "kind": e.kind.value,
                "label": e.label,
                "cross_stage": is_cross_stage(model, e),
            }
            for e in model.edges
        ],
        "actions": [
            {"id": a.id, "controller": a.controller, "name": a.name}
            for a in model.actions
        ],
        "ucas": [
            {
                "id": u.id,
                "action": u.action,
                "mode": u.mode.key,
                "hazards": list(u.hazards),
                "description": u.description,
            }
            for u in model.ucas
        ],
        "scenarios": [
            {"id": s.id, "uca": s.uca, "stage": s.stage.value, "description": s.description}
            for s in model.scenarios
        ],
        "requirements": [
            {"id": r.id, "scenarios": list(r.scenarios), "description": r.description}
            for r in model.requirements
        ],
    }


def bundle_to_dict(bundle: ReportBundle) -> Dict[str, Any]:
    document = model_to_dict(bundle.model)
    worksheet = bundle.worksheet
    audit = bundle.audit
    loops = bundle.loops

    document["metadata"] = {
        "tool": TOOL_NAME,
        "tool_version": bundle.tool_version,
        "input_digest": bundle.input_digest,
    }
    document["worksheet"] = {
        "columns": [mode.key for mode in MODE_ORDER],
        "rows": [
            {
                "action": action,
                "cells": {
                    cell.mode.key: {"ucas": list(cell.ucas), "waiver": cell.waiver}
                    for cell in worksheet.cells
                    if cell.action == action
                },
            }
            for action in worksheet.actions
        ],
        "waiver_notes": list(worksheet.waiver_notes),
    }
    document["audit"] = {
        "orphan_losses": list(audit.orphan_losses),
        "orphan_hazards": list(audit.orphan_hazards),
        "orphan_ucas": list(audit.orphan_ucas),
        "orphan_scenarios": list(audit.orphan_scenarios),
        "unreached_requirements": list(audit.unreached_requirements),
        "findings": [
            {"severity": f.severity.value, "kind": f.kind, "subject": f.subject, "message": f.message}
            for f in audit.findings
        ],
    }
    document["coverage"] = bundle.coverage.to_dict()
    document["control_loops"] = {
        "controllers_without_feedback": list(loops.controllers_without_feedback),
        "unreachable_nodes": list(loops.unreachable_nodes),
        "cross_stage_edges": [
            {"source": e.source, "target": e.target, "kind": e.kind.value}
            for e in loops.cross_stage_edges
        ],
    }
    return document


def export_structured(bundle: ReportBundle) -> str:
    """
    Render a bundle as one JSON document.

    Args:
        bundle: Report bundle

    Returns:
        Deterministic JSON text
    """
    return dump_json(bundle_to_dict(bundle))


def import_structured(text: str, tolerate_dangling: bool = False) -> SafetyModel:
    """
    Rebuild a model from a structured export.

    Analysis sections and derived fields are ignored.

    Args:
        text: JSON produced by export_structured
        tolerate_dangling: Build leniently, as for auditing

    Returns:
        SafetyModel equal to the exported one

    Raises:
        ValueError: Not a structured export (bad JSON, missing keys, unknown enum values)
        ValidationFailure: The declarations violate model invariants
    """
    try:
        document = json.loads(text)
        declarations: List[Any] = [ModelHeader(document["name"])]
        declarations += [
            Loss(d["id"], d["description"], bool(d.get("safety_critical", True)))
            for d in document["losses"]
        ]
        declarations += [Hazard(d["id"], d["description"], tuple(d["losses"])) for d in document["hazards"]]
        declarations += [
            Node(d["id"], LifecycleStage(d["stage"]), NodeKind(d["kind"]), d["label"])
            for d in document["nodes"]
        ]
        declarations += [
            Edge(d["source"], d["target"], EdgeKind(d["kind"]), d.get("label", ""))
            for d in document["edges"]
        ]
        declarations += [ControlAction(d["id"], d["controller"], d["name"]) for d in document["actions"]]
        declarations += [
            Uca(d["id"], d["action"], _MODES_BY_KEY[d["mode"]], tuple(d["hazards"]), d["description"])
            for d in document["ucas"]
        ]
        declarations += [
            CausalScenario(d["id"], d["uca"], LifecycleStage(d["stage"]), d["description"])
            for d in document["scenarios"]
        ]
        declarations += [
            SafetyRequirement(d["id"], tuple(d["scenarios"]), d["description"])
            for d in document["requirements"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"not a structured UniSTPA export: {e!r}") from e

    logger.debug(f"Imported {len(declarations)} declarations from structured export")
    return build_model(declarations, tolerate_dangling=tolerate_dangling)
