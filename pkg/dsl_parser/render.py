"""
UniSTPA Canonical Renderer
Writes a SafetyModel back to deterministic .ustpa text.
"""
from typing import Iterable, List

from safety_model import SafetyModel

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r"}


def quote(text: str) -> str:
    """Quote a string literal, escaping only what the lexer requires."""
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


def id_list(ids: Iterable[str]) -> str:
    return "[" + " ".join(ids) + "]"


def render_canonical(model: SafetyModel) -> str:
    """
    Render a model as canonical UniSTPA text.

    One statement per line, registries in declaration order, attributes in
    grammar order, LF line endings.

    Args:
        model: Valid model

    Returns:
        Canonical source text
    """
    lines: List[str] = [f"model {quote(model.name)}"]

    for loss in model.losses:
        line = f"loss {loss.id} {quote(loss.description)}"
        if not loss.safety_critical:
            line += " critical=false"
        lines.append(line)

    for hazard in model.hazards:
        lines.append(f"hazard {hazard.id} {quote(hazard.description)} losses={id_list(hazard.losses)}")

    for node in model.nodes:
        lines.append(
            f"node {node.id} stage={node.stage.value} kind={node.kind.value} {quote(node.label)}"
        )

    for edge in model.edges:
        line = f"edge {edge.kind.value} {edge.source} -> {edge.target}"
        if edge.label:
            line += f" {quote(edge.label)}"
        lines.append(line)

    for action in model.actions:
        lines.append(f"action {action.id} controller={action.controller} {quote(action.name)}")

    for uca in model.ucas:
        lines.append(
            f"uca {uca.id} action={uca.action} mode={uca.mode.value} "
            f"hazards={id_list(uca.hazards)} {quote(uca.description)}"
        )

    for scenario in model.scenarios:
        lines.append(
            f"scenario {scenario.id} uca={scenario.uca} stage={scenario.stage.value} "
            f"{quote(scenario.description)}"
        )

    for requirement in model.requirements:
        lines.append(
            f"requirement {requirement.id} scenarios={id_list(requirement.scenarios)} "
            f"{quote(requirement.description)}"
        )

    return "\n".join(lines) + "\n"
