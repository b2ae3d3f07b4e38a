"""
Trace files and decision log output.

Trace format, one reading per line, tokens case-insensitive:

    # step source level
    5 perception degraded
"""
import json
from typing import Any, Dict, List, Sequence

from logger import get_logger

from .types import MonitorReading, MonitorSource, ResponseDecision, RiskLevel

logger = get_logger()

_SOURCES = {source.value: source for source in MonitorSource}
_LEVELS = {level.token: level for level in RiskLevel}


class TraceFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"trace line {line}: {message}")


def load_trace(text: str) -> List[MonitorReading]:
    """
    Parse a trace file.

    Step order is checked when the trace is simulated, not here.

    Args:
        text: Trace file contents

    Returns:
        Readings in file order, each carrying its line number

    Raises:
        TraceFormatError: A line is not `STEP SOURCE LEVEL`
    """
    readings: List[MonitorReading] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) != 3:
            raise TraceFormatError(number, f"expected STEP SOURCE LEVEL, got {len(fields)} field(s)")

        step_text, source_text, level_text = fields
        if not (step_text.isascii() and step_text.isdigit()):
            raise TraceFormatError(number, f"step must be a non-negative integer, got '{step_text}'")
        source = _SOURCES.get(source_text.lower())
        if source is None:
            raise TraceFormatError(
                number, f"unknown monitor source '{source_text}' (expected one of: {', '.join(_SOURCES)})"
            )
        level = _LEVELS.get(level_text.lower())
        if level is None:
            raise TraceFormatError(
                number, f"unknown risk level '{level_text}' (expected one of: {', '.join(_LEVELS)})"
            )
        readings.append(MonitorReading(int(step_text), source, level, line=number))

    logger.debug(f"Loaded trace with {len(readings)} readings")
    return readings


def format_decision_log(decisions: Sequence[ResponseDecision]) -> str:
    """
    One line per step: `STEP RESPONSE [SOURCE->STAGE ...]`.

    Returns:
        Log text with a trailing newline, or "" for no decisions
    """
    lines = []
    for decision in decisions:
        parts = [str(decision.step), decision.response.token]
        parts += [f"{t.source.value}->{t.target_stage.value}" for t in decision.tickets]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n" if lines else ""


def decision_to_dict(decision: ResponseDecision) -> Dict[str, Any]:
    return {
        "step": decision.step,
        "response": decision.response.token,
        "computed": decision.computed.token,
        "risk": decision.risk.token,
        "triggering_sources": [s.value for s in decision.triggering_sources],
        "tickets": [
            {"source": t.source.value, "target_stage": t.target_stage.value, "note": t.note}
            for t in decision.tickets
        ],
    }


def export_decisions(decisions: Sequence[ResponseDecision]) -> str:
    """Decisions as a JSON document (sorted keys, 2-space indent, trailing newline)."""
    document = {"decisions": [decision_to_dict(d) for d in decisions]}
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
