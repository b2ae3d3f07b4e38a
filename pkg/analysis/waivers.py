"""
Worksheet waivers: explicit, reasoned sign-off for undocumented cells.

File format, one waiver per line, `#` comments allowed:

    CA-DP1 inappropriate_duration "sensor acquisition is continuous"
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

from dsl_parser import TokenKind, tokenize
from logger import get_logger
from safety_model import FailureMode

from .worksheet import UcaWorksheet

logger = get_logger()

_MODES_BY_NAME = {}
for _mode in FailureMode:
    _MODES_BY_NAME[_mode.value] = _mode
    _MODES_BY_NAME[_mode.key] = _mode


@dataclass(frozen=True)
class Waiver:
    action: str
    mode: FailureMode
    reason: str
    line: int


class WaiverError(Exception):
    """Malformed waiver file line."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"waivers line {line}: {message}")


def load_waivers(text: str) -> List[Waiver]:
    """
    Parse a waiver file.

    Args:
        text: Waiver file contents

    Returns:
        Waivers in file order

    Raises:
        WaiverError: A line is not `ACTION MODE "reason"`
    """
    waivers: List[Waiver] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens, diagnostics = tokenize(raw)
        if not tokens and not diagnostics:
            continue
        if diagnostics:
            raise WaiverError(number, diagnostics[0].message)

        kinds = [t.kind for t in tokens]
        if len(tokens) != 3 or not tokens[0].is_word or not tokens[1].is_word or kinds[2] is not TokenKind.STRING:
            raise WaiverError(number, 'expected ACTION MODE "reason"')

        mode = _MODES_BY_NAME.get(tokens[1].value)
        if mode is None:
            legal = ", ".join(m.value for m in FailureMode)
            raise WaiverError(number, f"unknown failure mode '{tokens[1].value}' (expected one of: {legal})")
        if not tokens[2].value.strip():
            raise WaiverError(number, "waiver reason must not be empty")

        waivers.append(Waiver(tokens[0].value, mode, tokens[2].value, number))

    logger.debug(f"Loaded {len(waivers)} waivers")
    return waivers


def apply_waivers(worksheet: UcaWorksheet, waivers: List[Waiver]) -> UcaWorksheet:
    """
    Mark undocumented worksheet cells as waived.

    Waivers naming an unknown action, a documented cell or an already waived
    cell are not applied; each one is recorded in `waiver_notes`.

    Args:
        worksheet: Worksheet from uca_worksheet
        waivers: Parsed waivers

    Returns:
        New worksheet with waived cells
    """
    known = set(worksheet.actions)
    waived: Dict[Tuple[str, FailureMode], str] = {}
    notes: List[str] = []

    for waiver in waivers:
        key = (waiver.action, waiver.mode)
        where = f"line {waiver.line}"
        if waiver.action not in known:
            notes.append(f"{where}: unknown control action '{waiver.action}', waiver ignored")
        elif worksheet.cell(*key).documented:
            notes.append(
                f"{where}: {waiver.action} / {waiver.mode.label} is already documented, waiver ignored"
            )
        elif key in waived:
            notes.append(f"{where}: {waiver.action} / {waiver.mode.label} waived twice, waiver ignored")
        else:
            waived[key] = waiver.reason

    for note in notes:
        logger.warning(note)
    logger.info(f"Applied {len(waived)} of {len(waivers)} waivers")
    return worksheet.with_waivers(waived, notes)
