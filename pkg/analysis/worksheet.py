"""
UCA Worksheet
Control action x failure mode matrix with documented, waived and gap cells.
"""
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import pandas as pd

from logger import get_logger
from safety_model import MODE_ORDER, FailureMode, SafetyModel

from .ratios import Ratio

logger = get_logger()

GAP_MARK = "-"
WAIVED_MARK = "waived"


@dataclass(frozen=True)
class WorksheetCell:
    action: str
    mode: FailureMode
    ucas: Tuple[str, ...] = ()
    waiver: Optional[str] = None

    @property
    def documented(self) -> bool:
        return bool(self.ucas)

    @property
    def waived(self) -> bool:
        return self.waiver is not None

    @property
    def gap(self) -> bool:
        """Undocumented and not waived."""
        return not self.documented and not self.waived


@dataclass(frozen=True)
class UcaWorksheet:
    """
    One row per control action in declaration order, one column per failure
    mode in MODE_ORDER. Cells are stored row-major.
    """

    actions: Tuple[str, ...]
    action_names: Tuple[str, ...]
    cells: Tuple[WorksheetCell, ...]
    # Waivers that were rejected when applied (unknown action, documented cell)
    waiver_notes: Tuple[str, ...] = ()

    def cell(self, action: str, mode: FailureMode) -> WorksheetCell:
        row = self.actions.index(action)
        return self.cells[row * len(MODE_ORDER) + MODE_ORDER.index(mode)]

    def column(self, mode: FailureMode) -> List[WorksheetCell]:
        return [c for c in self.cells if c.mode is mode]

    @property
    def documented_cells(self) -> List[WorksheetCell]:
        return [c for c in self.cells if c.documented]

    @property
    def waived_cells(self) -> List[WorksheetCell]:
        return [c for c in self.cells if c.waived]

    @property
    def gaps(self) -> List[WorksheetCell]:
        return [c for c in self.cells if c.gap]

    def coverage(self, include_waivers: bool = True) -> Ratio:
        """Share of cells that are documented (plus waived, unless excluded)."""
        covered = len(self.documented_cells)
        if include_waivers:
            covered += len(self.waived_cells)
        return Ratio(covered, len(self.cells))

    def with_waivers(self, waived: Dict[Tuple[str, FailureMode], str], notes: List[str]) -> "UcaWorksheet":
        cells = tuple(
            replace(c, waiver=waived[(c.action, c.mode)]) if (c.action, c.mode) in waived else c
            for c in self.cells
        )
        return replace(self, cells=cells, waiver_notes=self.waiver_notes + tuple(notes))

    def to_frame(self) -> pd.DataFrame:
        """
        Worksheet as a DataFrame indexed by action id.

        Documented cells list their UCA ids, waived cells read "waived" and
        gaps read "-".
        """
        rows = []
        for row, action in enumerate(self.actions):
            record = {"Control Action": self.action_names[row]}
            for cell in self.cells[row * len(MODE_ORDER):(row + 1) * len(MODE_ORDER)]:
                if cell.documented:
                    value = " ".join(cell.ucas)
                elif cell.waived:
                    value = WAIVED_MARK
                else:
                    value = GAP_MARK
                record[cell.mode.label] = value
            rows.append(record)
        columns = ["Control Action"] + [mode.label for mode in MODE_ORDER]
        return pd.DataFrame(rows, index=pd.Index(list(self.actions), name="ID"), columns=columns)


def uca_worksheet(model: SafetyModel) -> UcaWorksheet:
    """
    Cross every control action with the four failure modes.

    Args:
        model: Built model

    Returns:
        UcaWorksheet whose documented cells partition the model's UCAs
    """
    by_cell: Dict[Tuple[str, FailureMode], List[str]] = {}
    for uca in model.ucas:
        by_cell.setdefault((uca.action, uca.mode), []).append(uca.id)

    cells = [
        WorksheetCell(action.id, mode, tuple(by_cell.get((action.id, mode), ())))
        for action in model.actions
        for mode in MODE_ORDER
    ]
    worksheet = UcaWorksheet(
        actions=tuple(a.id for a in model.actions),
        action_names=tuple(a.name for a in model.actions),
        cells=tuple(cells),
    )
    logger.info(
        f"Worksheet: {len(cells)} cells, {len(worksheet.documented_cells)} documented"
    )
    return worksheet
