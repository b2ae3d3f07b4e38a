"""
UniSTPA Analysis Module
Worksheet, traceability audit, coverage, chain queries and control-loop checks.
"""
from typing import List, Optional

from logger import get_logger
from safety_model import SafetyModel

from .audit import AuditFinding, FindingSeverity, TraceAudit, traceability_audit
from .chains import CHAIN_LEVELS, Direction, TraceChain, build_chain_graph, trace_chain
from .coverage import CoverageMetrics, coverage_metrics, mitigated_hazards
from .loops import LoopFindings, control_loop_audit, is_cross_stage
from .ratios import Ratio
from .waivers import Waiver, WaiverError, apply_waivers, load_waivers
from .worksheet import UcaWorksheet, WorksheetCell, uca_worksheet

logger = get_logger()

__all__ = [
    "SafetyAnalyzer",
    "uca_worksheet",
    "traceability_audit",
    "coverage_metrics",
    "trace_chain",
    "control_loop_audit",
    "load_waivers",
    "apply_waivers",
    "build_chain_graph",
    "mitigated_hazards",
    "is_cross_stage",
    "UcaWorksheet",
    "WorksheetCell",
    "TraceAudit",
    "AuditFinding",
    "FindingSeverity",
    "CoverageMetrics",
    "TraceChain",
    "Direction",
    "CHAIN_LEVELS",
    "LoopFindings",
    "Ratio",
    "Waiver",
    "WaiverError",
]


class SafetyAnalyzer:
    """Runs the analysis passes over one model."""

    @staticmethod
    def worksheet(model: SafetyModel, waivers: Optional[List[Waiver]] = None) -> UcaWorksheet:
        """
        Build the UCA worksheet, applying waivers when given.

        Args:
            model: Built model
            waivers: Parsed waiver entries

        Returns:
            UcaWorksheet
        """
        sheet = uca_worksheet(model)
        if waivers:
            sheet = apply_waivers(sheet, waivers)
        return sheet

    @staticmethod
    def audit(model: SafetyModel) -> TraceAudit:
        return traceability_audit(model)

    @staticmethod
    def coverage(model: SafetyModel, worksheet: Optional[UcaWorksheet] = None) -> CoverageMetrics:
        return coverage_metrics(model, worksheet)

    @staticmethod
    def trace(model: SafetyModel, origin: str, direction: Direction) -> TraceChain:
        return trace_chain(model, origin, direction)

    @staticmethod
    def loops(model: SafetyModel) -> LoopFindings:
        return control_loop_audit(model)
