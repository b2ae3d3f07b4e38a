"""
Report bundle: a model snapshot together with every analysis result.
"""
import hashlib
from dataclasses import dataclass
from typing import List, Optional

from analysis import (
    CoverageMetrics,
    LoopFindings,
    SafetyAnalyzer,
    TraceAudit,
    UcaWorksheet,
    Waiver,
)
from dsl_parser import render_canonical
from logger import get_logger
from safety_model import SafetyModel

logger = get_logger()

TOOL_NAME = "unistpa"


@dataclass(frozen=True)
class ReportBundle:
    """Inputs for every exporter. Metadata carries no timestamps."""

    model: SafetyModel
    worksheet: UcaWorksheet
    audit: TraceAudit
    coverage: CoverageMetrics
    loops: LoopFindings
    tool_version: str
    input_digest: str


def input_digest(model: SafetyModel) -> str:
    """sha256 of the canonical model text, prefixed with the algorithm name."""
    canonical = render_canonical(model).encode("utf-8")
    return "sha256:" + hashlib.sha256(canonical).hexdigest()


def build_bundle(
    model: SafetyModel,
    waivers: Optional[List[Waiver]] = None,
    tool_version: Optional[str] = None
) -> ReportBundle:
    """
    Run every analysis and collect the results.

    Args:
        model: Built model
        waivers: Worksheet waivers to apply
        tool_version: Version recorded in metadata; the package version by default

    Returns:
        ReportBundle
    """
    if tool_version is None:
        from app import __version__ as tool_version

    worksheet = SafetyAnalyzer.worksheet(model, waivers)
    bundle = ReportBundle(
        model=model,
        worksheet=worksheet,
        audit=SafetyAnalyzer.audit(model),
        coverage=SafetyAnalyzer.coverage(model, worksheet),
        loops=SafetyAnalyzer.loops(model),
        tool_version=tool_version,
        input_digest=input_digest(model),
    )
    logger.info(f"Built report bundle for '{model.name}' ({bundle.input_digest[:19]})")
    return bundle
