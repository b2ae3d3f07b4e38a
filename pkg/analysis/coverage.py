"""
Coverage metrics over the worksheet and the traceability chain.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional, Set, Tuple

from logger import get_logger
from safety_model import (
    MODE_ORDER,
    STAGE_ORDER,
    FailureMode,
    LifecycleStage,
    ModelError,
    SafetyModel,
    stage_of,
)

from .ratios import Ratio
from .worksheet import UcaWorksheet, uca_worksheet

logger = get_logger()


@dataclass(frozen=True)
class CoverageMetrics:
    uca_mode_coverage: Ratio
    per_stage_uca_counts: Dict[LifecycleStage, int]
    per_mode_uca_counts: Dict[FailureMode, int]
    hazard_mitigation_ratio: Ratio
    loss_mitigation_ratio: Ratio
    unmitigated_hazards: Tuple[str, ...]
    unmitigated_losses: Tuple[str, ...]
    waived_cells: int = 0
    unstaged_ucas: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "uca_mode_coverage": self.uca_mode_coverage.to_dict(),
            "per_stage_uca_counts": {s.value: n for s, n in self.per_stage_uca_counts.items()},
            "per_mode_uca_counts": {m.key: n for m, n in self.per_mode_uca_counts.items()},
            "hazard_mitigation_ratio": self.hazard_mitigation_ratio.to_dict(),
            "loss_mitigation_ratio": self.loss_mitigation_ratio.to_dict(),
            "unmitigated_hazards": list(self.unmitigated_hazards),
            "unmitigated_losses": list(self.unmitigated_losses),
            "waived_cells": self.waived_cells,
            "unstaged_ucas": self.unstaged_ucas,
        }


def mitigated_hazards(model: SafetyModel) -> Set[str]:
    """Hazards reachable from some requirement via scenario -> UCA -> hazard."""
    reached: Set[str] = set()
    for requirement in model.requirements:
        for scenario_id in requirement.scenarios:
            scenario = model.scenario(scenario_id)
            uca = model.uca(scenario.uca) if scenario else None
            if uca is not None:
                reached.update(h for h in uca.hazards if model.hazard(h) is not None)
    return reached


def coverage_metrics(model: SafetyModel, worksheet: Optional[UcaWorksheet] = None) -> CoverageMetrics:
    """
    Compute coverage ratios and UCA tallies.

    Args:
        model: Built model
        worksheet: Worksheet to measure (with waivers applied); built from the
            model when omitted

    Returns:
        CoverageMetrics
    """
    if worksheet is None:
        worksheet = uca_worksheet(model)

    per_stage = {stage: 0 for stage in STAGE_ORDER}
    per_mode = {mode: 0 for mode in MODE_ORDER}
    unstaged = 0
    for uca in model.ucas:
        per_mode[uca.mode] += 1
        try:
            per_stage[stage_of(model, uca.id)] += 1
        except ModelError as e:
            logger.warning(f"No stage for {uca.id}: {e}")
            unstaged += 1

    hazards = mitigated_hazards(model)
    losses: Set[str] = set()
    for hazard_id in hazards:
        losses.update(l for l in model.hazard(hazard_id).losses if model.loss(l) is not None)

    unmitigated_hazards = tuple(h.id for h in model.hazards if h.id not in hazards)
    unmitigated_losses = tuple(l.id for l in model.losses if l.id not in losses)

    metrics = CoverageMetrics(
        uca_mode_coverage=worksheet.coverage(include_waivers=True),
        per_stage_uca_counts=per_stage,
        per_mode_uca_counts=per_mode,
        hazard_mitigation_ratio=Ratio(len(model.hazards) - len(unmitigated_hazards), len(model.hazards)),
        loss_mitigation_ratio=Ratio(len(model.losses) - len(unmitigated_losses), len(model.losses)),
        unmitigated_hazards=unmitigated_hazards,
        unmitigated_losses=unmitigated_losses,
        waived_cells=len(worksheet.waived_cells),
        unstaged_ucas=unstaged,
    )
    logger.info(f"Coverage: hazards {metrics.hazard_mitigation_ratio}, losses {metrics.loss_mitigation_ratio}")
    return metrics
