"""
Traceability audit over loss <- hazard <- UCA <- scenario <- requirement.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from logger import get_logger
from safety_model import Category, DanglingReference, SafetyModel

logger = get_logger()


class FindingSeverity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class AuditFinding:
    severity: FindingSeverity
    kind: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity.value}: {self.message}"


@dataclass(frozen=True)
class TraceAudit:
    """
    Orphans per chain level (no upstream link toward requirements), the
    requirements whose downstream chain breaks on an undeclared id, and the
    dangling references a lenient build recorded.
    """

    orphan_losses: Tuple[str, ...] = ()
    orphan_hazards: Tuple[str, ...] = ()
    orphan_ucas: Tuple[str, ...] = ()
    orphan_scenarios: Tuple[str, ...] = ()
    unreached_requirements: Tuple[str, ...] = ()
    dangling: Tuple[DanglingReference, ...] = ()
    findings: Tuple[AuditFinding, ...] = ()

    @property
    def errors(self) -> List[AuditFinding]:
        return [f for f in self.findings if f.severity is FindingSeverity.ERROR]

    @property
    def warnings(self) -> List[AuditFinding]:
        return [f for f in self.findings if f.severity is FindingSeverity.WARNING]

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)


def _orphans(model: SafetyModel, category: Category, registry) -> Tuple[str, ...]:
    return tuple(e.id for e in registry if not model.referrers(category, e.id))


def _chain_gap(model: SafetyModel, requirement_id: str) -> Optional[str]:
    """First undeclared id on the requirement's downstream walk, if any."""
    requirement = model.requirement(requirement_id)
    for scenario_id in requirement.scenarios:
        scenario = model.scenario(scenario_id)
        if scenario is None:
            return scenario_id
        uca = model.uca(scenario.uca)
        if uca is None:
            return scenario.uca
        for hazard_id in uca.hazards:
            hazard = model.hazard(hazard_id)
            if hazard is None:
                return hazard_id
            for loss_id in hazard.losses:
                if model.loss(loss_id) is None:
                    return loss_id
    return None


def traceability_audit(model: SafetyModel) -> TraceAudit:
    """
    Audit the traceability chain.

    Args:
        model: Built model, possibly from a build that tolerated dangling references

    Returns:
        TraceAudit with deterministic, declaration-ordered findings
    """
    findings: List[AuditFinding] = []

    for reference in model.dangling:
        findings.append(AuditFinding(FindingSeverity.ERROR, "dangling", reference.subject, reference.message))

    unreached: List[str] = []
    for requirement in model.requirements:
        gap = _chain_gap(model, requirement.id)
        if gap is not None:
            unreached.append(requirement.id)
            findings.append(AuditFinding(
                FindingSeverity.ERROR,
                "unreached_requirement",
                requirement.id,
                f"requirement {requirement.id} does not reach a loss: chain breaks at '{gap}'",
            ))

    orphan_losses = _orphans(model, Category.LOSS, model.losses)
    orphan_hazards = _orphans(model, Category.HAZARD, model.hazards)
    orphan_ucas = _orphans(model, Category.UCA, model.ucas)
    orphan_scenarios = _orphans(model, Category.SCENARIO, model.scenarios)

    levels = (
        ("orphan_loss", orphan_losses, "loss {} is not referenced by any hazard"),
        ("orphan_hazard", orphan_hazards, "hazard {} is not referenced by any UCA"),
        ("orphan_uca", orphan_ucas, "UCA {} has no causal scenario"),
        ("orphan_scenario", orphan_scenarios, "scenario {} is not covered by any safety requirement"),
    )
    for kind, ids, template in levels:
        for identifier in ids:
            findings.append(AuditFinding(FindingSeverity.WARNING, kind, identifier, template.format(identifier)))

    audit = TraceAudit(
        orphan_losses=orphan_losses,
        orphan_hazards=orphan_hazards,
        orphan_ucas=orphan_ucas,
        orphan_scenarios=orphan_scenarios,
        unreached_requirements=tuple(unreached),
        dangling=model.dangling,
        findings=tuple(findings),
    )
    logger.info(f"Audit: {len(audit.errors)} errors, {len(audit.warnings)} warnings")
    return audit

