"""
UniSTPA Model Builder
Assembles raw declarations into a validated SafetyModel, collecting every violation.
"""
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from logger import get_logger

from .errors import (
    DanglingReference,
    DuplicateHeader,
    DuplicateId,
    DuplicateLink,
    DuplicateUcaTriple,
    EmptyDescription,
    EmptyLinkSet,
    InvalidIdentifier,
    SelfLoop,
    StageMismatch,
    ValidationFailure,
    Violation,
)
from .model import SafetyModel
from .types import (
    DECLARATION_CATEGORIES,
    Category,
    Edge,
    LifecycleStage,
    ModelHeader,
    is_identifier,
)

logger = get_logger()


class _Collector:
    """Accumulates violations and, in lenient mode, diverts dangling references."""

    def __init__(self, tolerate_dangling: bool):
        self.tolerate_dangling = tolerate_dangling
        self.violations: List[Violation] = []
        self.dangling: List[DanglingReference] = []

    def add(self, violation: Violation) -> None:
        if self.tolerate_dangling and isinstance(violation, DanglingReference):
            self.dangling.append(violation)
        else:
            self.violations.append(violation)


def build_model(
    declarations: Sequence[Any],
    tolerate_dangling: bool = False
) -> SafetyModel:
    """
    Validate declarations and assemble a SafetyModel.

    Every violation is collected before failing; nothing is partially built.

    Args:
        declarations: Ordered raw declarations (ModelHeader, Loss, Hazard, Node,
            Edge, ControlAction, Uca, CausalScenario, SafetyRequirement)
        tolerate_dangling: Keep unresolved references on the model instead of
            failing (used by the traceability audit)

    Returns:
        The validated model

    Raises:
        ValidationFailure: Listing all violations found
    """
    collector = _Collector(tolerate_dangling)
    name = ""
    header_seen = False
    registries: Dict[Category, List[Any]] = {c: [] for c in DECLARATION_CATEGORIES.values()}
    edges: List[Edge] = []
    seen_ids: Dict[Category, set] = {c: set() for c in registries}

    # Pass 1: identifiers
    for decl in declarations:
        if isinstance(decl, ModelHeader):
            if header_seen:
                collector.add(DuplicateHeader(decl.name))
            else:
                name = decl.name
                header_seen = True
            continue
        if isinstance(decl, Edge):
            edges.append(decl)
            continue
        category = DECLARATION_CATEGORIES.get(type(decl))
        if category is None:
            raise TypeError(f"Unsupported declaration: {decl!r}")
        if not is_identifier(decl.id):
            collector.add(InvalidIdentifier(category, decl.id))
            continue
        if decl.id in seen_ids[category]:
            collector.add(DuplicateId(category, decl.id))
            continue
        seen_ids[category].add(decl.id)
        registries[category].append(decl)

    known = {c: {e.id: e for e in entries} for c, entries in registries.items()}

    def resolve(from_id: str, category: Category, to_id: str) -> bool:
        if to_id in known[category]:
            return True
        collector.add(DanglingReference(from_id, category, to_id))
        return False

    def check_links(owner: str, category: Category, links: Tuple[str, ...]) -> None:
        if not links:
            collector.add(EmptyLinkSet(owner))
            return
        seen = set()
        for link in links:
            if link in seen:
                collector.add(DuplicateLink(owner, link))
                continue
            seen.add(link)
            resolve(owner, category, link)

    # Pass 2: references and per-entity invariants
    for loss in registries[Category.LOSS]:
        if not loss.description.strip():
            collector.add(EmptyDescription(Category.LOSS, loss.id))

    for hazard in registries[Category.HAZARD]:
        check_links(hazard.id, Category.LOSS, hazard.losses)

    for edge in edges:
        if edge.source == edge.target:
            collector.add(SelfLoop(edge.source, edge.kind))
            continue
        edge_ref = f"{edge.source}->{edge.target}"
        resolve(edge_ref, Category.NODE, edge.source)
        resolve(edge_ref, Category.NODE, edge.target)

    for action in registries[Category.ACTION]:
        resolve(action.id, Category.NODE, action.controller)

    triples: Dict[Tuple[str, Any, str], str] = {}
    for uca in registries[Category.UCA]:
        resolve(uca.id, Category.ACTION, uca.action)
        check_links(uca.id, Category.HAZARD, uca.hazards)
        triple = (uca.action, uca.mode, uca.description)
        if triple in triples:
            collector.add(DuplicateUcaTriple(uca.id, triples[triple]))
        else:
            triples[triple] = uca.id

    for scenario in registries[Category.SCENARIO]:
        if not resolve(scenario.id, Category.UCA, scenario.uca):
            continue
        derived = _derived_uca_stage(known, scenario.uca)
        if derived is not None and derived != scenario.stage:
            collector.add(StageMismatch(scenario.id, scenario.stage, derived))

    for requirement in registries[Category.REQUIREMENT]:
        check_links(requirement.id, Category.SCENARIO, requirement.scenarios)

    if collector.violations:
        logger.info(f"Model '{name}' rejected with {len(collector.violations)} violation(s)")
        raise ValidationFailure(collector.violations)

    model = SafetyModel(
        name=name,
        losses=tuple(registries[Category.LOSS]),
        hazards=tuple(registries[Category.HAZARD]),
        nodes=tuple(registries[Category.NODE]),
        edges=tuple(edges),
        actions=tuple(registries[Category.ACTION]),
        ucas=tuple(registries[Category.UCA]),
        scenarios=tuple(registries[Category.SCENARIO]),
        requirements=tuple(registries[Category.REQUIREMENT]),
        dangling=tuple(collector.dangling),
    )
    logger.info(
        f"Built model '{name}': {len(model.losses)} losses, {len(model.hazards)} hazards, "
        f"{len(model.ucas)} UCAs, {len(model.scenarios)} scenarios, "
        f"{len(model.requirements)} requirements"
    )
    return model


def _derived_uca_stage(
    known: Dict[Category, Dict[str, Any]],
    uca_id: str
) -> Optional[LifecycleStage]:
    """Stage of a UCA's controller, or None when the chain to it is unresolved."""
    uca = known[Category.UCA].get(uca_id)
    action = known[Category.ACTION].get(uca.action) if uca else None
    node = known[Category.NODE].get(action.controller) if action else None
    return node.stage if node else None


def try_build_model(
    declarations: Iterable[Any],
    tolerate_dangling: bool = False
) -> Tuple[Optional[SafetyModel], Tuple[Violation, ...]]:
    """
    Non-raising variant of build_model.

    Returns:
        Tuple of (model or None, violations)
    """
    try:
        return build_model(list(declarations), tolerate_dangling), ()
    except ValidationFailure as e:
        return None, e.violations
