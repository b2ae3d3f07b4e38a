"""
UniSTPA Model Queries
Stage derivation and one-hop traceability lookups over a built model.
"""
from typing import Optional

from .errors import StagelessCategoryError, UnknownIdError
from .model import SafetyModel
from .types import Category, ChainNeighbors, LifecycleStage

STAGED_CATEGORIES = (Category.NODE, Category.ACTION, Category.UCA, Category.SCENARIO)
STAGELESS_CATEGORIES = (Category.LOSS, Category.HAZARD, Category.REQUIREMENT)
CHAIN_CATEGORIES = (
    Category.LOSS,
    Category.HAZARD,
    Category.UCA,
    Category.SCENARIO,
    Category.REQUIREMENT,
)


def _pick_category(
    model: SafetyModel,
    identifier: str,
    candidates: tuple,
    category: Optional[Category]
) -> Optional[Category]:
    if category is not None:
        return category if model.get(category, identifier) is not None else None
    for candidate in candidates:
        if model.get(candidate, identifier) is not None:
            return candidate
    return None


def stage_of(
    model: SafetyModel,
    identifier: str,
    category: Optional[Category] = None
) -> LifecycleStage:
    """
    Lifecycle stage of a node, control action, UCA or causal scenario.

    Args:
        model: Built model
        identifier: Element id
        category: Restrict the lookup to one category (ids are unique per category)

    Returns:
        The element's stage; actions take their controller's, UCAs their action's

    Raises:
        UnknownIdError: The id is not declared
        StagelessCategoryError: The id names a loss, hazard or requirement
    """
    found = _pick_category(model, identifier, STAGED_CATEGORIES, category)
    if found is None or found in STAGELESS_CATEGORIES:
        stageless = _pick_category(model, identifier, STAGELESS_CATEGORIES, category)
        if stageless is not None:
            raise StagelessCategoryError(identifier, stageless)
        raise UnknownIdError(identifier)

    if found is Category.NODE:
        return model.node(identifier).stage
    if found is Category.SCENARIO:
        return model.scenario(identifier).stage
    if found is Category.ACTION:
        controller = model.action(identifier).controller
        if model.node(controller) is None:
            raise UnknownIdError(controller, "unresolved controller")
        return model.node(controller).stage

    action = model.uca(identifier).action
    if model.action(action) is None:
        raise UnknownIdError(action, "unresolved control action")
    return stage_of(model, action, Category.ACTION)


def resolve_chain_neighbors(
    model: SafetyModel,
    identifier: str,
    category: Optional[Category] = None
) -> ChainNeighbors:
    """
    Ids linked one hop along loss <- hazard <- UCA <- scenario <- requirement.

    Upstream points toward requirements, downstream toward losses.

    Args:
        model: Built model
        identifier: A loss, hazard, UCA, scenario or requirement id
        category: Restrict the lookup to one category

    Returns:
        ChainNeighbors with both directions in declaration order

    Raises:
        UnknownIdError: The id is not a traceability chain element
    """
    found = _pick_category(model, identifier, CHAIN_CATEGORIES, category)
    if found is None or found not in CHAIN_CATEGORIES:
        raise UnknownIdError(identifier, "not a traceability chain element")

    upstream = tuple(model.referrers(found, identifier))
    if found is Category.LOSS:
        downstream: tuple = ()
    elif found is Category.HAZARD:
        downstream = model.hazard(identifier).losses
    elif found is Category.UCA:
        downstream = model.uca(identifier).hazards
    elif found is Category.SCENARIO:
        downstream = (model.scenario(identifier).uca,)
    else:
        downstream = model.requirement(identifier).scenarios

    return ChainNeighbors(upstream=upstream, downstream=tuple(downstream))
