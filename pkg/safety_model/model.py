"""
UniSTPA Safety Model
Immutable registry of a validated analysis with resolved cross-references.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .errors import DanglingReference
from .types import (
    CausalScenario,
    Category,
    ControlAction,
    Edge,
    Hazard,
    Loss,
    ModelHeader,
    Node,
    SafetyRequirement,
    Uca,
)


@dataclass(frozen=True)
class SafetyModel:
    """
    A validated UniSTPA model.

    Registries keep declaration order. Equality compares the name and every
    registry; the lookup indexes are derived and excluded.
    """

    name: str = ""
    losses: Tuple[Loss, ...] = ()
    hazards: Tuple[Hazard, ...] = ()
    nodes: Tuple[Node, ...] = ()
    edges: Tuple[Edge, ...] = ()
    actions: Tuple[ControlAction, ...] = ()
    ucas: Tuple[Uca, ...] = ()
    scenarios: Tuple[CausalScenario, ...] = ()
    requirements: Tuple[SafetyRequirement, ...] = ()
    # Only populated by a build that tolerates dangling references
    dangling: Tuple[DanglingReference, ...] = ()

    _index: Dict[Category, Dict[str, Any]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )
    _referrers: Dict[Tuple[Category, str], List[str]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index = {
            Category.LOSS: {e.id: e for e in self.losses},
            Category.HAZARD: {e.id: e for e in self.hazards},
            Category.NODE: {e.id: e for e in self.nodes},
            Category.ACTION: {e.id: e for e in self.actions},
            Category.UCA: {e.id: e for e in self.ucas},
            Category.SCENARIO: {e.id: e for e in self.scenarios},
            Category.REQUIREMENT: {e.id: e for e in self.requirements},
        }
        referrers: Dict[Tuple[Category, str], List[str]] = defaultdict(list)
        for hazard in self.hazards:
            for loss_id in hazard.losses:
                referrers[(Category.LOSS, loss_id)].append(hazard.id)
        for uca in self.ucas:
            for hazard_id in uca.hazards:
                referrers[(Category.HAZARD, hazard_id)].append(uca.id)
        for scenario in self.scenarios:
            referrers[(Category.UCA, scenario.uca)].append(scenario.id)
        for requirement in self.requirements:
            for scenario_id in requirement.scenarios:
                referrers[(Category.SCENARIO, scenario_id)].append(requirement.id)

        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_referrers", dict(referrers))

    def get(self, category: Category, identifier: str) -> Optional[Any]:
        """
        Look up a declared element.

        Args:
            category: Identifier category
            identifier: Element id

        Returns:
            The element, or None if not declared
        """
        return self._index.get(category, {}).get(identifier)

    def categories_of(self, identifier: str) -> List[Category]:
        """All categories declaring the identifier (ids are unique per category only)."""
        return [c for c, entries in self._index.items() if identifier in entries]

    def referrers(self, category: Category, identifier: str) -> List[str]:
        """Ids one chain level up that reference the given element, in declaration order."""
        return list(self._referrers.get((category, identifier), ()))

    def loss(self, identifier: str) -> Optional[Loss]:
        return self.get(Category.LOSS, identifier)

    def hazard(self, identifier: str) -> Optional[Hazard]:
        return self.get(Category.HAZARD, identifier)

    def node(self, identifier: str) -> Optional[Node]:
        return self.get(Category.NODE, identifier)

    def action(self, identifier: str) -> Optional[ControlAction]:
        return self.get(Category.ACTION, identifier)

    def uca(self, identifier: str) -> Optional[Uca]:
        return self.get(Category.UCA, identifier)

    def scenario(self, identifier: str) -> Optional[CausalScenario]:
        return self.get(Category.SCENARIO, identifier)

    def requirement(self, identifier: str) -> Optional[SafetyRequirement]:
        return self.get(Category.REQUIREMENT, identifier)

    def counts(self) -> Dict[str, int]:
        """Registry sizes keyed by category name."""
        return {
            "losses": len(self.losses),
            "hazards": len(self.hazards),
            "nodes": len(self.nodes),
            "edges": len(self.edges),
            "actions": len(self.actions),
            "ucas": len(self.ucas),
            "scenarios": len(self.scenarios),
            "requirements": len(self.requirements),
        }

    def declarations(self) -> List[Any]:
        """
        Extract raw declarations that rebuild this model.

        Returns:
            Header followed by every registry in canonical category order
        """
        result: List[Any] = [ModelHeader(self.name)]
        for registry in (
            self.losses,
            self.hazards,
            self.nodes,
            self.edges,
            self.actions,
            self.ucas,
            self.scenarios,
            self.requirements,
        ):
            result.extend(registry)
        return result
