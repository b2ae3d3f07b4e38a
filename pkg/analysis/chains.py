"""
Transitive traceability queries.

The chain graph points downstream: requirement -> scenario -> UCA -> hazard
-> loss. Graph nodes are (category, id) pairs since ids are unique per
category only.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import networkx as nx

from logger import get_logger
from safety_model import Category, SafetyModel, UnknownIdError

logger = get_logger()

# Upstream (requirements) first
CHAIN_LEVELS: Tuple[Category, ...] = (
    Category.REQUIREMENT,
    Category.SCENARIO,
    Category.UCA,
    Category.HAZARD,
    Category.LOSS,
)

ChainKey = Tuple[Category, str]


class Direction(Enum):
    UPSTREAM = "up"
    DOWNSTREAM = "down"


@dataclass(frozen=True)
class TraceChain:
    """
    Maximal paths from an origin, origin first.

    `paths` end at the chain's far end (losses downstream, requirements
    upstream); `truncated_paths` dead-end earlier at an orphan or a broken link.
    """

    origin: str
    category: Category
    direction: Direction
    paths: Tuple[Tuple[str, ...], ...] = ()
    truncated_paths: Tuple[Tuple[str, ...], ...] = ()

    def _level(self, position: int) -> Category:
        start = CHAIN_LEVELS.index(self.category)
        step = 1 if self.direction is Direction.DOWNSTREAM else -1
        return CHAIN_LEVELS[start + step * position]

    def reached(self, category: Optional[Category] = None) -> List[str]:
        """Distinct ids reached (origin excluded), first-seen order, optionally one level only."""
        seen: Dict[str, None] = {}
        for path in self.paths + self.truncated_paths:
            for position, identifier in enumerate(path[1:], start=1):
                if category is None or self._level(position) is category:
                    seen.setdefault(identifier, None)
        return list(seen)


def build_chain_graph(model: SafetyModel) -> nx.DiGraph:
    """
    Traceability chain as a DAG of declared elements.

    Links to undeclared ids are left out, so a lenient model's broken links
    show up as dead ends.
    """
    graph = nx.DiGraph()
    registries = (
        (Category.REQUIREMENT, model.requirements),
        (Category.SCENARIO, model.scenarios),
        (Category.UCA, model.ucas),
        (Category.HAZARD, model.hazards),
        (Category.LOSS, model.losses),
    )
    order = 0
    for category, registry in registries:
        for element in registry:
            graph.add_node((category, element.id), order=order)
            order += 1

    def link(source: ChainKey, category: Category, targets) -> None:
        for target in targets:
            if (category, target) in graph:
                graph.add_edge(source, (category, target))

    for requirement in model.requirements:
        link((Category.REQUIREMENT, requirement.id), Category.SCENARIO, requirement.scenarios)
    for scenario in model.scenarios:
        link((Category.SCENARIO, scenario.id), Category.UCA, (scenario.uca,))
    for uca in model.ucas:
        link((Category.UCA, uca.id), Category.HAZARD, uca.hazards)
    for hazard in model.hazards:
        link((Category.HAZARD, hazard.id), Category.LOSS, hazard.losses)
    return graph


def _resolve_origin(model: SafetyModel, origin: str, category: Optional[Category]) -> Category:
    candidates = (category,) if category is not None else tuple(reversed(CHAIN_LEVELS))
    for candidate in candidates:
        if candidate in CHAIN_LEVELS and model.get(candidate, origin) is not None:
            return candidate
    raise UnknownIdError(origin, "not a traceability chain element")


def trace_chain(
    model: SafetyModel,
    origin: str,
    direction: Direction,
    category: Optional[Category] = None,
    graph: Optional[nx.DiGraph] = None
) -> TraceChain:
    """
    Walk the traceability chain transitively from an origin.

    Args:
        model: Built model
        origin: Loss, hazard, UCA, scenario or requirement id
        direction: DOWNSTREAM toward losses, UPSTREAM toward requirements
        category: Disambiguates ids declared in several categories
        graph: Prebuilt chain graph to reuse across queries

    Returns:
        TraceChain whose paths are ordered by declaration order of their elements

    Raises:
        UnknownIdError: origin is not a chain element
    """
    found = _resolve_origin(model, origin, category)
    if graph is None:
        graph = build_chain_graph(model)
    walk = graph if direction is Direction.DOWNSTREAM else graph.reverse(copy=False)
    far_end = Category.LOSS if direction is Direction.DOWNSTREAM else Category.REQUIREMENT

    start = (found, origin)
    sinks = [n for n in nx.descendants(walk, start) if walk.out_degree(n) == 0]
    if not sinks and found is not far_end:
        sinks_paths: List[List[ChainKey]] = [[start]]
    else:
        sinks_paths = [p for sink in sinks for p in nx.all_simple_paths(walk, start, sink)]

    def sort_key(path: List[ChainKey]) -> Tuple[int, ...]:
        return tuple(graph.nodes[n]["order"] for n in path)

    complete, truncated = [], []
    for path in sorted(sinks_paths, key=sort_key):
        ids = tuple(identifier for _, identifier in path)
        (complete if path[-1][0] is far_end else truncated).append(ids)

    logger.debug(f"trace {origin} {direction.value}: {len(complete)} paths, {len(truncated)} truncated")
    return TraceChain(origin, found, direction, tuple(complete), tuple(truncated))
