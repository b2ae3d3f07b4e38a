"""
Control-loop structure checks over the control structure graph.
"""
from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx

from logger import get_logger
from safety_model import Edge, EdgeKind, SafetyModel

logger = get_logger()


@dataclass(frozen=True)
class LoopFindings:
    controllers_without_feedback: Tuple[str, ...] = ()
    unreachable_nodes: Tuple[str, ...] = ()
    cross_stage_edges: Tuple[Edge, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.controllers_without_feedback and not self.unreachable_nodes


def is_cross_stage(model: SafetyModel, edge: Edge) -> bool:
    """True when the endpoints sit in different lifecycle stages."""
    source, target = model.node(edge.source), model.node(edge.target)
    return source is not None and target is not None and source.stage is not target.stage


def _feedback_graph(model: SafetyModel) -> nx.DiGraph:
    """
    Product of the control structure with a "feedback used" flag.

    State (n, seen) reaches (m, True) iff some path n -> m crosses at least
    one feedback edge (or seen was already True).
    """
    graph = nx.DiGraph()
    for edge in model.edges:
        if model.node(edge.source) is None or model.node(edge.target) is None:
            continue
        feedback = edge.kind is EdgeKind.FEEDBACK
        for seen in (False, True):
            graph.add_edge((edge.source, seen), (edge.target, seen or feedback))
    return graph


def control_loop_audit(model: SafetyModel) -> LoopFindings:
    """
    Find open control loops, isolated nodes and cross-stage edges.

    A controller's loop is closed when any path from a node it controls leads
    back to it through at least one feedback edge.

    Args:
        model: Built model

    Returns:
        LoopFindings in declaration order
    """
    graph = _feedback_graph(model)

    controlled: dict = {}
    for edge in model.edges:
        if edge.kind is EdgeKind.CONTROL and (edge.source, False) in graph:
            controlled.setdefault(edge.source, []).append(edge.target)

    open_loops: List[str] = []
    for node in model.nodes:
        targets = controlled.get(node.id)
        if not targets:
            continue
        goal = (node.id, True)
        closed = goal in graph and any(nx.has_path(graph, (t, False), goal) for t in targets)
        if not closed:
            open_loops.append(node.id)

    touched = {e.source for e in model.edges} | {e.target for e in model.edges}
    isolated = tuple(n.id for n in model.nodes if n.id not in touched)
    cross = tuple(e for e in model.edges if is_cross_stage(model, e))

    findings = LoopFindings(tuple(open_loops), isolated, cross)
    logger.info(
        f"Control loops: {len(findings.controllers_without_feedback)} open, "
        f"{len(isolated)} isolated nodes, {len(cross)} cross-stage edges"
    )
    return findings
