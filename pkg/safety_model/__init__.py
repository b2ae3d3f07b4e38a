"""
UniSTPA Safety Model Module
Domain types and the validated, immutable SafetyModel.
"""
from .builder import build_model, try_build_model
from .errors import (
    DanglingReference,
    DuplicateHeader,
    DuplicateId,
    DuplicateLink,
    DuplicateUcaTriple,
    EmptyDescription,
    EmptyLinkSet,
    InvalidIdentifier,
    ModelError,
    SelfLoop,
    StageMismatch,
    StagelessCategoryError,
    UnknownIdError,
    ValidationFailure,
    Violation,
)
from .model import SafetyModel
from .queries import resolve_chain_neighbors, stage_of
from .types import (
    MODE_ORDER,
    STAGE_ORDER,
    CausalScenario,
    Category,
    ChainNeighbors,
    ControlAction,
    Edge,
    EdgeKind,
    FailureMode,
    Hazard,
    LifecycleStage,
    Loss,
    ModelHeader,
    Node,
    NodeKind,
    SafetyRequirement,
    Uca,
    is_identifier,
)

__all__ = [
    "build_model",
    "try_build_model",
    "stage_of",
    "resolve_chain_neighbors",
    "SafetyModel",
    "ModelHeader",
    "Loss",
    "Hazard",
    "Node",
    "Edge",
    "ControlAction",
    "Uca",
    "CausalScenario",
    "SafetyRequirement",
    "ChainNeighbors",
    "LifecycleStage",
    "FailureMode",
    "NodeKind",
    "EdgeKind",
    "Category",
    "STAGE_ORDER",
    "MODE_ORDER",
    "is_identifier",
    "Violation",
    "DuplicateId",
    "DuplicateHeader",
    "DuplicateLink",
    "DuplicateUcaTriple",
    "InvalidIdentifier",
    "DanglingReference",
    "EmptyLinkSet",
    "EmptyDescription",
    "SelfLoop",
    "StageMismatch",
    "ModelError",
    "ValidationFailure",
    "UnknownIdError",
    "StagelessCategoryError",
]
