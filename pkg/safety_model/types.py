"""
UniSTPA Domain Types
Losses, hazards, control structure elements and the traceability chain entities.
"""
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Tuple

IDENTIFIER_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_.-]*")


def is_identifier(text: str) -> bool:
    """Check that text is a legal model identifier."""
    return isinstance(text, str) and IDENTIFIER_PATTERN.fullmatch(text) is not None


@total_ordering
class LifecycleStage(Enum):
    """The five development lifecycle stages, in development-time order."""

    IG = "IG"
    DP = "DP"
    LT = "LT"
    VF = "VF"
    DT = "DT"

    @property
    def display_name(self) -> str:
        return STAGE_NAMES[self]

    @property
    def rank(self) -> int:
        return STAGE_ORDER.index(self)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, LifecycleStage):
            return NotImplemented
        return self.rank < other.rank


STAGE_ORDER: Tuple[LifecycleStage, ...] = tuple(LifecycleStage)

STAGE_NAMES = {
    LifecycleStage.IG: "Information Gathering",
    LifecycleStage.DP: "Data Preparation",
    LifecycleStage.LT: "Closed Loop Training",
    LifecycleStage.VF: "Verification",
    LifecycleStage.DT: "Deployment",
}


class FailureMode(Enum):
    """UCA failure modes. Values are the DSL spellings."""

    NOT_PROVIDED = "not_provided"
    PROVIDED_IMPROPERLY = "provided_improperly"
    MISTIMED_PROVISION = "mistimed"
    INAPPROPRIATE_DURATION = "inappropriate_duration"

    @property
    def key(self) -> str:
        """CamelCase name used in metrics and structured output."""
        return MODE_KEYS[self]

    @property
    def label(self) -> str:
        """Human-readable name used in tables."""
        return MODE_LABELS[self]


MODE_ORDER: Tuple[FailureMode, ...] = tuple(FailureMode)

MODE_KEYS = {
    FailureMode.NOT_PROVIDED: "NotProvided",
    FailureMode.PROVIDED_IMPROPERLY: "ProvidedImproperly",
    FailureMode.MISTIMED_PROVISION: "MistimedProvision",
    FailureMode.INAPPROPRIATE_DURATION: "InappropriateDuration",
}

MODE_LABELS = {
    FailureMode.NOT_PROVIDED: "Not Provided",
    FailureMode.PROVIDED_IMPROPERLY: "Provided Improperly",
    FailureMode.MISTIMED_PROVISION: "Mistimed Provision",
    FailureMode.INAPPROPRIATE_DURATION: "Inappropriate Duration",
}


class NodeKind(Enum):
    """Whether a control-structure node is a technical module or a human."""

    TECHNICAL = "technical"
    HUMAN = "human"


class EdgeKind(Enum):
    """Control action or feedback information."""

    CONTROL = "control"
    FEEDBACK = "feedback"


class Category(Enum):
    """Identifier namespaces. Uniqueness is enforced per category."""

    MODEL = "model"
    LOSS = "loss"
    HAZARD = "hazard"
    NODE = "node"
    ACTION = "action"
    UCA = "uca"
    SCENARIO = "scenario"
    REQUIREMENT = "requirement"


@dataclass(frozen=True)
class ModelHeader:
    """The `model "name"` header declaration."""

    name: str


@dataclass(frozen=True)
class Loss:
    id: str
    description: str
    safety_critical: bool = True


@dataclass(frozen=True)
class Hazard:
    id: str
    description: str
    losses: Tuple[str, ...]


@dataclass(frozen=True)
class Node:
    id: str
    stage: LifecycleStage
    kind: NodeKind
    label: str


@dataclass(frozen=True)
class Edge:
    """A directed control or feedback edge between two nodes."""

    source: str
    target: str
    kind: EdgeKind
    label: str = ""


@dataclass(frozen=True)
class ControlAction:
    id: str
    controller: str
    name: str


@dataclass(frozen=True)
class Uca:
    id: str
    action: str
    mode: FailureMode
    hazards: Tuple[str, ...]
    description: str


@dataclass(frozen=True)
class CausalScenario:
    id: str
    uca: str
    stage: LifecycleStage
    description: str


@dataclass(frozen=True)
class SafetyRequirement:
    id: str
    scenarios: Tuple[str, ...]
    description: str


@dataclass(frozen=True)
class ChainNeighbors:
    """Directly linked ids one hop up (toward requirements) and down (toward losses)."""

    upstream: Tuple[str, ...] = field(default_factory=tuple)
    downstream: Tuple[str, ...] = field(default_factory=tuple)


# Declaration type -> identifier category
DECLARATION_CATEGORIES = {
    Loss: Category.LOSS,
    Hazard: Category.HAZARD,
    Node: Category.NODE,
    ControlAction: Category.ACTION,
    Uca: Category.UCA,
    CausalScenario: Category.SCENARIO,
    SafetyRequirement: Category.REQUIREMENT,
}
