"""
UniSTPA Model Errors
Violation records collected by the model builder and the query exceptions.
"""
from dataclasses import dataclass
from typing import Iterable, Tuple

from .types import Category, EdgeKind, LifecycleStage


@dataclass(frozen=True)
class Violation:
    """Base class for model invariant violations."""

    @property
    def subject(self) -> str:
        """Identifier the violation is reported against."""
        raise NotImplementedError

    @property
    def message(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.message


@dataclass(frozen=True)
class DuplicateId(Violation):
    category: Category
    id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return f"duplicate {self.category.value} id '{self.id}'"


@dataclass(frozen=True)
class InvalidIdentifier(Violation):
    category: Category
    id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return f"invalid {self.category.value} identifier '{self.id}'"


@dataclass(frozen=True)
class DanglingReference(Violation):
    from_id: str
    to_category: Category
    to_id: str

    @property
    def subject(self) -> str:
        return self.from_id

    @property
    def message(self) -> str:
        return f"'{self.from_id}' references undeclared {self.to_category.value} '{self.to_id}'"


@dataclass(frozen=True)
class EmptyLinkSet(Violation):
    id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return f"'{self.id}' must link to at least one upstream element"


@dataclass(frozen=True)
class DuplicateLink(Violation):
    id: str
    to_id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return f"'{self.id}' lists '{self.to_id}' more than once"


@dataclass(frozen=True)
class SelfLoop(Violation):
    node: str
    kind: EdgeKind

    @property
    def subject(self) -> str:
        return self.node

    @property
    def message(self) -> str:
        return f"{self.kind.value} edge from '{self.node}' to itself"


@dataclass(frozen=True)
class StageMismatch(Violation):
    scenario_id: str
    declared_stage: LifecycleStage
    derived_stage: LifecycleStage

    @property
    def subject(self) -> str:
        return self.scenario_id

    @property
    def message(self) -> str:
        return (
            f"scenario '{self.scenario_id}' declares stage {self.declared_stage.value} "
            f"but its UCA belongs to stage {self.derived_stage.value}"
        )


@dataclass(frozen=True)
class DuplicateUcaTriple(Violation):
    id: str
    first_id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return (
            f"UCA '{self.id}' repeats the action, mode and description of '{self.first_id}'"
        )


@dataclass(frozen=True)
class EmptyDescription(Violation):
    category: Category
    id: str

    @property
    def subject(self) -> str:
        return self.id

    @property
    def message(self) -> str:
        return f"{self.category.value} '{self.id}' needs a non-empty description"


@dataclass(frozen=True)
class DuplicateHeader(Violation):
    name: str

    @property
    def subject(self) -> str:
        return self.name

    @property
    def message(self) -> str:
        return f"second model header '{self.name}'"


class ModelError(Exception):
    """Base exception for safety model errors."""
    pass


class ValidationFailure(ModelError):
    """Raised when declarations violate one or more model invariants."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations: Tuple[Violation, ...] = tuple(violations)
        count = len(self.violations)
        summary = "; ".join(v.message for v in self.violations[:3])
        more = f" (+{count - 3} more)" if count > 3 else ""
        super().__init__(f"{count} model violation(s): {summary}{more}")


class UnknownIdError(ModelError, KeyError):
    """Raised when a query names an identifier the model does not declare."""

    def __init__(self, identifier: str, detail: str = "unknown identifier"):
        self.identifier = identifier
        super().__init__(f"{detail}: '{identifier}'")

    def __str__(self) -> str:
        return self.args[0]


class StagelessCategoryError(ModelError):
    """Raised when asking for the stage of a loss, hazard or requirement."""

    def __init__(self, identifier: str, category: Category):
        self.identifier = identifier
        self.category = category
        super().__init__(f"{category.value} '{identifier}' has no lifecycle stage")
