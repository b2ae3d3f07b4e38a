"""
Runtime Guard Types
Monitor readings, guard state and the tiered response decisions.
"""
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Optional, Tuple

from safety_model import LifecycleStage


class MonitorSource(Enum):
    EGOMOTION = "egomotion"
    PERCEPTION = "perception"
    TRAJECTORY = "trajectory"


SOURCE_ORDER: Tuple[MonitorSource, ...] = tuple(MonitorSource)


class RiskLevel(IntEnum):
    """Discretized monitor output, Nominal < Degraded < Critical."""

    NOMINAL = 0
    DEGRADED = 1
    CRITICAL = 2

    @property
    def token(self) -> str:
        return self.name.lower()


class ResponseLevel(IntEnum):
    """Response tiers in ascending severity. CONTINUE is the no-action tier."""

    CONTINUE = 0
    PERFORMANCE_DEGRADATION = 1
    FUNCTIONAL_ESCALATION = 2
    TAKEOVER_REQUEST = 3
    SYSTEM_DEACTIVATION = 4

    @property
    def token(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class MonitorReading:
    step: int
    source: MonitorSource
    level: RiskLevel
    # Source line in a trace file, when loaded from one
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class GuardState:
    last_levels: Dict[MonitorSource, RiskLevel]
    current_response: ResponseLevel = ResponseLevel.CONTINUE
    hold_counter: int = 0
    critical_streak: int = 0
    step: Optional[int] = None

    @classmethod
    def initial(cls) -> "GuardState":
        return cls(last_levels={source: RiskLevel.NOMINAL for source in SOURCE_ORDER})


@dataclass(frozen=True)
class FeedbackTicket:
    step: int
    source: MonitorSource
    target_stage: LifecycleStage
    note: str


@dataclass(frozen=True)
class ResponseDecision:
    """
    Output of one guard step.

    `computed` is the tier the policy maps the aggregated risk to before
    hysteresis; `response` is what the guard actually commands.
    """

    step: int
    response: ResponseLevel
    computed: ResponseLevel
    risk: RiskLevel
    triggering_sources: Tuple[MonitorSource, ...] = ()
    tickets: Tuple[FeedbackTicket, ...] = ()
