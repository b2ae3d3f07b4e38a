"""
Runtime Guard
Aggregates monitor readings into tiered responses with hysteresis and routes
feedback tickets to lifecycle stages.
"""
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

from logger import get_logger
from safety_model import LifecycleStage

from .policy import GuardPolicy
from .types import (
    SOURCE_ORDER,
    FeedbackTicket,
    GuardState,
    MonitorReading,
    MonitorSource,
    ResponseDecision,
    ResponseLevel,
    RiskLevel,
)

logger = get_logger()

ROUTING_TABLE: Dict[MonitorSource, LifecycleStage] = {
    MonitorSource.EGOMOTION: LifecycleStage.DP,
    MonitorSource.PERCEPTION: LifecycleStage.LT,
    MonitorSource.TRAJECTORY: LifecycleStage.VF,
}

TICKET_NOTES: Dict[MonitorSource, str] = {
    MonitorSource.EGOMOTION: "guide sensor calibration and fusion optimization",
    MonitorSource.PERCEPTION: "inform model architecture and training improvements",
    MonitorSource.TRAJECTORY: "refine the validation scenario library",
}


class NonMonotonicStepError(ValueError):
    """A reading's step is below a step already processed."""

    def __init__(self, step: int, previous: int, index: Optional[int] = None, line: Optional[int] = None):
        self.step = step
        self.previous = previous
        self.index = index
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif index is not None:
            where = f" (reading {index})"
        super().__init__(f"step {step} is below previous step {previous}{where}")


def route_feedback(source: MonitorSource) -> LifecycleStage:
    """Lifecycle stage that receives feedback from a monitor."""
    return ROUTING_TABLE[source]


def aggregate_risk(levels: Dict[MonitorSource, RiskLevel]) -> Tuple[RiskLevel, int]:
    """
    Maximum risk over all sources and how many sources sit at it.

    Raises:
        ValueError: A source is missing from the map
    """
    missing = [s.value for s in SOURCE_ORDER if s not in levels]
    if missing:
        raise ValueError(f"no level for monitor source(s): {', '.join(missing)}")
    highest = max(levels[s] for s in SOURCE_ORDER)
    return highest, sum(1 for s in SOURCE_ORDER if levels[s] is highest)


def _next_response(state: GuardState, computed: ResponseLevel, hold: int) -> Tuple[ResponseLevel, int]:
    current = state.current_response
    if current is ResponseLevel.SYSTEM_DEACTIVATION:
        return current, 0
    if computed >= current:
        return computed, 0
    held = state.hold_counter + 1
    if held >= hold:
        return ResponseLevel(current - 1), 0
    return current, held


def decide_step(
    state: GuardState,
    policy: GuardPolicy,
    readings: Sequence[MonitorReading]
) -> Tuple[GuardState, ResponseDecision]:
    """
    Advance the guard by one step.

    Sources without a reading keep their last level. Several readings for
    one source in the same step count at their maximum. Escalation applies
    at once; de-escalation drops one tier after `deescalation_hold`
    consecutive steps computed below the current tier. SystemDeactivation
    is absorbing.

    Args:
        state: Guard state before the step
        policy: Guard policy
        readings: Non-empty readings sharing one step

    Returns:
        Tuple of (new state, decision)

    Raises:
        ValueError: No readings, or readings from different steps
        NonMonotonicStepError: The step is below the state's last step
    """
    if not readings:
        raise ValueError("decide_step needs at least one reading")
    step = readings[0].step
    if any(r.step != step for r in readings):
        raise ValueError("readings passed to decide_step must share one step")
    if state.step is not None and step < state.step:
        raise NonMonotonicStepError(step, state.step, line=readings[0].line)

    observed: Dict[MonitorSource, RiskLevel] = {}
    for reading in readings:
        observed[reading.source] = max(observed.get(reading.source, reading.level), reading.level)
    levels = {**state.last_levels, **observed}

    risk, count = aggregate_risk(levels)
    streak = state.critical_streak + 1 if risk is RiskLevel.CRITICAL else 0
    computed = policy.response_for(risk, count, streak)
    response, hold = _next_response(state, computed, policy.deescalation_hold)

    triggering = tuple(s for s in SOURCE_ORDER if levels[s] is risk) if risk > RiskLevel.NOMINAL else ()
    tickets = tuple(
        FeedbackTicket(step, s, route_feedback(s), TICKET_NOTES[s])
        for s in SOURCE_ORDER
        if levels[s] >= RiskLevel.DEGRADED
    )

    if response > state.current_response:
        sources = ", ".join(s.value for s in triggering)
        logger.info(f"step {step}: {state.current_response.token} -> {response.token} ({sources})")
    elif response < state.current_response:
        logger.debug(f"step {step}: stepped down to {response.token}")

    new_state = replace(
        state,
        last_levels=levels,
        current_response=response,
        hold_counter=hold,
        critical_streak=streak,
        step=step,
    )
    return new_state, ResponseDecision(step, response, computed, risk, triggering, tickets)


def simulate_trace(
    trace: Sequence[MonitorReading],
    policy: GuardPolicy,
    state: Optional[GuardState] = None
) -> List[ResponseDecision]:
    """
    Replay a trace through the guard.

    Args:
        trace: Readings with non-decreasing steps
        policy: Guard policy
        state: Starting state; a fresh all-Nominal state when None

    Returns:
        One decision per distinct step, in step order

    Raises:
        NonMonotonicStepError: A reading's step decreases; carries its index and line
    """
    state = state or GuardState.initial()
    decisions: List[ResponseDecision] = []
    group: List[MonitorReading] = []

    for index, reading in enumerate(trace):
        if group and reading.step < group[0].step:
            raise NonMonotonicStepError(reading.step, group[0].step, index, reading.line)
        if group and reading.step != group[0].step:
            state, decision = decide_step(state, policy, group)
            decisions.append(decision)
            group = []
        group.append(reading)
    if group:
        state, decision = decide_step(state, policy, group)
        decisions.append(decision)

    if decisions and decisions[-1].response is ResponseLevel.SYSTEM_DEACTIVATION:
        logger.warning(f"Trace ended in system deactivation at step {decisions[-1].step}")
    logger.info(f"Simulated {len(trace)} readings into {len(decisions)} decisions")
    return decisions
