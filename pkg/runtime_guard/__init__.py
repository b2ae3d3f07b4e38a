"""
UniSTPA Runtime Guard Module
Deterministic safety monitor and tiered response simulator.
"""
from .guard import (
    ROUTING_TABLE,
    NonMonotonicStepError,
    aggregate_risk,
    decide_step,
    route_feedback,
    simulate_trace,
)
from .policy import DEFAULT_RULES, PATTERNS, GuardPolicy, PolicyError, load_policy, pattern_for
from .traces import TraceFormatError, export_decisions, format_decision_log, load_trace
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

__all__ = [
    "aggregate_risk",
    "decide_step",
    "route_feedback",
    "simulate_trace",
    "load_policy",
    "load_trace",
    "format_decision_log",
    "export_decisions",
    "pattern_for",
    "GuardPolicy",
    "GuardState",
    "MonitorReading",
    "MonitorSource",
    "RiskLevel",
    "ResponseLevel",
    "ResponseDecision",
    "FeedbackTicket",
    "ROUTING_TABLE",
    "SOURCE_ORDER",
    "DEFAULT_RULES",
    "PATTERNS",
    "NonMonotonicStepError",
    "PolicyError",
    "TraceFormatError",
]
