"""
Tests for the runtime guard: risk aggregation, tiered responses with
hysteresis, feedback routing, policies and trace files.
"""
import itertools
import json
import random

import pytest

from conftest import POLICIES, TRACES
from runtime_guard import (
    DEFAULT_RULES,
    PATTERNS,
    ROUTING_TABLE,
    SOURCE_ORDER,
    GuardPolicy,
    GuardState,
    MonitorReading,
    MonitorSource,
    NonMonotonicStepError,
    PolicyError,
    ResponseLevel,
    RiskLevel,
    TraceFormatError,
    aggregate_risk,
    decide_step,
    export_decisions,
    format_decision_log,
    load_policy,
    load_trace,
    pattern_for,
    route_feedback,
    simulate_trace,
)
from safety_model import LifecycleStage

EGO, PER, TRAJ = MonitorSource.EGOMOTION, MonitorSource.PERCEPTION, MonitorSource.TRAJECTORY
NOMINAL, DEGRADED, CRITICAL = RiskLevel.NOMINAL, RiskLevel.DEGRADED, RiskLevel.CRITICAL
R = ResponseLevel


def replay(name, policy=None):
    readings = load_trace((TRACES / name).read_text(encoding="utf-8"))
    return simulate_trace(readings, policy or GuardPolicy())


def step_readings(step, **levels):
    return [MonitorReading(step, MonitorSource(source), level) for source, level in levels.items()]


class TestAggregation:
    def test_max_and_count(self):
        assert aggregate_risk({EGO: NOMINAL, PER: DEGRADED, TRAJ: DEGRADED}) == (DEGRADED, 2)
        assert aggregate_risk({EGO: CRITICAL, PER: DEGRADED, TRAJ: NOMINAL}) == (CRITICAL, 1)
        assert aggregate_risk({EGO: NOMINAL, PER: NOMINAL, TRAJ: NOMINAL}) == (NOMINAL, 3)

    def test_missing_source(self):
        with pytest.raises(ValueError):
            aggregate_risk({EGO: NOMINAL, PER: NOMINAL})

    def test_patterns(self):
        assert pattern_for(NOMINAL, 3) == "nominal"
        assert pattern_for(DEGRADED, 1) == "degraded:1"
        assert pattern_for(DEGRADED, 3) == "degraded:2"
        assert pattern_for(CRITICAL, 2) == "critical:2"

    def test_routing(self):
        assert route_feedback(EGO) is LifecycleStage.DP
        assert route_feedback(PER) is LifecycleStage.LT
        assert route_feedback(TRAJ) is LifecycleStage.VF


class TestScenarios:
    def test_all_nominal(self):
        decisions = replay("all_nominal_100.trace")
        assert len(decisions) == 100
        assert {d.response for d in decisions} == {R.CONTINUE}
        assert all(d.tickets == () for d in decisions)

    def test_single_trajectory_critical(self):
        [decision] = replay("trajectory_critical_single.trace")
        assert decision.response is R.TAKEOVER_REQUEST
        assert decision.triggering_sources == (TRAJ,)
        assert [(t.source, t.target_stage) for t in decision.tickets] == [(TRAJ, LifecycleStage.VF)]

    def test_sustained_critical_deactivates(self):
        decisions = replay("sustained_critical.trace")
        assert [d.response for d in decisions] == [
            R.CONTINUE, R.TAKEOVER_REQUEST,
            R.SYSTEM_DEACTIVATION, R.SYSTEM_DEACTIVATION, R.SYSTEM_DEACTIVATION,
            R.SYSTEM_DEACTIVATION, R.SYSTEM_DEACTIVATION, R.SYSTEM_DEACTIVATION,
        ]
        assert decisions[3].computed is R.CONTINUE

    def test_degraded_perception_recovers_after_hold(self):
        decisions = replay("perception_degraded_step5.trace")
        responses = {d.step: d.response for d in decisions}
        assert responses[5] is R.PERFORMANCE_DEGRADATION
        assert responses[6] is R.PERFORMANCE_DEGRADATION
        assert responses[7] is R.PERFORMANCE_DEGRADATION
        assert responses[8] is R.CONTINUE
        assert [(t.source, t.target_stage) for t in decisions[5].tickets] == [(PER, LifecycleStage.LT)]
        assert decisions[6].tickets == ()

    def test_step_down_one_tier_at_a_time(self):
        trace = step_readings(0, trajectory=CRITICAL) + [
            MonitorReading(step, TRAJ, NOMINAL) for step in range(1, 11)
        ]
        responses = [d.response for d in simulate_trace(trace, GuardPolicy())]
        assert responses == [
            R.TAKEOVER_REQUEST,
            R.TAKEOVER_REQUEST, R.TAKEOVER_REQUEST, R.FUNCTIONAL_ESCALATION,
            R.FUNCTIONAL_ESCALATION, R.FUNCTIONAL_ESCALATION, R.PERFORMANCE_DEGRADATION,
            R.PERFORMANCE_DEGRADATION, R.PERFORMANCE_DEGRADATION, R.CONTINUE,
            R.CONTINUE,
        ]

    def test_relapse_resets_hold(self):
        trace = (
            step_readings(0, perception=DEGRADED)
            + step_readings(1, perception=NOMINAL)
            + step_readings(2, perception=NOMINAL)
            + step_readings(3, perception=DEGRADED)
            + step_readings(4, perception=NOMINAL)
            + step_readings(5, perception=NOMINAL)
            + step_readings(6, perception=NOMINAL)
        )
        responses = [d.response for d in simulate_trace(trace, GuardPolicy())]
        assert responses == [R.PERFORMANCE_DEGRADATION] * 6 + [R.CONTINUE]

    def test_two_degraded_sources_escalate(self):
        [decision] = simulate_trace(step_readings(0, egomotion=DEGRADED, perception=DEGRADED), GuardPolicy())
        assert decision.response is R.FUNCTIONAL_ESCALATION
        assert [t.target_stage for t in decision.tickets] == [LifecycleStage.DP, LifecycleStage.LT]

    def test_two_critical_sources_deactivate(self):
        [decision] = simulate_trace(step_readings(0, perception=CRITICAL, trajectory=CRITICAL), GuardPolicy())
        assert decision.response is R.SYSTEM_DEACTIVATION

    def test_repeated_source_counts_at_max(self):
        readings = [MonitorReading(0, PER, CRITICAL), MonitorReading(0, PER, NOMINAL)]
        [decision] = simulate_trace(readings, GuardPolicy())
        assert decision.risk is CRITICAL

    def test_missing_sources_keep_last_level(self):
        trace = step_readings(0, egomotion=DEGRADED) + step_readings(1, trajectory=NOMINAL)
        decisions = simulate_trace(trace, GuardPolicy())
        assert decisions[1].risk is DEGRADED
        assert decisions[1].triggering_sources == (EGO,)

    def test_non_monotonic_steps(self):
        trace = load_trace("2 egomotion nominal\n1 egomotion nominal\n")
        with pytest.raises(NonMonotonicStepError) as info:
            simulate_trace(trace, GuardPolicy())
        assert info.value.index == 1
        assert info.value.line == 2

    def test_decide_step_rejects_earlier_step(self):
        state, _ = decide_step(GuardState.initial(), GuardPolicy(), step_readings(5, egomotion=NOMINAL))
        with pytest.raises(NonMonotonicStepError):
            decide_step(state, GuardPolicy(), step_readings(4, egomotion=NOMINAL))

    def test_decide_step_needs_readings(self):
        with pytest.raises(ValueError):
            decide_step(GuardState.initial(), GuardPolicy(), [])

    def test_empty_trace(self):
        assert simulate_trace([], GuardPolicy()) == []


class TestHysteresisProperties:
    @pytest.mark.parametrize("hold,persistence", [(1, 1), (3, 2), (5, 4)])
    def test_random_walk(self, hold, persistence):
        rng = random.Random(hold * 100 + persistence)
        policy = GuardPolicy(deescalation_hold=hold, deactivation_persistence=persistence)
        # Bias toward nominal so deactivation is not reached immediately
        levels = [NOMINAL] * 12 + [DEGRADED] * 4 + [CRITICAL]
        trace = []
        observed_per_step = []
        for step in range(10_000):
            observed = {}
            for source in MonitorSource:
                if rng.random() < 0.8:
                    level = rng.choice(levels)
                    trace.append(MonitorReading(step, source, level))
                    observed[source] = max(observed.get(source, level), level)
            if not observed:
                trace.append(MonitorReading(step, EGO, NOMINAL))
                observed[EGO] = NOMINAL
            observed_per_step.append(observed)

        decisions = simulate_trace(trace, policy)
        assert len(decisions) == 10_000

        effective = {source: NOMINAL for source in MonitorSource}
        previous = R.CONTINUE
        lower_run = 0
        for decision, observed in zip(decisions, observed_per_step):
            effective.update(observed)
            response, computed = decision.response, decision.computed
            assert decision.risk == max(effective.values())
            assert response >= computed
            if previous is R.SYSTEM_DEACTIVATION:
                assert response is R.SYSTEM_DEACTIVATION
            elif computed >= previous:
                assert response is computed
                lower_run = 0
            else:
                lower_run += 1
                if lower_run >= hold:
                    assert response == previous - 1
                    lower_run = 0
                else:
                    assert response is previous

            # One ticket per source at Degraded or above, in source order, routed by the table
            expected_sources = [s for s in SOURCE_ORDER if effective[s] >= DEGRADED]
            assert [t.source for t in decision.tickets] == expected_sources
            for ticket in decision.tickets:
                assert ticket.target_stage is ROUTING_TABLE[ticket.source]
                assert ticket.step == decision.step
            previous = response

    def test_default_policy_is_monotone(self):
        assert GuardPolicy().monotonicity_warnings() == []

    @pytest.mark.parametrize("persistence", [1, 2])
    def test_raising_one_source_never_lowers_response(self, persistence):
        policy = GuardPolicy(deactivation_persistence=persistence)

        def computed(levels, streak):
            risk, count = aggregate_risk(levels)
            return policy.response_for(risk, count, streak if risk is CRITICAL else 0)

        ordered = [NOMINAL, DEGRADED, CRITICAL]
        checked = 0
        for combo in itertools.product(ordered, repeat=len(SOURCE_ORDER)):
            levels = dict(zip(SOURCE_ORDER, combo))
            for source in SOURCE_ORDER:
                if levels[source] is CRITICAL:
                    continue
                raised = {**levels, source: ordered[ordered.index(levels[source]) + 1]}
                for streak in (1, persistence, persistence + 1):
                    assert computed(raised, streak) >= computed(levels, streak), (levels, source, streak)
                    checked += 1
        # 81 source positions over 27 combinations, 54 of them below Critical
        assert checked == 54 * 3


class TestPolicy:
    def test_default_file_matches_builtin(self):
        policy = load_policy((POLICIES / "default.policy").read_text(encoding="utf-8"))
        assert policy == GuardPolicy()
        assert set(policy.rules) == set(PATTERNS)

    def test_partial_override(self):
        policy = load_policy("policy { hold=5 rule degraded:1 -> continue }")
        assert policy.deescalation_hold == 5
        assert policy.deactivation_persistence == 2
        assert policy.rules["degraded:1"] is R.CONTINUE
        assert policy.rules["critical:1"] is DEFAULT_RULES["critical:1"]

    def test_override_on_base(self):
        base = GuardPolicy(deescalation_hold=7)
        assert load_policy("policy { }", base).deescalation_hold == 7

    def test_monotonicity_warnings(self):
        policy = load_policy("policy { rule degraded:2 -> continue }")
        warnings = policy.monotonicity_warnings()
        assert len(warnings) == 1
        assert "degraded:2 -> continue" in warnings[0]

    @pytest.mark.parametrize("text,fragment", [
        ("policy { rule degraded:1 -> panic }", "unknown response tier 'panic'"),
        ("policy { rule degraded:3 -> continue }", "source count must be 1 or 2"),
        ("policy { rule nominal -> continue rule nominal -> continue }", "duplicate rule"),
        ("policy { hold=0 }", "must be an integer >= 1"),
        ("policy { hold=2 hold=3 }", "duplicate parameter"),
        ("policy { rule warm -> continue }", "unknown risk pattern"),
        ("policy { rule nominal -> continue", "end of input"),
        ("policy { } extra", "after policy block"),
        ("rules { }", "expected 'policy'"),
        ('policy { "x" }', "expected 'rule'"),
    ])
    def test_errors(self, text, fragment):
        with pytest.raises(PolicyError) as info:
            load_policy(text)
        assert fragment in str(info.value)

    def test_error_carries_position(self):
        with pytest.raises(PolicyError) as info:
            load_policy("policy {\n  rule degraded:1 -> panic\n}")
        assert str(info.value.span) == "2:22"

    def test_invalid_parameters(self):
        with pytest.raises(PolicyError):
            GuardPolicy(deescalation_hold=0)
        with pytest.raises(PolicyError):
            GuardPolicy(deactivation_persistence=True)
        with pytest.raises(PolicyError):
            GuardPolicy(rules={"nominal": R.CONTINUE})

    def test_custom_persistence(self):
        policy = GuardPolicy(deactivation_persistence=3)
        trace = [MonitorReading(step, TRAJ, CRITICAL) for step in range(3)]
        responses = [d.response for d in simulate_trace(trace, policy)]
        assert responses == [R.TAKEOVER_REQUEST, R.TAKEOVER_REQUEST, R.SYSTEM_DEACTIVATION]


class TestTraceFiles:
    def test_case_insensitive_with_comments(self):
        readings = load_trace("# header\n5 PERCEPTION Degraded  # spike\n\n6 trajectory critical\n")
        assert readings == [MonitorReading(5, PER, DEGRADED), MonitorReading(6, TRAJ, CRITICAL)]
        assert [r.line for r in readings] == [2, 4]

    @pytest.mark.parametrize("line,fragment", [
        ("5 perception", "expected STEP SOURCE LEVEL"),
        ("-1 perception nominal", "non-negative integer"),
        ("x perception nominal", "non-negative integer"),
        ("5 lidar nominal", "unknown monitor source 'lidar'"),
        ("5 perception bad", "unknown risk level 'bad'"),
        ("5 perception nominal extra", "expected STEP SOURCE LEVEL"),
    ])
    def test_malformed(self, line, fragment):
        with pytest.raises(TraceFormatError) as info:
            load_trace("0 egomotion nominal\n" + line + "\n")
        assert info.value.line == 2
        assert fragment in str(info.value)

    def test_decision_log(self):
        decisions = replay("perception_degraded_step5.trace")
        lines = format_decision_log(decisions).splitlines()
        assert lines[0] == "0 continue"
        assert lines[5] == "5 performance_degradation perception->LT"
        assert lines[8] == "8 continue"
        assert format_decision_log([]) == ""

    def test_structured_decisions(self):
        decisions = replay("trajectory_critical_single.trace")
        document = json.loads(export_decisions(decisions))
        assert document["decisions"][0]["response"] == "takeover_request"
        assert document["decisions"][0]["tickets"][0]["target_stage"] == "VF"
        assert export_decisions(decisions) == export_decisions(decisions)
