"""
Tests for the worksheet, traceability audit, coverage, chain queries and
control-loop checks.
"""
import random
from fractions import Fraction

import pytest

from analysis import (
    Direction,
    FindingSeverity,
    Ratio,
    SafetyAnalyzer,
    WaiverError,
    apply_waivers,
    build_chain_graph,
    control_loop_audit,
    coverage_metrics,
    load_waivers,
    trace_chain,
    traceability_audit,
    uca_worksheet,
)
from conftest import WAIVERS, random_model, small_model_text
from dsl_parser import load_model
from safety_model import (
    MODE_ORDER,
    Category,
    FailureMode,
    LifecycleStage,
    UnknownIdError,
    stage_of,
)

ORPHAN_UCAS = ("UCA-IG2", "UCA-DP1", "UCA-DP2", "UCA-LT2", "UCA-LT4", "UCA-VF2", "UCA-DT1", "UCA-DT2")


class TestRatio:
    def test_rendering(self):
        assert str(Ratio(5, 6)) == "5/6 (0.8333)"
        assert str(Ratio(14, 56)) == "14/56 (0.2500)"
        assert str(Ratio(4, 4)) == "4/4 (1.0000)"

    def test_unreduced(self):
        ratio = Ratio(2, 4)
        assert (ratio.numerator, ratio.denominator) == (2, 4)
        assert ratio.value == Fraction(1, 2)

    def test_half_even(self):
        assert str(Ratio(1, 20000).decimal) == "0.0000"
        assert str(Ratio(3, 20000).decimal) == "0.0002"
        assert str(Ratio(5, 80000).decimal) == "0.0001"

    def test_empty_denominator_is_full(self):
        assert Ratio(0, 0).value == 1
        assert str(Ratio(0, 0)) == "0/0 (1.0000)"


class TestWorksheet:
    def test_bundled_model(self, noa_model):
        sheet = uca_worksheet(noa_model)
        assert len(sheet.cells) == 56
        assert len(sheet.documented_cells) == 14
        assert len(sheet.gaps) == 42
        assert str(sheet.coverage()) == "14/56 (0.2500)"
        assert sheet.cell("CA-DT3", FailureMode.NOT_PROVIDED).ucas == ("UCA-DT3",)
        assert sheet.cell("CA-DT3", FailureMode.MISTIMED_PROVISION).gap

    def test_frame(self, noa_model):
        frame = uca_worksheet(noa_model).to_frame()
        assert list(frame.columns) == ["Control Action"] + [m.label for m in MODE_ORDER]
        assert frame.index.name == "ID"
        assert frame.loc["CA-LT3", "Mistimed Provision"] == "UCA-LT3"
        assert frame.loc["CA-LT3", "Not Provided"] == "-"
        assert frame.shape == (14, 5)

    def test_cells_partition_ucas(self):
        for seed in range(200):
            model = random_model(random.Random(seed))
            sheet = uca_worksheet(model)
            assert len(sheet.cells) == 4 * len(model.actions)
            listed = [u for cell in sheet.documented_cells for u in cell.ucas]
            assert sorted(listed) == sorted(u.id for u in model.ucas)
            pairs = {(u.action, u.mode) for u in model.ucas}
            assert len(sheet.documented_cells) == len(pairs)
            for cell in sheet.documented_cells:
                for uca_id in cell.ucas:
                    uca = model.uca(uca_id)
                    assert (uca.action, uca.mode) == (cell.action, cell.mode)


class TestWaivers:
    def test_load_bundled_waivers(self):
        waivers = load_waivers((WAIVERS / "noa_highway.waivers").read_text(encoding="utf-8"))
        assert [(w.action, w.mode) for w in waivers] == [
            ("CA-DP1", FailureMode.INAPPROPRIATE_DURATION),
            ("CA-DT3", FailureMode.INAPPROPRIATE_DURATION),
        ]
        assert all(w.reason for w in waivers)

    def test_camel_case_mode(self):
        [waiver] = load_waivers('CA-1 MistimedProvision "timing is fixed"\n')
        assert waiver.mode is FailureMode.MISTIMED_PROVISION

    @pytest.mark.parametrize("line", [
        "CA-1 not_provided",
        'CA-1 sometimes "x"',
        'CA-1 not_provided "   "',
        '"CA-1" not_provided "x"',
        'CA-1 not_provided "unterminated',
    ])
    def test_malformed_lines(self, line):
        with pytest.raises(WaiverError) as info:
            load_waivers("# header comment\n" + line + "\n")
        assert info.value.line == 2

    def test_apply(self, noa_model):
        waivers = load_waivers(
            'CA-DP1 inappropriate_duration "continuous"\n'
            'CA-DT3 not_provided "already documented"\n'
            'CA-XX not_provided "no such action"\n'
            'CA-DP1 inappropriate_duration "twice"\n'
        )
        sheet = apply_waivers(uca_worksheet(noa_model), waivers)
        assert [(c.action, c.mode) for c in sheet.waived_cells] == [("CA-DP1", FailureMode.INAPPROPRIATE_DURATION)]
        assert sheet.cell("CA-DP1", FailureMode.INAPPROPRIATE_DURATION).waiver == "continuous"
        assert len(sheet.waiver_notes) == 3
        assert len(sheet.gaps) == 41
        assert str(sheet.coverage()) == "15/56 (0.2679)"
        assert str(sheet.coverage(include_waivers=False)) == "14/56 (0.2500)"


class TestAudit:
    def test_bundled_model(self, noa_model):
        audit = traceability_audit(noa_model)
        assert audit.orphan_losses == ()
        assert audit.orphan_hazards == ()
        assert audit.orphan_ucas == ORPHAN_UCAS
        assert audit.orphan_scenarios == ()
        assert audit.unreached_requirements == ()
        assert not audit.has_errors
        assert len(audit.warnings) == 8
        assert str(audit.warnings[0]) == "warning: UCA UCA-IG2 has no causal scenario"

    def test_orphan_hazard(self):
        model = load_model(small_model_text() + 'hazard H2 "unlinked" losses=[L1]\n')
        audit = traceability_audit(model)
        assert audit.orphan_hazards == ("H2",)
        assert [f.kind for f in audit.findings] == ["orphan_hazard"]

    def test_dangling_requirement_is_an_error(self):
        text = small_model_text() + 'requirement R2 scenarios=[S9] "dangling"\n'
        model = load_model(text, tolerate_dangling=True)
        audit = traceability_audit(model)
        assert audit.unreached_requirements == ("R2",)
        assert [f.kind for f in audit.errors] == ["dangling", "unreached_requirement"]
        assert audit.errors[1].message == "requirement R2 does not reach a loss: chain breaks at 'S9'"
        assert all(f.severity is FindingSeverity.ERROR for f in audit.errors)


class TestCoverage:
    def test_bundled_model(self, noa_model):
        metrics = coverage_metrics(noa_model)
        assert str(metrics.uca_mode_coverage) == "14/56 (0.2500)"
        assert {s.value: n for s, n in metrics.per_stage_uca_counts.items()} == {
            "IG": 2, "DP": 3, "LT": 4, "VF": 2, "DT": 3
        }
        assert [metrics.per_mode_uca_counts[m] for m in MODE_ORDER] == [4, 8, 2, 0]
        assert str(metrics.hazard_mitigation_ratio) == "5/6 (0.8333)"
        assert metrics.unmitigated_hazards == ("H5",)
        assert str(metrics.loss_mitigation_ratio) == "4/4 (1.0000)"
        assert metrics.unmitigated_losses == ()

    def test_to_dict(self, noa_model):
        document = coverage_metrics(noa_model).to_dict()
        assert document["hazard_mitigation_ratio"] == {"numerator": 5, "denominator": 6, "decimal": "0.8333"}
        assert document["per_mode_uca_counts"]["ProvidedImproperly"] == 8
        assert document["per_stage_uca_counts"]["LT"] == 4

    def test_empty_model(self):
        metrics = coverage_metrics(load_model('model "empty"\n'))
        assert str(metrics.uca_mode_coverage) == "0/0 (1.0000)"
        assert str(metrics.hazard_mitigation_ratio) == "0/0 (1.0000)"

    def test_per_stage_counts_sum(self):
        for seed in range(100):
            model = random_model(random.Random(seed))
            metrics = coverage_metrics(model)
            assert sum(metrics.per_stage_uca_counts.values()) == len(model.ucas)
            assert sum(metrics.per_mode_uca_counts.values()) == len(model.ucas)
            assert metrics.unstaged_ucas == 0

    def test_unstaged_uca_is_counted(self):
        text = small_model_text() + 'uca U2 action=CA9 mode=mistimed hazards=[H1] "no such action"\n'
        model = load_model(text, tolerate_dangling=True)
        with pytest.raises(UnknownIdError):
            stage_of(model, "U2")

        metrics = coverage_metrics(model)
        assert metrics.unstaged_ucas == 1
        assert sum(metrics.per_stage_uca_counts.values()) + metrics.unstaged_ucas == len(model.ucas)
        assert metrics.per_mode_uca_counts[FailureMode.MISTIMED_PROVISION] == 1
        assert metrics.to_dict()["unstaged_ucas"] == 1

    def test_mitigation_matches_exhaustive_count(self):
        for seed in range(150):
            model = random_model(random.Random(seed))
            hazards_reached = set()
            for requirement in model.requirements:
                for scenario_id in requirement.scenarios:
                    for scenario in model.scenarios:
                        if scenario.id != scenario_id:
                            continue
                        for uca in model.ucas:
                            if uca.id == scenario.uca:
                                hazards_reached.update(uca.hazards)
            losses_reached = {
                loss_id
                for hazard in model.hazards if hazard.id in hazards_reached
                for loss_id in hazard.losses
            }

            metrics = coverage_metrics(model)
            hazards, losses = metrics.hazard_mitigation_ratio, metrics.loss_mitigation_ratio
            assert (hazards.numerator, hazards.denominator) == (len(hazards_reached), len(model.hazards)), f"seed {seed}"
            assert (losses.numerator, losses.denominator) == (len(losses_reached), len(model.losses)), f"seed {seed}"
            assert set(metrics.unmitigated_hazards) == {h.id for h in model.hazards} - hazards_reached
            assert set(metrics.unmitigated_losses) == {l.id for l in model.losses} - losses_reached


def _reachable(model, category, identifier, direction):
    """Depth-first closure over one-hop links."""
    def step(cat, ident):
        if direction is Direction.DOWNSTREAM:
            if cat is Category.REQUIREMENT:
                return [(Category.SCENARIO, s) for s in model.requirement(ident).scenarios]
            if cat is Category.SCENARIO:
                return [(Category.UCA, model.scenario(ident).uca)]
            if cat is Category.UCA:
                return [(Category.HAZARD, h) for h in model.uca(ident).hazards]
            if cat is Category.HAZARD:
                return [(Category.LOSS, l) for l in model.hazard(ident).losses]
            return []
        upper = {
            Category.LOSS: Category.HAZARD,
            Category.HAZARD: Category.UCA,
            Category.UCA: Category.SCENARIO,
            Category.SCENARIO: Category.REQUIREMENT,
        }
        if cat not in upper:
            return []
        return [(upper[cat], r) for r in model.referrers(cat, ident)]

    seen = set()
    stack = [(category, identifier)]
    while stack:
        for nxt in step(*stack.pop()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return {ident for _, ident in seen}


CHAIN_REGISTRIES = (
    (Category.LOSS, "losses"),
    (Category.HAZARD, "hazards"),
    (Category.UCA, "ucas"),
    (Category.SCENARIO, "scenarios"),
    (Category.REQUIREMENT, "requirements"),
)


class TestChains:
    def test_requirement_to_losses(self, noa_model):
        chain = trace_chain(noa_model, "SR-DT3-1", Direction.DOWNSTREAM)
        assert chain.paths[0] == ("SR-DT3-1", "CS-DT3-1", "UCA-DT3", "H4", "L1")
        assert chain.truncated_paths == ()
        assert chain.reached(Category.HAZARD) == ["H4", "H6"]
        assert sorted(chain.reached(Category.LOSS)) == ["L1", "L2", "L3", "L4"]
        assert len(chain.paths) == 7

    def test_loss_upstream(self, noa_model):
        chain = trace_chain(noa_model, "L1", Direction.UPSTREAM)
        assert sorted(chain.reached(Category.HAZARD)) == ["H1", "H2", "H4", "H5", "H6"]
        assert ("L1", "H5", "UCA-DP2") in chain.truncated_paths
        assert all(path[-1].startswith("SR-") for path in chain.paths)

    def test_far_end_origin(self, noa_model):
        assert trace_chain(noa_model, "L2", Direction.DOWNSTREAM).paths == ()
        assert trace_chain(noa_model, "SR-IG1-1", Direction.UPSTREAM).paths == ()

    def test_orphan_origin_is_truncated(self, noa_model):
        chain = trace_chain(noa_model, "UCA-DP2", Direction.UPSTREAM)
        assert chain.paths == ()
        assert chain.truncated_paths == (("UCA-DP2",),)

    def test_unknown_origin(self, noa_model):
        with pytest.raises(UnknownIdError):
            trace_chain(noa_model, "ICU", Direction.DOWNSTREAM)

    def test_matches_brute_force(self):
        for seed in range(150):
            model = random_model(random.Random(seed))
            graph = build_chain_graph(model)
            for category, registry in CHAIN_REGISTRIES:
                for element in getattr(model, registry):
                    for direction in Direction:
                        chain = trace_chain(model, element.id, direction, category, graph)
                        assert set(chain.reached()) == _reachable(model, category, element.id, direction), (
                            seed, element.id, direction
                        )

    def test_directions_are_symmetric(self):
        for seed in range(60):
            model = random_model(random.Random(seed))
            graph = build_chain_graph(model)
            for category, registry in CHAIN_REGISTRIES:
                for element in getattr(model, registry):
                    down = trace_chain(model, element.id, Direction.DOWNSTREAM, category, graph)
                    for target in down.reached():
                        target_category = next(c for c, r in CHAIN_REGISTRIES if model.get(c, target) is not None)
                        up = trace_chain(model, target, Direction.UPSTREAM, target_category, graph)
                        assert element.id in up.reached(), (seed, element.id, target)

    def test_downstream_paths_complete_in_valid_models(self):
        for seed in range(100):
            model = random_model(random.Random(seed))
            for requirement in model.requirements:
                chain = trace_chain(model, requirement.id, Direction.DOWNSTREAM)
                assert chain.truncated_paths == ()
                assert all(len(path) == 5 for path in chain.paths)


class TestControlLoops:
    def test_bundled_model(self, noa_model):
        loops = control_loop_audit(noa_model)
        assert "SCENE" in loops.controllers_without_feedback
        assert "DEV_IG" not in loops.controllers_without_feedback
        assert "DMM" not in loops.controllers_without_feedback
        assert loops.unreachable_nodes == ()
        assert any(e.source == "MON_PER" and e.target == "DEV_LT" for e in loops.cross_stage_edges)
        assert not loops.clean

    def test_loop_closed_through_intermediate_node(self):
        model = load_model(
            'model "m"\n'
            'node A stage=DT kind=technical "a"\n'
            'node B stage=DT kind=technical "b"\n'
            'node C stage=DT kind=technical "c"\n'
            'node D stage=IG kind=human "d"\n'
            "edge control A -> B\n"
            "edge control B -> C\n"
            "edge feedback C -> A\n"
        )
        loops = control_loop_audit(model)
        assert loops.controllers_without_feedback == ()
        assert loops.unreachable_nodes == ("D",)
        assert loops.cross_stage_edges == ()

    def test_control_only_cycle_is_open(self):
        model = load_model(
            'model "m"\n'
            'node A stage=DT kind=technical "a"\n'
            'node B stage=LT kind=technical "b"\n'
            "edge control A -> B\n"
            "edge control B -> A\n"
        )
        loops = control_loop_audit(model)
        assert loops.controllers_without_feedback == ("A", "B")
        assert len(loops.cross_stage_edges) == 2


def test_analyzer_facade(noa_model):
    waivers = load_waivers((WAIVERS / "noa_highway.waivers").read_text(encoding="utf-8"))
    sheet = SafetyAnalyzer.worksheet(noa_model, waivers)
    assert len(sheet.waived_cells) == 2
    assert SafetyAnalyzer.coverage(noa_model, sheet).waived_cells == 2
    assert SafetyAnalyzer.trace(noa_model, "H6", Direction.UPSTREAM).reached(Category.UCA) == ["UCA-DT3"]
    assert not SafetyAnalyzer.audit(noa_model).has_errors
    assert SafetyAnalyzer.loops(noa_model).unreachable_nodes == ()
    assert LifecycleStage.DT in SafetyAnalyzer.coverage(noa_model).per_stage_uca_counts
