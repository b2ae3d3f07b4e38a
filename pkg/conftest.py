"""
Shared pytest fixtures for UniSTPA tests.
"""
import random
from pathlib import Path
from typing import List

import pytest

from dsl_parser import load_model
from dsl_parser.lexer import KEYWORDS
from safety_model import (
    MODE_ORDER,
    STAGE_ORDER,
    CausalScenario,
    ControlAction,
    Edge,
    EdgeKind,
    Hazard,
    Loss,
    ModelHeader,
    Node,
    NodeKind,
    SafetyModel,
    SafetyRequirement,
    Uca,
    build_model,
)

ROOT = Path(__file__).parent
FIXTURES = ROOT / "fixtures"
NOA_MODEL = FIXTURES / "noa_highway.ustpa"
TRACES = FIXTURES / "traces"
POLICIES = FIXTURES / "policies"
WAIVERS = FIXTURES / "waivers"

# Descriptions that exercise quoting and escaping
TRICKY_TEXT = (
    "plain",
    'with "quotes"',
    "back\\slash",
    "two\nlines",
    "hash # inside",
    "pipe | bar",
    "tab\there",
    "ünïcödé ✓",
    "arrow -> inside",
)


@pytest.fixture(scope="session")
def noa_text() -> str:
    return NOA_MODEL.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def noa_model(noa_text) -> SafetyModel:
    return load_model(noa_text)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    """Keep a developer's environment from leaking into tests."""
    for name in ("UNISTPA_CONFIG", "LOG_LEVEL", "LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("UNISTPA_CONFIG", str(tmp_path / "absent-unistpa.json"))


def _text(rng: random.Random, prefix: str) -> str:
    if rng.random() < 0.3:
        return f"{prefix} {rng.choice(TRICKY_TEXT)}"
    return f"{prefix} description {rng.randint(0, 999)}"


def _ident(rng: random.Random, keywords: List[str], default: str) -> str:
    """Usually `default`; sometimes an unused DSL keyword."""
    if keywords and rng.random() < 0.2:
        return keywords.pop()
    return default


def random_declarations(rng: random.Random) -> List[object]:
    """
    Declarations for a random model that satisfies every build invariant.

    Orphans at every level are allowed and common. Some ids are DSL keywords,
    each used at most once so ids stay unique across categories.
    """
    keywords = sorted(KEYWORDS)
    rng.shuffle(keywords)
    decls: List[object] = [ModelHeader(_text(rng, "model"))]

    losses = [_ident(rng, keywords, f"L{i}") for i in range(1, rng.randint(1, 4) + 1)]
    for loss_id in losses:
        decls.append(Loss(loss_id, _text(rng, loss_id), rng.random() < 0.7))

    hazards = [_ident(rng, keywords, f"H{i}") for i in range(1, rng.randint(1, 5) + 1)]
    for hazard_id in hazards:
        linked = rng.sample(losses, rng.randint(1, len(losses)))
        decls.append(Hazard(hazard_id, _text(rng, hazard_id), tuple(linked)))

    nodes: List[Node] = []
    for stage in STAGE_ORDER:
        for i in range(rng.randint(0, 3)):
            kind = NodeKind.HUMAN if rng.random() < 0.3 else NodeKind.TECHNICAL
            nodes.append(Node(_ident(rng, keywords, f"N_{stage.value}{i}"), stage, kind, _text(rng, "node")))
    if not nodes:
        nodes.append(Node("N_DT0", STAGE_ORDER[-1], NodeKind.TECHNICAL, "fallback node"))
    decls.extend(nodes)

    if len(nodes) > 1:
        for _ in range(rng.randint(0, 10)):
            source, target = rng.sample(nodes, 2)
            kind = rng.choice(list(EdgeKind))
            label = _text(rng, "edge") if rng.random() < 0.6 else ""
            decls.append(Edge(source.id, target.id, kind, label))

    stage_by_node = {n.id: n.stage for n in nodes}
    actions = []
    for i in range(rng.randint(0, 5)):
        controller = rng.choice(nodes).id
        actions.append(ControlAction(_ident(rng, keywords, f"CA-{i}"), controller, _text(rng, "action")))
    decls.extend(actions)

    ucas = []
    if actions:
        for i in range(rng.randint(0, 8)):
            action = rng.choice(actions)
            linked = rng.sample(hazards, rng.randint(1, min(3, len(hazards))))
            ucas.append(Uca(_ident(rng, keywords, f"UCA-{i}"), action.id, rng.choice(MODE_ORDER), tuple(linked), f"uca {i} {rng.choice(TRICKY_TEXT)}"))
    decls.extend(ucas)

    controller_of = {a.id: a.controller for a in actions}
    scenarios = []
    if ucas:
        for i in range(rng.randint(0, 8)):
            uca = rng.choice(ucas)
            stage = stage_by_node[controller_of[uca.action]]
            scenarios.append(CausalScenario(_ident(rng, keywords, f"CS-{i}"), uca.id, stage, _text(rng, "scenario")))
    decls.extend(scenarios)

    if scenarios:
        for i in range(rng.randint(0, 6)):
            linked = rng.sample([s.id for s in scenarios], rng.randint(1, min(3, len(scenarios))))
            decls.append(SafetyRequirement(_ident(rng, keywords, f"SR-{i}"), tuple(linked), _text(rng, "requirement")))

    return decls


def random_model(rng: random.Random) -> SafetyModel:
    return build_model(random_declarations(rng))


@pytest.fixture
def model_factory():
    """Seeded generator of random valid models."""
    return lambda seed: random_model(random.Random(seed))


def small_model_text() -> str:
    """A tiny fully traced model in DSL form."""
    return (
        'model "small"\n'
        'loss L1 "injury"\n'
        'hazard H1 "too close" losses=[L1]\n'
        'node CTRL stage=LT kind=technical "controller"\n'
        'node PLANT stage=DT kind=technical "plant"\n'
        'edge control CTRL -> PLANT "command"\n'
        'edge feedback PLANT -> CTRL "status"\n'
        'action CA1 controller=CTRL "train"\n'
        'uca U1 action=CA1 mode=not_provided hazards=[H1] "training skipped"\n'
        'scenario S1 uca=U1 stage=LT "no data"\n'
        'requirement R1 scenarios=[S1] "collect data"\n'
    )
