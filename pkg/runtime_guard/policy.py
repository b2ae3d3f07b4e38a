"""
Guard policy: the mapping from aggregated risk to a response tier plus the
hysteresis and persistence parameters.

Policy files use the model DSL's token style:

    policy {
      hold=3
      persistence=2
      rule nominal -> continue
      rule degraded:1 -> performance_degradation
      rule degraded:2 -> functional_escalation
      rule critical:1 -> takeover_request
      rule critical:2 -> system_deactivation
      rule critical_sustained -> system_deactivation
    }

`degraded:2` and `critical:2` mean "two or more sources". Omitted entries
keep their defaults.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from dsl_parser import SourceSpan, Token, TokenKind, tokenize
from logger import get_logger

from .types import ResponseLevel, RiskLevel

logger = get_logger()

NOMINAL = "nominal"
DEGRADED_ONE = "degraded:1"
DEGRADED_MANY = "degraded:2"
CRITICAL_ONE = "critical:1"
CRITICAL_MANY = "critical:2"
CRITICAL_SUSTAINED = "critical_sustained"

PATTERNS: Tuple[str, ...] = (
    NOMINAL, DEGRADED_ONE, DEGRADED_MANY, CRITICAL_ONE, CRITICAL_MANY, CRITICAL_SUSTAINED,
)

# Pairs (milder, more severe) a sane table must not invert
SEVERITY_CHAIN: Tuple[Tuple[str, str], ...] = (
    (NOMINAL, DEGRADED_ONE),
    (DEGRADED_ONE, DEGRADED_MANY),
    (DEGRADED_MANY, CRITICAL_ONE),
    (CRITICAL_ONE, CRITICAL_MANY),
    (CRITICAL_ONE, CRITICAL_SUSTAINED),
)

DEFAULT_RULES: Dict[str, ResponseLevel] = {
    NOMINAL: ResponseLevel.CONTINUE,
    DEGRADED_ONE: ResponseLevel.PERFORMANCE_DEGRADATION,
    DEGRADED_MANY: ResponseLevel.FUNCTIONAL_ESCALATION,
    CRITICAL_ONE: ResponseLevel.TAKEOVER_REQUEST,
    CRITICAL_MANY: ResponseLevel.SYSTEM_DEACTIVATION,
    CRITICAL_SUSTAINED: ResponseLevel.SYSTEM_DEACTIVATION,
}

DEFAULT_HOLD = 3
DEFAULT_PERSISTENCE = 2

_TIERS = {tier.token: tier for tier in ResponseLevel}


class PolicyError(Exception):
    """Invalid policy file or parameters."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        self.message = message
        self.span = span
        location = f" {span}" if span is not None else ""
        super().__init__(f"policy{location}: {message}")


def pattern_for(level: RiskLevel, count: int) -> str:
    """Policy pattern for an aggregated (max level, sources at max) pair."""
    if level is RiskLevel.NOMINAL:
        return NOMINAL
    if level is RiskLevel.DEGRADED:
        return DEGRADED_ONE if count <= 1 else DEGRADED_MANY
    return CRITICAL_ONE if count <= 1 else CRITICAL_MANY


@dataclass(frozen=True)
class GuardPolicy:
    rules: Dict[str, ResponseLevel] = field(default_factory=lambda: dict(DEFAULT_RULES))
    deescalation_hold: int = DEFAULT_HOLD
    deactivation_persistence: int = DEFAULT_PERSISTENCE

    def __post_init__(self) -> None:
        missing = [p for p in PATTERNS if p not in self.rules]
        if missing:
            raise PolicyError(f"rules missing for: {', '.join(missing)}")
        for name in ("deescalation_hold", "deactivation_persistence"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise PolicyError(f"{name} must be an integer >= 1, got {value!r}")

    def response_for(self, level: RiskLevel, count: int, critical_streak: int) -> ResponseLevel:
        """
        Tier for an aggregated risk.

        Sustained Critical can only raise the tier the count-based rule gives.
        """
        response = self.rules[pattern_for(level, count)]
        if level is RiskLevel.CRITICAL and critical_streak >= self.deactivation_persistence:
            response = max(response, self.rules[CRITICAL_SUSTAINED])
        return response

    def monotonicity_warnings(self) -> List[str]:
        """Rules where a more severe pattern maps to a lower tier."""
        return [
            f"rule {severe} -> {self.rules[severe].token} is milder than "
            f"rule {mild} -> {self.rules[mild].token}"
            for mild, severe in SEVERITY_CHAIN
            if self.rules[severe] < self.rules[mild]
        ]


class _PolicyParser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, expected: str) -> Token:
        token = self._peek()
        if token is None:
            raise PolicyError(f"expected {expected}, found end of input")
        self.pos += 1
        return token

    def _expect(self, kind: TokenKind, expected: str) -> Token:
        token = self._next(expected)
        if token.kind is not kind:
            raise PolicyError(f"expected {expected}, found {token.describe()}", token.span)
        return token

    def _expect_word(self, expected: str, value: Optional[str] = None) -> Token:
        token = self._next(expected)
        if not token.is_word or (value is not None and token.value != value):
            raise PolicyError(f"expected {expected}, found {token.describe()}", token.span)
        return token

    def _pattern(self) -> Tuple[str, SourceSpan]:
        head = self._expect_word("risk pattern")
        if head.value in (NOMINAL, CRITICAL_SUSTAINED):
            return head.value, head.span
        if head.value not in ("degraded", "critical"):
            raise PolicyError(f"unknown risk pattern '{head.value}'", head.span)
        self._expect(TokenKind.COLON, "':'")
        count = self._expect(TokenKind.INT, "source count")
        if count.value not in (1, 2):
            raise PolicyError(f"source count must be 1 or 2 (2 means two or more), got {count.value}", count.span)
        return f"{head.value}:{count.value}", head.span

    def parse(self, base: GuardPolicy) -> GuardPolicy:
        self._expect_word("'policy'", "policy")
        self._expect(TokenKind.LBRACE, "'{'")

        rules: Dict[str, ResponseLevel] = {}
        params: Dict[str, int] = {}
        while True:
            token = self._next("'}'")
            if token.kind is TokenKind.RBRACE:
                break
            if token.is_word and token.value in ("hold", "persistence"):
                if token.value in params:
                    raise PolicyError(f"duplicate parameter '{token.value}'", token.span)
                self._expect(TokenKind.EQUALS, "'='")
                params[token.value] = self._expect(TokenKind.INT, "integer").value
            elif token.is_word and token.value == "rule":
                pattern, span = self._pattern()
                if pattern in rules:
                    raise PolicyError(f"duplicate rule for '{pattern}'", span)
                self._expect(TokenKind.ARROW, "'->'")
                tier = self._expect_word("response tier")
                if tier.value not in _TIERS:
                    legal = ", ".join(_TIERS)
                    raise PolicyError(f"unknown response tier '{tier.value}' (expected one of: {legal})", tier.span)
                rules[pattern] = _TIERS[tier.value]
            else:
                raise PolicyError(f"expected 'rule', 'hold', 'persistence' or '}}', found {token.describe()}", token.span)

        trailing = self._peek()
        if trailing is not None:
            raise PolicyError(f"unexpected {trailing.describe()} after policy block", trailing.span)

        return replace(
            base,
            rules={**base.rules, **rules},
            deescalation_hold=params.get("hold", base.deescalation_hold),
            deactivation_persistence=params.get("persistence", base.deactivation_persistence),
        )


def load_policy(text: str, base: Optional[GuardPolicy] = None) -> GuardPolicy:
    """
    Parse a policy file on top of a base policy.

    Args:
        text: Policy file contents
        base: Policy supplying omitted entries; built-in defaults when None

    Returns:
        GuardPolicy

    Raises:
        PolicyError: Syntax errors, unknown patterns or tiers, bad parameters
    """
    tokens, diagnostics = tokenize(text)
    if diagnostics:
        first = diagnostics[0]
        raise PolicyError(first.message, first.span)
    policy = _PolicyParser(tokens).parse(base or GuardPolicy())
    for warning in policy.monotonicity_warnings():
        logger.warning(f"Policy is not monotone: {warning}")
    return policy
