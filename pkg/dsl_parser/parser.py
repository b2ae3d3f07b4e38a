"""
UniSTPA DSL Parser
Turns tokens into raw model declarations, recovering at statement keywords.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Set, Tuple

from logger import get_logger
from safety_model import (
    STAGE_ORDER,
    CausalScenario,
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
)

from .diagnostics import ParseDiagnostic, SourceSpan, error, warning
from .lexer import STATEMENT_KEYWORDS, Token, TokenKind, tokenize

logger = get_logger()

LEGAL_MODES = ", ".join(m.value for m in FailureMode)
LEGAL_STAGES = ", ".join(s.value for s in STAGE_ORDER)
LEGAL_NODE_KINDS = ", ".join(k.value for k in NodeKind)


@dataclass
class ModelDocument:
    """Parsed declarations in source order plus every diagnostic."""

    declarations: List[Any] = field(default_factory=list)
    diagnostics: List[ParseDiagnostic] = field(default_factory=list)
    spans: List[SourceSpan] = field(default_factory=list)

    @property
    def errors(self) -> List[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def warnings(self) -> List[ParseDiagnostic]:
        return [d for d in self.diagnostics if not d.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors

    def locate(self, identifier: str) -> Optional[SourceSpan]:
        """Span of the first declaration with the given id, if any."""
        for decl, span in zip(self.declarations, self.spans):
            if getattr(decl, "id", None) == identifier:
                return span
            if isinstance(decl, Edge) and identifier == f"{decl.source}->{decl.target}":
                return span
        return None


class _StatementAbort(Exception):
    """Syntax error inside a statement; the parser resyncs at the next keyword."""


# Attribute value kinds
WORD = "identifier"
LIST = "identifier list"
STRING = "string"

# statement -> (attribute name -> value kind)
STATEMENT_ATTRIBUTES: Dict[str, Dict[str, str]] = {
    "loss": {"critical": WORD},
    "hazard": {"losses": LIST},
    "node": {"stage": WORD, "kind": WORD},
    "action": {"controller": WORD},
    "uca": {"action": WORD, "mode": WORD, "hazards": LIST},
    "scenario": {"uca": WORD, "stage": WORD},
    "requirement": {"scenarios": LIST},
}

REQUIRED_ATTRIBUTES: Dict[str, Tuple[str, ...]] = {
    "loss": (),
    "hazard": ("losses",),
    "node": ("stage", "kind"),
    "action": ("controller",),
    "uca": ("action", "mode", "hazards"),
    "scenario": ("uca", "stage"),
    "requirement": ("scenarios",),
}


class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.document = ModelDocument()
        self.header_seen = False

    # -- token helpers -------------------------------------------------

    def _peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def _next(self) -> Optional[Token]:
        token = self._peek()
        if token is not None:
            self.pos += 1
        return token

    def _end_span(self) -> SourceSpan:
        """Span for errors at end of input: just past the last token."""
        if self.tokens:
            last = self.tokens[-1].span
            return SourceSpan(last.line, last.column + last.length, 1)
        return SourceSpan(1, 1, 1)

    def _error(self, message: str, span: SourceSpan) -> None:
        self.document.diagnostics.append(error(message, span))

    def _at_statement_start(self) -> bool:
        token = self._peek()
        if token is None or token.kind is not TokenKind.KEYWORD or token.value not in STATEMENT_KEYWORDS:
            return False
        following = self._peek(1)
        return following is None or following.kind is not TokenKind.EQUALS

    def _synchronize(self) -> None:
        while self._peek() is not None and not self._at_statement_start():
            self.pos += 1

    def _expect(self, kind: TokenKind, what: str) -> Token:
        token = self._peek()
        if token is None:
            self._error(f"expected {what} but reached end of input", self._end_span())
            raise _StatementAbort()
        if token.kind is not kind:
            self._error(f"expected {what}, found {token.describe()}", token.span)
            raise _StatementAbort()
        return self._next()

    def _expect_word(self, what: str) -> Token:
        token = self._peek()
        if token is None:
            self._error(f"expected {what} but reached end of input", self._end_span())
            raise _StatementAbort()
        if not token.is_word:
            self._error(f"expected {what}, found {token.describe()}", token.span)
            raise _StatementAbort()
        return self._next()

    # -- document ------------------------------------------------------

    def parse(self) -> ModelDocument:
        while self._peek() is not None:
            token = self._peek()
            if not self._at_statement_start():
                if token.is_word:
                    self._error(f"unknown keyword '{token.value}'", token.span)
                else:
                    self._error(f"expected a statement keyword, found {token.describe()}", token.span)
                self.pos += 1
                self._synchronize()
                continue
            start = self.pos
            try:
                self._statement()
            except _StatementAbort:
                if self.pos == start:
                    self.pos += 1
                self._synchronize()

        if not self.header_seen:
            self.document.diagnostics.append(
                warning("missing `model \"name\"` header", SourceSpan(1, 1, 1))
            )
        return self.document

    def _emit(self, declaration: Any, span: SourceSpan) -> None:
        self.document.declarations.append(declaration)
        self.document.spans.append(span)

    def _statement(self) -> None:
        keyword = self._next()
        handler: Callable[[Token], None] = getattr(self, f"_parse_{keyword.value}")
        handler(keyword)

    # -- statement bodies ---------------------------------------------

    def _parse_model(self, keyword: Token) -> None:
        name = self._expect(TokenKind.STRING, "model name string")
        if self.header_seen:
            self._error("duplicate model header", keyword.span)
            return
        if self.document.declarations:
            self.document.diagnostics.append(
                warning("model header should be the first statement", keyword.span)
            )
        self.header_seen = True
        self._emit(ModelHeader(name.value), keyword.span)

    def _parse_edge(self, keyword: Token) -> None:
        kind_token = self._expect_word("'control' or 'feedback'")
        if kind_token.value not in ("control", "feedback"):
            self._error(
                f"unknown edge kind '{kind_token.value}' (expected control or feedback)",
                kind_token.span,
            )
            raise _StatementAbort()
        source = self._expect_word("source node identifier")
        self._expect(TokenKind.ARROW, "'->'")
        target = self._expect_word("target node identifier")
        label = ""
        nxt = self._peek()
        if nxt is not None and nxt.kind is TokenKind.STRING:
            label = self._next().value
        self._expect_statement_end("edge")
        self._emit(Edge(source.value, target.value, EdgeKind(kind_token.value), label), keyword.span)

    def _expect_statement_end(self, statement: str) -> None:
        token = self._peek()
        if token is not None and not self._at_statement_start():
            self._error(f"unexpected {token.describe()} in {statement} statement", token.span)
            raise _StatementAbort()

    def _parse_attributes(self, statement: str) -> Tuple[Dict[str, Token], Optional[Token], Set[str], bool]:
        """
        Parse `name=value` attributes and the description string in any order.

        Returns:
            Tuple of (attribute tokens by name, description token,
            names whose value was rejected, values_ok)
        """
        allowed = STATEMENT_ATTRIBUTES[statement]
        attributes: Dict[str, Token] = {}
        description: Optional[Token] = None
        rejected: Set[str] = set()
        values_ok = True

        while self._peek() is not None and not self._at_statement_start():
            token = self._next()
            if token.kind is TokenKind.STRING:
                if description is not None:
                    self._error(f"{statement} statement has more than one description string", token.span)
                    values_ok = False
                description = token
                continue
            if not token.is_word:
                self._error(f"unexpected {token.describe()} in {statement} statement", token.span)
                raise _StatementAbort()
            self._expect(TokenKind.EQUALS, f"'=' after '{token.value}'")
            value = self._next()
            if value is None:
                self._error(f"missing value for '{token.value}'", self._end_span())
                raise _StatementAbort()

            name = token.value
            if name not in allowed:
                self._error(f"unknown attribute '{name}' for {statement}", token.span)
                values_ok = False
                continue
            if name in attributes:
                self._error(f"duplicate attribute '{name}'", token.span)
                values_ok = False
                continue
            expected = allowed[name]
            if not self._value_matches(value, expected):
                self._error(
                    f"attribute '{name}' expects {'an' if expected[0] in 'aeiou' else 'a'} {expected}, "
                    f"found {value.describe()}",
                    value.span,
                )
                values_ok = False
                rejected.add(name)
                continue
            attributes[name] = value

        return attributes, description, rejected, values_ok

    @staticmethod
    def _value_matches(value: Token, expected: str) -> bool:
        if expected == WORD:
            return value.is_word
        if expected == LIST:
            return value.kind is TokenKind.LIST
        return value.kind is TokenKind.STRING

    def _entity_statement(self, keyword: Token) -> Optional[Tuple[Token, Dict[str, Token], str]]:
        """Shared front half of every `<keyword> ID attrs... "text"` statement."""
        statement = keyword.value
        identifier = self._expect_word(f"{statement} identifier")
        attributes, description, rejected, values_ok = self._parse_attributes(statement)

        missing = [
            a for a in REQUIRED_ATTRIBUTES[statement]
            if a not in attributes and a not in rejected
        ]
        if description is None:
            missing.append("description string")
        if missing:
            self._error(
                f"{statement} '{identifier.value}' is missing required "
                f"{', '.join(missing)}",
                identifier.span,
            )
            return None
        if not values_ok:
            return None
        return identifier, attributes, description.value

    def _stage(self, token: Token) -> Optional[LifecycleStage]:
        try:
            return LifecycleStage(token.value)
        except ValueError:
            self._error(f"unknown stage '{token.value}' (expected one of {LEGAL_STAGES})", token.span)
            return None

    def _parse_loss(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, description = parsed
        critical = True
        if "critical" in attributes:
            flag = attributes["critical"]
            if flag.value not in ("true", "false"):
                self._error(f"critical must be true or false, found '{flag.value}'", flag.span)
                return
            critical = flag.value == "true"
        self._emit(Loss(identifier.value, description, critical), keyword.span)

    def _parse_hazard(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, description = parsed
        self._emit(Hazard(identifier.value, description, attributes["losses"].value), keyword.span)

    def _parse_node(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, label = parsed
        stage = self._stage(attributes["stage"])
        kind_token = attributes["kind"]
        try:
            kind = NodeKind(kind_token.value)
        except ValueError:
            self._error(
                f"unknown node kind '{kind_token.value}' (expected one of {LEGAL_NODE_KINDS})",
                kind_token.span,
            )
            return
        if stage is None:
            return
        self._emit(Node(identifier.value, stage, kind, label), keyword.span)

    def _parse_action(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, name = parsed
        self._emit(ControlAction(identifier.value, attributes["controller"].value, name), keyword.span)

    def _parse_uca(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, description = parsed
        mode_token = attributes["mode"]
        try:
            mode = FailureMode(mode_token.value)
        except ValueError:
            self._error(
                f"unknown failure mode '{mode_token.value}' (expected one of {LEGAL_MODES})",
                mode_token.span,
            )
            return
        self._emit(
            Uca(identifier.value, attributes["action"].value, mode, attributes["hazards"].value, description),
            keyword.span,
        )

    def _parse_scenario(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, description = parsed
        stage = self._stage(attributes["stage"])
        if stage is None:
            return
        self._emit(
            CausalScenario(identifier.value, attributes["uca"].value, stage, description),
            keyword.span,
        )

    def _parse_requirement(self, keyword: Token) -> None:
        parsed = self._entity_statement(keyword)
        if parsed is None:
            return
        identifier, attributes, description = parsed
        self._emit(
            SafetyRequirement(identifier.value, attributes["scenarios"].value, description),
            keyword.span,
        )


def parse_document(text: str) -> ModelDocument:
    """
    Parse UniSTPA text into declarations and diagnostics.

    Never raises on malformed input; errors are reported as diagnostics and
    parsing resumes at the next statement keyword.

    Args:
        text: Source text (LF or CRLF line endings)

    Returns:
        ModelDocument with declarations in source order
    """
    tokens, lex_diagnostics = tokenize(text)
    parser = Parser(tokens)
    document = parser.parse()
    document.diagnostics = sorted(
        lex_diagnostics + document.diagnostics,
        key=lambda d: (d.span.line, d.span.column),
    )
    logger.debug(
        f"Parsed {len(document.declarations)} declarations "
        f"with {len(document.errors)} error(s) and {len(document.warnings)} warning(s)"
    )
    return document
