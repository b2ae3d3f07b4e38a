"""
UniSTPA DSL Lexer
Splits .ustpa (and policy) text into tokens with source spans.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, List, Tuple

from .diagnostics import ParseDiagnostic, SourceSpan, error

STATEMENT_KEYWORDS = frozenset({
    "model", "loss", "hazard", "node", "edge", "action", "uca", "scenario", "requirement",
})

ATTRIBUTE_KEYWORDS = frozenset({
    "critical", "losses", "stage", "kind", "controller", "action", "mode", "hazards",
    "uca", "scenarios", "control", "feedback", "technical", "human", "true", "false",
})

KEYWORDS = STATEMENT_KEYWORDS | ATTRIBUTE_KEYWORDS

ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENT = "ident"
    STRING = "string"
    LIST = "list"
    INT = "int"
    EQUALS = "="
    ARROW = "->"
    COLON = ":"
    LBRACE = "{"
    RBRACE = "}"


WORD_KINDS = (TokenKind.KEYWORD, TokenKind.IDENT)


@dataclass(frozen=True)
class Token:
    """A lexed token. LIST tokens carry a tuple of identifier strings."""

    kind: TokenKind
    value: Any
    span: SourceSpan
    item_spans: Tuple[SourceSpan, ...] = field(default=(), compare=False, repr=False)

    @property
    def is_word(self) -> bool:
        return self.kind in WORD_KINDS

    def describe(self) -> str:
        if self.kind is TokenKind.STRING:
            return "string"
        if self.kind is TokenKind.LIST:
            return "list"
        return f"'{self.value}'"


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and ch.isalpha()


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch in "_.-")


class Lexer:
    """Single-pass scanner that keeps going after errors."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1
        self.tokens: List[Token] = []
        self.diagnostics: List[ParseDiagnostic] = []

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def _advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def _span_from(self, line: int, column: int, start: int) -> SourceSpan:
        """Span from a start point to the current position, clipped to the start line."""
        if self.line == line:
            length = self.pos - start
        else:
            end_of_line = self.text.find("\n", start)
            length = (end_of_line if end_of_line != -1 else len(self.text)) - start
        return SourceSpan(line, column, max(1, length))

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            ch = self._peek()
            if ch in " \t\r\n\f\v":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                break

    def _read_word(self) -> str:
        start = self.pos
        self._advance()
        while self.pos < len(self.text):
            ch = self._peek()
            # Stop before an arrow so `A->B` lexes as three tokens
            if ch == "-" and self._peek(1) == ">":
                break
            if not _is_ident_char(ch):
                break
            self._advance()
        return self.text[start:self.pos]

    def _read_string(self) -> Token:
        line, column, start = self.line, self.column, self.pos
        self._advance()  # opening quote
        chars: List[str] = []
        while True:
            ch = self._peek()
            if ch == "" or ch == "\n":
                span = self._span_from(line, column, start)
                self.diagnostics.append(error("unterminated string literal", span))
                return Token(TokenKind.STRING, "".join(chars), span)
            if ch == '"':
                self._advance()
                return Token(TokenKind.STRING, "".join(chars), self._span_from(line, column, start))
            if ch == "\\":
                esc_line, esc_column = self.line, self.column
                self._advance()
                nxt = self._peek()
                if nxt in ESCAPES and nxt != "":
                    self._advance()
                    chars.append(ESCAPES[nxt])
                else:
                    self.diagnostics.append(
                        error(f"unknown escape sequence '\\{nxt}'", SourceSpan(esc_line, esc_column, 1))
                    )
                continue
            chars.append(self._advance())

    def _read_list(self) -> Token:
        line, column, start = self.line, self.column, self.pos
        self._advance()  # [
        items: List[str] = []
        spans: List[SourceSpan] = []
        while True:
            self._skip_trivia()
            ch = self._peek()
            if ch == "":
                span = self._span_from(line, column, start)
                self.diagnostics.append(error("unterminated list, expected ']'", span))
                return Token(TokenKind.LIST, tuple(items), span, tuple(spans))
            if ch == "]":
                self._advance()
                return Token(TokenKind.LIST, tuple(items), self._span_from(line, column, start), tuple(spans))
            if _is_ident_start(ch):
                item_line, item_column, item_start = self.line, self.column, self.pos
                items.append(self._read_word())
                spans.append(self._span_from(item_line, item_column, item_start))
                continue
            self.diagnostics.append(
                error(f"illegal character {ch!r} in identifier list", SourceSpan(self.line, self.column, 1))
            )
            self._advance()

    def tokenize(self) -> Tuple[List[Token], List[ParseDiagnostic]]:
        """
        Scan the whole input.

        Returns:
            Tuple of (tokens, diagnostics)
        """
        while True:
            self._skip_trivia()
            if self.pos >= len(self.text):
                break
            ch = self._peek()
            line, column, start = self.line, self.column, self.pos

            if _is_ident_start(ch):
                word = self._read_word()
                kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENT
                self.tokens.append(Token(kind, word, self._span_from(line, column, start)))
            elif ch.isascii() and ch.isdigit():
                while self._peek().isascii() and self._peek().isdigit() and self._peek() != "":
                    self._advance()
                self.tokens.append(
                    Token(TokenKind.INT, int(self.text[start:self.pos]), self._span_from(line, column, start))
                )
            elif ch == '"':
                self.tokens.append(self._read_string())
            elif ch == "[":
                self.tokens.append(self._read_list())
            elif ch == "-" and self._peek(1) == ">":
                self._advance()
                self._advance()
                self.tokens.append(Token(TokenKind.ARROW, "->", SourceSpan(line, column, 2)))
            elif ch in "={}:":
                self._advance()
                kind = {"=": TokenKind.EQUALS, "{": TokenKind.LBRACE,
                        "}": TokenKind.RBRACE, ":": TokenKind.COLON}[ch]
                self.tokens.append(Token(kind, ch, SourceSpan(line, column, 1)))
            else:
                self._advance()
                self.diagnostics.append(error(f"illegal character {ch!r}", SourceSpan(line, column, 1)))

        return self.tokens, self.diagnostics


def tokenize(text: str) -> Tuple[List[Token], List[ParseDiagnostic]]:
    """
    Tokenize UniSTPA text.

    `#` comments and whitespace are skipped; lexing continues past errors.

    Args:
        text: Source text

    Returns:
        Tuple of (tokens, diagnostics)
    """
    return Lexer(text).tokenize()
