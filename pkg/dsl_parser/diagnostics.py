"""
UniSTPA Parse Diagnostics
Source spans and diagnostic records reported by the lexer and parser.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based line/column location covering `length` characters."""

    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    """An error or warning tied to a span of the input text."""

    severity: Severity
    message: str
    span: SourceSpan

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self, path: Optional[str] = None) -> str:
        """Format as `path:line:col: severity: message`."""
        prefix = f"{path}:" if path else ""
        return f"{prefix}{self.span}: {self.severity.value}: {self.message}"


def error(message: str, span: SourceSpan) -> ParseDiagnostic:
    return ParseDiagnostic(Severity.ERROR, message, span)


def warning(message: str, span: SourceSpan) -> ParseDiagnostic:
    return ParseDiagnostic(Severity.WARNING, message, span)
