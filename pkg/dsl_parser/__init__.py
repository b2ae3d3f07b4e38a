"""
UniSTPA DSL Parser Module
Reads and writes the declarative .ustpa model format.
"""
from pathlib import Path
from typing import Tuple

from logger import get_logger
from safety_model import SafetyModel, build_model

from .diagnostics import ParseDiagnostic, Severity, SourceSpan
from .lexer import Token, TokenKind, tokenize
from .parser import ModelDocument, parse_document
from .render import quote, render_canonical

logger = get_logger()

__all__ = [
    "tokenize",
    "parse_document",
    "render_canonical",
    "load_model",
    "read_model_file",
    "quote",
    "ModelDocument",
    "ParseDiagnostic",
    "Severity",
    "SourceSpan",
    "Token",
    "TokenKind",
]


def read_model_file(path: str) -> Tuple[str, ModelDocument]:
    """
    Read and parse a .ustpa file.

    Args:
        path: Path to the model file

    Returns:
        Tuple of (source text, parsed document)

    Raises:
        OSError: File missing or unreadable
        UnicodeDecodeError: File is not UTF-8
    """
    text = Path(path).read_text(encoding="utf-8")
    document = parse_document(text)
    logger.info(f"Parsed {path}: {len(document.declarations)} declarations")
    return text, document


def load_model(text: str, tolerate_dangling: bool = False) -> SafetyModel:
    """
    Parse and build a model in one step.

    Raises:
        ValueError: The text has parse errors
        ValidationFailure: The declarations violate model invariants
    """
    document = parse_document(text)
    if not document.ok:
        first = document.errors[0]
        raise ValueError(f"{len(document.errors)} parse error(s); first: {first.render()}")
    return build_model(document.declarations, tolerate_dangling=tolerate_dangling)
