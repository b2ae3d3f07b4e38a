"""
Graphviz DOT export of the control structure, clustered by lifecycle stage,
and a minimal DOT syntax checker for the exported subset.
"""
import re
from typing import List, Optional, Tuple

from analysis import is_cross_stage
from safety_model import STAGE_ORDER, EdgeKind, NodeKind, SafetyModel

NODE_STYLE = {
    NodeKind.TECHNICAL: 'shape=box, style=filled, fillcolor="gray"',
    NodeKind.HUMAN: 'shape=ellipse, style=filled, fillcolor="yellow"',
}
EDGE_STYLE = {
    EdgeKind.CONTROL: "style=solid",
    EdgeKind.FEEDBACK: "style=dashed",
}
CROSS_STAGE_STYLE = 'color="red", class="cross_stage"'


def dot_quote(text: str) -> str:
    """DOT double-quoted string; newlines become the \\n label escape."""
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\r", "").replace("\n", "\\n")
    return f'"{escaped}"'


def export_graph(model: SafetyModel) -> str:
    """
    Render the control structure as a DOT digraph.

    One cluster per lifecycle stage in stage order (empty stages included).
    Nodes and edges keep declaration order.

    Args:
        model: Built model

    Returns:
        DOT text, LF line endings
    """
    lines = [
        f"digraph {dot_quote(model.name)} {{",
        "  rankdir=LR;",
        "  compound=true;",
    ]
    for stage in STAGE_ORDER:
        lines.append(f"  subgraph {dot_quote('cluster_' + stage.value)} {{")
        lines.append(f"    label={dot_quote(stage.display_name)};")
        for node in model.nodes:
            if node.stage is stage:
                lines.append(
                    f"    {dot_quote(node.id)} [label={dot_quote(node.label or node.id)}, {NODE_STYLE[node.kind]}];"
                )
        lines.append("  }")

    for edge in model.edges:
        attrs = [EDGE_STYLE[edge.kind]]
        if edge.label:
            attrs.insert(0, f"label={dot_quote(edge.label)}")
        if is_cross_stage(model, edge):
            attrs.append(CROSS_STAGE_STYLE)
        lines.append(f"  {dot_quote(edge.source)} -> {dot_quote(edge.target)} [{', '.join(attrs)}];")

    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_TOKEN = re.compile(
    r'\s+|//[^\n]*|#[^\n]*|/\*.*?\*/'
    r'|(?P<string>"(?:[^"\\]|\\.)*")'
    r'|(?P<id>[A-Za-z_\x80-\uffff][A-Za-z_0-9\x80-\uffff]*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))'
    r'|(?P<edgeop>->|--)'
    r'|(?P<punct>[{}\[\];=,:])',
    re.DOTALL,
)
_DOT_KEYWORDS = {"strict", "graph", "digraph", "subgraph", "node", "edge"}


def _dot_tokens(text: str) -> Tuple[List[Tuple[str, str]], Optional[str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        match = _DOT_TOKEN.match(text, pos)
        if match is None:
            return tokens, f"unexpected character {text[pos]!r} at offset {pos}"
        pos = match.end()
        kind = match.lastgroup
        if kind is None:
            continue
        value = match.group(kind)
        if kind == "id" and value.lower() in _DOT_KEYWORDS:
            kind = "keyword"
            value = value.lower()
        tokens.append((kind, value))
    return tokens, None


class _DotChecker:
    """Recursive-descent recognizer for the DOT grammar subset we emit."""

    def __init__(self, tokens: List[Tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0
        self.errors: List[str] = []

    def _peek(self, offset: int = 0) -> Tuple[str, str]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else ("eof", "")

    def _accept(self, kind: str, value: Optional[str] = None) -> bool:
        tok_kind, tok_value = self._peek()
        if tok_kind == kind and (value is None or tok_value == value):
            self.pos += 1
            return True
        return False

    def _expect(self, kind: str, value: Optional[str] = None) -> None:
        if not self._accept(kind, value):
            found = self._peek()[1] or "end of input"
            raise SyntaxError(f"expected {value or kind} at token {self.pos}, found {found!r}")

    def _is_id(self) -> bool:
        return self._peek()[0] in ("id", "string")

    def _expect_id(self) -> None:
        if not self._is_id():
            found = self._peek()[1] or "end of input"
            raise SyntaxError(f"expected identifier at token {self.pos}, found {found!r}")
        self.pos += 1

    def graph(self) -> None:
        self._accept("keyword", "strict")
        if not (self._accept("keyword", "digraph") or self._accept("keyword", "graph")):
            raise SyntaxError("document must start with 'graph' or 'digraph'")
        if self._is_id():
            self.pos += 1
        self._expect("punct", "{")
        self.stmt_list()
        self._expect("punct", "}")
        if self._peek()[0] != "eof":
            raise SyntaxError(f"trailing content after closing brace at token {self.pos}")

    def stmt_list(self) -> None:
        while self._peek() not in (("punct", "}"), ("eof", "")):
            self.stmt()
            self._accept("punct", ";")

    def attr_list(self) -> None:
        while self._accept("punct", "["):
            while not self._accept("punct", "]"):
                self._expect_id()
                self._expect("punct", "=")
                self._expect_id()
                if not (self._accept("punct", ",") or self._accept("punct", ";")):
                    if self._peek() != ("punct", "]"):
                        raise SyntaxError(f"expected ',' or ']' at token {self.pos}")

    def subgraph(self) -> None:
        self._expect("keyword", "subgraph")
        if self._is_id():
            self.pos += 1
        self._expect("punct", "{")
        self.stmt_list()
        self._expect("punct", "}")

    def operand(self) -> None:
        if self._peek() == ("keyword", "subgraph") or self._peek() == ("punct", "{"):
            if self._peek() == ("punct", "{"):
                self.pos += 1
                self.stmt_list()
                self._expect("punct", "}")
            else:
                self.subgraph()
            return
        self._expect_id()
        if self._accept("punct", ":"):
            self._expect_id()

    def stmt(self) -> None:
        kind, value = self._peek()
        if kind == "keyword" and value in ("graph", "node", "edge"):
            self.pos += 1
            if self._peek() != ("punct", "["):
                raise SyntaxError(f"expected attribute list after '{value}'")
            self.attr_list()
            return
        if self._is_id() and self._peek(1) == ("punct", "="):
            self.pos += 2
            self._expect_id()
            return
        self.operand()
        while self._accept("edgeop"):
            self.operand()
        self.attr_list()


def check_graph_syntax(text: str) -> List[str]:
    """
    Check that text is a syntactically valid DOT graph.

    Covers the statement forms the exporter emits: graph attributes,
    (cluster) subgraphs, node statements and edge chains with attribute
    lists, quoted or bare identifiers.

    Args:
        text: DOT source

    Returns:
        List of error messages; empty when the text is valid
    """
    tokens, lex_error = _dot_tokens(text)
    if lex_error:
        return [lex_error]
    braces = sum(1 for t in tokens if t == ("punct", "{")) - sum(1 for t in tokens if t == ("punct", "}"))
    errors = [f"unbalanced braces ({braces:+d})"] if braces else []
    try:
        _DotChecker(tokens).graph()
    except SyntaxError as e:
        errors.append(str(e))
    return errors
