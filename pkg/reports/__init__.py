"""
UniSTPA Reports Module
Deterministic structured, tabular and graph artifacts.
"""
from .bundle import TOOL_NAME, ReportBundle, build_bundle, input_digest
from .graph import check_graph_syntax, dot_quote, export_graph
from .structured import dump_json, export_structured, import_structured, model_to_dict
from .tables import SECTION_TITLES, render_tables
from .writer import REPORT_FORMATS, ReportWriter

__all__ = [
    "ReportBundle",
    "ReportWriter",
    "REPORT_FORMATS",
    "SECTION_TITLES",
    "TOOL_NAME",
    "build_bundle",
    "input_digest",
    "export_structured",
    "import_structured",
    "model_to_dict",
    "dump_json",
    "render_tables",
    "export_graph",
    "check_graph_syntax",
    "dot_quote",
]
