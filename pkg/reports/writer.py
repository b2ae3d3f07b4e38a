"""
Report file writer.
"""
from pathlib import Path
from typing import Dict, List, Optional

from logger import get_logger

from .bundle import ReportBundle
from .graph import export_graph
from .structured import export_structured
from .tables import render_tables

logger = get_logger()

# Format name to file extension
REPORT_FORMATS: Dict[str, str] = {
    "structured": ".report.json",
    "tables": ".report.md",
    "graph": ".dot",
}


class ReportWriter:
    """Writes report artifacts for a bundle."""

    REPORT_FORMATS = REPORT_FORMATS

    @staticmethod
    def get_supported_formats() -> List[str]:
        return list(REPORT_FORMATS.keys())

    @staticmethod
    def render(bundle: ReportBundle, format: str) -> str:
        """
        Render one artifact as text.

        Raises:
            ValueError: Unknown format
        """
        format_lower = format.lower()
        if format_lower == "structured":
            return export_structured(bundle)
        elif format_lower == "tables":
            return render_tables(bundle)
        elif format_lower == "graph":
            return export_graph(bundle.model)
        raise ValueError(f"Unsupported report format: {format}")

    @staticmethod
    def export(bundle: ReportBundle, out_dir: str, format: str, stem: str) -> Optional[Path]:
        """
        Write one artifact to `<out_dir>/<stem><ext>`.

        Args:
            bundle: Report bundle
            out_dir: Output directory, created if missing
            format: structured, tables or graph
            stem: File name stem

        Returns:
            Written path, or None if writing failed
        """
        ext = REPORT_FORMATS.get(format.lower())
        if ext is None:
            logger.error(f"Unsupported report format: {format}")
            return None
        path = Path(out_dir) / f"{stem}{ext}"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(ReportWriter.render(bundle, format))
            logger.info(f"Wrote {format} report: {path}")
            return path
        except OSError as e:
            logger.error(f"Error writing {format} report to {path}: {e}")
            return None

    @staticmethod
    def export_all(bundle: ReportBundle, out_dir: str, formats: List[str], stem: str) -> Optional[List[Path]]:
        """
        Write several artifacts.

        Returns:
            Written paths in format order, or None if any write failed
        """
        written: List[Path] = []
        for format in formats:
            path = ReportWriter.export(bundle, out_dir, format, stem)
            if path is None:
                return None
            written.append(path)
        return written
