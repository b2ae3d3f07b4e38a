"""
UniSTPA Core Application Class
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from analysis import Waiver, load_waivers
from config import Config, ConfigError
from dsl_parser import ModelDocument, read_model_file
from logger import UniStpaLogger, get_logger
from reports import ReportBundle, ReportWriter, build_bundle
from runtime_guard import GuardPolicy, ResponseDecision, load_policy, load_trace, simulate_trace
from safety_model import SafetyModel, Violation, try_build_model

logger = get_logger()


@dataclass
class ModelLoad:
    """Outcome of reading, parsing and building one model file."""

    path: str
    document: ModelDocument
    model: Optional[SafetyModel] = None
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.document.ok and self.model is not None


class UniStpaApp:
    """Main UniSTPA application class."""

    def __init__(self, config_path: Optional[str] = None, verbose: bool = False):
        """
        Initialize the application.

        Args:
            config_path: Path to configuration file
            verbose: Log at DEBUG regardless of configuration

        Raises:
            ConfigError: Config file missing (when given explicitly), unreadable or invalid
        """
        self.config = Config(config_path)

        is_valid, error = self.config.validate()
        if not is_valid:
            raise ConfigError(f"Invalid configuration: {error}")

        logging_config = self.config.get("Logging", {})
        UniStpaLogger.setup_logger(
            log_level="DEBUG" if verbose else logging_config.get("level", "WARNING"),
            log_format=logging_config.get("format"),
            log_file=logging_config.get("file"),
        )
        logger.debug("UniSTPA application initialized")

    @property
    def strict(self) -> bool:
        return bool(self.config.get("Analysis.strict", False))

    def load_model(self, path: str, tolerate_dangling: bool = False) -> ModelLoad:
        """
        Read, parse and build a model file.

        Args:
            path: .ustpa file
            tolerate_dangling: Keep dangling references on the model for auditing

        Returns:
            ModelLoad; `model` is None when parsing or building failed

        Raises:
            OSError: File missing or unreadable
            UnicodeDecodeError: File is not UTF-8
        """
        _, document = read_model_file(path)
        if not document.ok:
            logger.warning(f"{path}: {len(document.errors)} parse error(s)")
            return ModelLoad(path, document)

        model, violations = try_build_model(document.declarations, tolerate_dangling)
        if model is None:
            logger.warning(f"{path}: {len(violations)} model violation(s)")
        return ModelLoad(path, document, model, tuple(violations))

    def load_waivers(self, path: str) -> List[Waiver]:
        """Raises OSError or WaiverError."""
        return load_waivers(Path(path).read_text(encoding="utf-8"))

    def base_policy(self) -> GuardPolicy:
        """Default rule table with hold and persistence from the Guard config."""
        return GuardPolicy(
            deescalation_hold=self.config.get("Guard.hold", 3),
            deactivation_persistence=self.config.get("Guard.persistence", 2),
        )

    def load_policy(self, path: Optional[str]) -> GuardPolicy:
        """Raises OSError or PolicyError."""
        base = self.base_policy()
        if path is None:
            return base
        return load_policy(Path(path).read_text(encoding="utf-8"), base)

    def simulate(self, trace_path: str, policy: GuardPolicy) -> List[ResponseDecision]:
        """Raises OSError, TraceFormatError or NonMonotonicStepError."""
        readings = load_trace(Path(trace_path).read_text(encoding="utf-8"))
        return simulate_trace(readings, policy)

    def bundle(self, model: SafetyModel, waivers: Optional[List[Waiver]] = None) -> ReportBundle:
        return build_bundle(model, waivers)

    def report_formats(self, requested: Optional[str]) -> List[str]:
        """Formats for `all` or no request come from the Reports config."""
        if requested and requested != "all":
            return [requested]
        return list(self.config.get("Reports.formats", ReportWriter.get_supported_formats()))

    def write_reports(
        self,
        bundle: ReportBundle,
        out_dir: str,
        formats: List[str],
        model_path: str
    ) -> Optional[List[Path]]:
        """
        Write report files named after the model file (or the configured stem).

        Returns:
            Written paths, or None if any write failed
        """
        stem = self.config.get("Reports.stem") or Path(model_path).stem
        return ReportWriter.export_all(bundle, out_dir, formats, stem)
