"""
UniSTPA Configuration Validator Module
Validates configuration sections against schema requirements.
"""
from typing import Any, Dict, Optional

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
REPORT_FORMATS = {"tables", "structured", "graph"}


class ConfigValidator:
    """Validates configuration against schema requirements."""

    @staticmethod
    def validate_logging_config(config: Dict[str, Any]) -> tuple[bool, Optional[str]]:
        """
        Validate Logging configuration.

        Args:
            config: Logging config dictionary

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(config, dict):
            return False, "Config must be a dictionary"

        level = config.get("level", "WARNING")
        if not isinstance(level, str) or level.upper() not in LOG_LEVELS:
            return False, f"level must be one of {', '.join(sorted(LOG_LEVELS))}"

        log_format = config.get("format")
        if log_format is not None and not isinstance(log_format, str):
            return False, "format must be a string"

        log_file = config.get("file")
        if log_file is not None and (not isinstance(log_file, str) or not log_file):
            return False, "file must be a non-empty string or null"

        return True, None

    @staticmethod
    def validate_guard_config(config: Dict[str, Any]) -> tuple[bool, Optional[str]]:
        """
        Validate Guard configuration (runtime guard policy defaults).

        Args:
            config: Guard config dictionary

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(config, dict):
            return False, "Config must be a dictionary"

        for field in ("hold", "persistence"):
            value = config.get(field)
            # bool is an int subclass; reject it explicitly
            if isinstance(value, bool) or not isinstance(value, int):
                return False, f"{field} must be an integer"
            if value < 1:
                return False, f"{field} must be >= 1"

        return True, None

    @staticmethod
    def validate_reports_config(config: Dict[str, Any]) -> tuple[bool, Optional[str]]:
        """
        Validate Reports configuration.

        Args:
            config: Reports config dictionary

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(config, dict):
            return False, "Config must be a dictionary"

        formats = config.get("formats")
        if not isinstance(formats, list) or not formats:
            return False, "formats must be a non-empty list"

        unknown = [f for f in formats if f not in REPORT_FORMATS]
        if unknown:
            return False, f"unknown report formats: {', '.join(map(str, unknown))}"

        stem = config.get("stem")
        if stem is not None and (not isinstance(stem, str) or not stem or "/" in stem):
            return False, "stem must be a plain file name stem or null"

        return True, None

    @staticmethod
    def validate_analysis_config(config: Dict[str, Any]) -> tuple[bool, Optional[str]]:
        """
        Validate Analysis configuration.

        Args:
            config: Analysis config dictionary

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(config, dict):
            return False, "Config must be a dictionary"

        if not isinstance(config.get("strict", False), bool):
            return False, "strict must be a boolean"

        return True, None
