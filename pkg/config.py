"""
UniSTPA Configuration Module
Handles configuration loading, validation, and management.
"""
import copy
import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from config_validator import ConfigValidator
from logger import get_logger

logger = get_logger()

DEFAULT_CONFIG: Dict[str, Any] = {
    "Logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None
    },
    "Guard": {
        "hold": 3,
        "persistence": 2
    },
    "Reports": {
        "formats": ["tables", "structured", "graph"],
        "stem": None
    },
    "Analysis": {
        "strict": False
    }
}


class Config:
    """Main configuration manager for UniSTPA."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration.

        Args:
            config_path: Path to configuration JSON file
        """
        self.config_path = config_path or os.getenv("UNISTPA_CONFIG", "unistpa.json")
        self.explicit = config_path is not None
        self.config: Dict[str, Any] = {}
        self.validator = ConfigValidator()
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration from file, then environment overrides."""
        config_file = Path(self.config_path)
        self.config = self._get_default_config()

        if config_file.exists():
            try:
                with open(config_file, "r", encoding="utf-8") as f:
                    loaded = json.load(f)
                self._merge(loaded)
                logger.info(f"Loaded configuration from {self.config_path}")
            except json.JSONDecodeError as e:
                raise ConfigError(f"Invalid JSON in config file {self.config_path}: {e}") from e
            except OSError as e:
                raise ConfigError(f"Cannot read config file {self.config_path}: {e}") from e
        elif self.explicit:
            raise ConfigError(f"Config file not found: {self.config_path}")
        else:
            logger.debug(f"Config file not found: {self.config_path}, using defaults")

        self._load_from_env()

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration."""
        return copy.deepcopy(DEFAULT_CONFIG)

    def _merge(self, loaded: Any) -> None:
        """Merge a loaded JSON object section by section over the defaults."""
        if not isinstance(loaded, dict):
            raise ConfigError("Config file must contain a JSON object")
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(self.config.get(section), dict):
                self.config[section].update(values)
            else:
                self.config[section] = values

    def _load_from_env(self) -> None:
        """Load configuration from environment variables."""
        if os.getenv("LOG_LEVEL"):
            self.config["Logging"]["level"] = os.getenv("LOG_LEVEL")

        if os.getenv("LOG_FILE"):
            self.config["Logging"]["file"] = os.getenv("LOG_FILE")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            key: Configuration key (supports dot notation)
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key.split(".")
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def validate(self) -> tuple[bool, Optional[str]]:
        """
        Validate current configuration.

        Returns:
            Tuple of (is_valid, error_message)
        """
        checks = (
            ("Logging", self.validator.validate_logging_config),
            ("Guard", self.validator.validate_guard_config),
            ("Reports", self.validator.validate_reports_config),
            ("Analysis", self.validator.validate_analysis_config),
        )
        for section, check in checks:
            is_valid, error = check(self.config.get(section))
            if not is_valid:
                return False, f"Invalid {section} config: {error}"

        return True, None


class ConfigError(Exception):
    """Configuration file could not be loaded."""
    pass
