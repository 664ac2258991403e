# -*- coding: utf-8 -*-
"""
Configuration Manager with Persistence
core/config.py

FEATURES:
- Load/Save configuration to JSON file
- Deep merge over defaults (old config files keep working)
- Engine limits (atom cap, oracle and automaton ceilings)
- CLI defaults (mode, bound, seed, law samples)
"""

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)

# Hard maximum for explicit atom enumeration; configs asking for more are clamped
HARD_MAX_TESTS = 20

CONFIG_ENV = "GKATCHECK_CONFIG"

DEFAULTS = {
    "version": "0.1.0",

    # Engine limits
    "max_tests": 12,
    "oracle_max_strings": 1_000_000,
    "max_gkat_states": 100_000,
    "max_dfa_states": 100_000,

    # CLI defaults
    "default_mode": "lang",
    "default_bound": 3,
    "default_seed": 0,
    "law_samples": 200,

    "log_level": "WARNING",
}


class Config:
    """Configuration manager with file persistence"""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_file: Path to config file. Falls back to $GKATCHECK_CONFIG,
                then ~/.config/gkatcheck/config.json
        """
        if config_file is None:
            config_file = os.environ.get(CONFIG_ENV)
        if config_file is None:
            config_file = Path.home() / ".config" / "gkatcheck" / "config.json"

        self.config_file = Path(config_file)
        self.defaults = dict(DEFAULTS)
        self.config = self.load()

        logger.debug("Config loaded from: %s", self.config_file)

    def load(self) -> dict:
        """
        Load configuration from JSON file.

        Returns:
            dict: Configuration dictionary
        """
        if not self.config_file.exists():
            logger.debug("No config file found, using defaults")
            return self.defaults.copy()

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                loaded_config = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Error loading config %s: %s; using defaults", self.config_file, e)
            return self.defaults.copy()

        if not isinstance(loaded_config, dict):
            logger.warning("Config %s is not a JSON object; using defaults", self.config_file)
            return self.defaults.copy()

        # Merge with defaults (in case new keys were added)
        config = self.defaults.copy()
        for key, value in loaded_config.items():
            if key in config and isinstance(config[key], dict) and isinstance(value, dict):
                config[key] = {**config[key], **value}
            else:
                config[key] = value

        return config

    def save(self) -> bool:
        """
        Save configuration to JSON file.

        Returns:
            bool: True if saved successfully
        """
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=4, ensure_ascii=False)
            logger.info("Config saved to: %s", self.config_file)
            return True
        except OSError as e:
            logger.error("Error saving config: %s", e)
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            key: Configuration key
            default: Default value if key not found

        Returns:
            Configuration value
        """
        return self.config.get(key, default)

    def set(self, key: str, value: Any, auto_save: bool = False) -> None:
        """
        Set configuration value.

        Args:
            key: Configuration key
            value: Value to set
            auto_save: Automatically save to file (default: False)
        """
        self.config[key] = value

        if auto_save:
            self.save()

    # ===== LIMITS =====

    def get_limits(self) -> "Limits":
        """Typed view of the engine limits"""
        return Limits.from_config(self)

    def get_log_level(self) -> int:
        """Logging level from config, WARNING when unknown"""
        level = logging.getLevelName(str(self.get("log_level", "WARNING")).upper())
        return level if isinstance(level, int) else logging.WARNING


@dataclass(frozen=True)
class Limits:
    """Resource ceilings consumed by the engine."""
    max_tests: int = DEFAULTS["max_tests"]
    oracle_max_strings: int = DEFAULTS["oracle_max_strings"]
    max_gkat_states: int = DEFAULTS["max_gkat_states"]
    max_dfa_states: int = DEFAULTS["max_dfa_states"]

    def __post_init__(self):
        if self.max_tests > HARD_MAX_TESTS:
            logger.warning("max_tests=%d clamped to hard maximum %d", self.max_tests, HARD_MAX_TESTS)
            object.__setattr__(self, "max_tests", HARD_MAX_TESTS)
        if self.max_tests < 0:
            raise ConfigError(f"max_tests must be non-negative, got {self.max_tests}")

    @classmethod
    def from_config(cls, config: Config) -> "Limits":
        """
        Raises:
            ConfigError: a limit is not an integer or is negative
        """
        values = {}
        for key in ("max_tests", "oracle_max_strings", "max_gkat_states", "max_dfa_states"):
            raw = config.get(key, DEFAULTS[key])
            try:
                values[key] = int(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"config key {key} must be an integer, got {raw!r}") from None
        return cls(**values)


# Globalna instanca
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global Config instance (created on first use)."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def set_config(config: Optional[Config]) -> None:
    """Replace the global Config (None resets to lazy default)."""
    global _config
    _config = config


def default_limits() -> Limits:
    """Limits from the global config"""
    return get_config().get_limits()
