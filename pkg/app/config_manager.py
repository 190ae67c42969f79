"""
Configuration management for p3t.

This module centralizes all configuration-related operations
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

from .common import get_app_directory

logger = logging.getLogger("p3t.config")

FRINGE_LAYOUTS = ("shift", "box")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

DEFAULT_CONFIG: Dict[str, Any] = {
    "max_escalations": 3,
    "fringe_layout": "shift",
    "verify_after_embed": False,
    "render_scale": 8.0,
    "render_arc_samples": 32,
    "render_show_grid": False,
    "render_grid_limit": 20000,
    "stats_sample_size": 100,
    "stats_seed": 0,
    "log_level": "INFO",
}


class ConfigManager:
    """
    Centralized configuration management for p3t.

    WHY THIS CLASS EXISTS:
    - Provides one place for embedder, renderer and stats settings
    - Handles default config fallback and value validation
    """

    def __init__(self, app_dir: Path = None):
        """
        Initialize ConfigManager with application directory.

        Args:
            app_dir: Application directory path. If None, uses get_app_directory()
        """
        self.app_dir = app_dir or get_app_directory()
        self.config_path = self.app_dir / "config.json"
        self.default_config_path = self.app_dir / "config.default.json"

    def load_config(self) -> Dict[str, Any]:
        """
        Load configuration from file with defaults.

        WHY: A fresh checkout only ships config.default.json; the first run
        materializes config.json from it so users have a file to edit.

        Returns:
            Dict: Configuration dictionary with every known key populated
        """
        config = None

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                config = json.load(f)
        except FileNotFoundError:
            try:
                with open(self.default_config_path, "r", encoding="utf-8") as f:
                    config = json.load(f)
                logger.info(
                    "Loaded default configuration from %s", self.default_config_path
                )
            except FileNotFoundError:
                config = dict(DEFAULT_CONFIG)
                logger.info("Using hardcoded default configuration")
            self.save_config(config)
        except json.JSONDecodeError as exc:
            logger.warning("Ignoring unreadable %s: %s", self.config_path, exc)
            config = dict(DEFAULT_CONFIG)

        if not isinstance(config, dict):
            config = dict(DEFAULT_CONFIG)

        return self.ensure_config_defaults(config)

    def save_config(self, config: Dict[str, Any]) -> None:
        """
        Save configuration to file.

        Args:
            config: Configuration dictionary to save
        """
        try:
            self.app_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, "w", encoding="utf-8") as f:
                json.dump(config, f, indent=2)
        except OSError as e:
            logger.warning("Failed to save configuration: %s", e)

    def ensure_config_defaults(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Ensure all required config fields have valid values.

        WHY: Prevents missing or hand-edited fields from breaking a run.

        Args:
            config: Configuration dictionary to check/update

        Returns:
            Dict: Configuration with all required fields populated
        """
        changed = False

        for key, value in DEFAULT_CONFIG.items():
            if key not in config:
                config[key] = value
                changed = True

        # === Value validation ===
        try:
            escalations = int(config["max_escalations"])
        except (TypeError, ValueError):
            escalations = DEFAULT_CONFIG["max_escalations"]
        escalations = max(0, escalations)
        if config["max_escalations"] != escalations:
            config["max_escalations"] = escalations
            changed = True

        if config["fringe_layout"] not in FRINGE_LAYOUTS:
            config["fringe_layout"] = DEFAULT_CONFIG["fringe_layout"]
            changed = True

        try:
            samples = int(config["render_arc_samples"])
        except (TypeError, ValueError):
            samples = DEFAULT_CONFIG["render_arc_samples"]
        if samples < 2:
            samples = 2
        if config["render_arc_samples"] != samples:
            config["render_arc_samples"] = samples
            changed = True

        try:
            scale = float(config["render_scale"])
        except (TypeError, ValueError):
            scale = DEFAULT_CONFIG["render_scale"]
        if scale <= 0:
            scale = DEFAULT_CONFIG["render_scale"]
        if config["render_scale"] != scale:
            config["render_scale"] = scale
            changed = True

        level = str(config["log_level"]).upper()
        if level not in LOG_LEVELS:
            level = DEFAULT_CONFIG["log_level"]
        if config["log_level"] != level:
            config["log_level"] = level
            changed = True

        if changed:
            self.save_config(config)

        return config


# === Factory function for convenience ===


def create_config_manager(app_dir: Path = None) -> ConfigManager:
    """
    Create a ConfigManager instance.

    Args:
        app_dir: Application directory. If None, uses get_app_directory()

    Returns:
        ConfigManager: Configured instance ready to use
    """
    return ConfigManager(app_dir)
