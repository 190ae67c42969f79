"""
Common utilities shared across the p3t modules.

WHY THIS EXISTS:
- Config files and logs live relative to one application directory
- The CLI, the config manager and the logger all need to agree on it
"""

import os
import sys
from pathlib import Path

HOME_ENV_VAR = "P3T_HOME"


def get_app_directory() -> Path:
    """
    Get application directory - works from a checkout and from a frozen build.

    WHY: config.json, config.default.json and the log files are located
    relative to the application directory. Setting P3T_HOME points the whole
    toolchain at another directory (used by tests and batch runs).

    Returns:
        Path: Application directory path
    """
    override = os.environ.get(HOME_ENV_VAR)
    if override:
        return Path(override)
    if getattr(sys, "frozen", False):
        return Path(sys.executable).parent
    # Repository layout: app/ holds code, configs are one level up
    return Path(__file__).resolve().parent.parent
