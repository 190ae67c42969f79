"""Helpers for sharing the p3t version string."""
from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from functools import lru_cache
from pathlib import Path


@lru_cache(maxsize=1)
def get_version() -> str:
    """Return the canonical package version from pyproject.toml."""
    pyproject_path = Path(__file__).resolve().parent.parent / "pyproject.toml"

    try:
        with open(pyproject_path, "rb") as file:
            data = tomllib.load(file)
        return data["tool"]["poetry"]["version"]
    except FileNotFoundError as exc:
        raise RuntimeError("pyproject.toml not found for version discovery") from exc
    except (KeyError, TypeError) as exc:
        raise RuntimeError("Invalid pyproject.toml structure") from exc


VERSION = get_version()
