"""Shipped domain and script files."""
from __future__ import annotations

from importlib import resources
from pathlib import Path


def shopping_domain_path() -> Path:
    """Path of the bundled shopping domain file."""
    return Path(resources.files(__name__) / "shopping.domain")


def script_path(name: str) -> Path:
    """Path of a bundled dialogue script, e.g. ``fig1``."""
    return Path(resources.files(__name__) / "scripts" / f"{name}.script")
