"""Path utilities for locating plugins, configuration and results."""

from pathlib import Path

from core.constants import APP_NAME


def get_app_dir() -> Path:
    """Get the application directory (the one containing main.py)."""
    return Path(__file__).parent.parent


def get_plugins_dir() -> Path:
    """Get the plugins directory."""
    return get_app_dir() / "plugins"


def get_results_dir(base: Path | None = None) -> Path:
    """Get (and create) the directory results are written to by default."""
    results_dir = (base or Path.cwd()) / "results"
    results_dir.mkdir(parents=True, exist_ok=True)
    return results_dir


def get_config_path(base: Path | None = None) -> Path:
    """Get the implicit config file path, picked up when it exists."""
    return (base or Path.cwd()) / f"{APP_NAME}.conf"
