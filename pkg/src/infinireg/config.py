"""Load, save, and read defaults from the user configuration."""

from __future__ import annotations

from pathlib import Path

import yaml

CONFIG_DIR = Path.home() / ".infinireg"
CONFIG_FILE = CONFIG_DIR / "config.yaml"

DEFAULTS = {
    "seed": 42,
    "samples": 25,
    "xvars": 1,
    "tvars": 1,
    "degree": 1,
    "height": 3,
    "cap": 6,
    "retry_cap": 100,
    "log_level": "WARNING",
}


def config_exists(path: Path | None = None) -> bool:
    return (path or CONFIG_FILE).exists()


def load_config(path: Path | None = None) -> dict:
    """Load config from YAML file. Returns empty dict if not found."""
    path = path or CONFIG_FILE
    if not path.exists():
        return {}
    with open(path, "r") as f:
        return yaml.safe_load(f) or {}


def save_config(config: dict, path: Path | None = None) -> None:
    """Save config to YAML file, creating directory if needed."""
    path = path or CONFIG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        yaml.dump(config, f, default_flow_style=False, sort_keys=False)


def _get_int(config: dict, key: str) -> int:
    value = config.get(key, DEFAULTS[key])
    try:
        return int(value)
    except (TypeError, ValueError):
        return DEFAULTS[key]


def get_seed(config: dict) -> int:
    return _get_int(config, "seed")


def get_samples(config: dict) -> int:
    return _get_int(config, "samples")


def get_ring_size(config: dict) -> tuple[int, int]:
    """Number of base variables and rank of I. Defaults to (1, 1)."""
    return _get_int(config, "xvars"), _get_int(config, "tvars")


def get_bounds(config: dict) -> tuple[int, int]:
    """Polynomial degree and coefficient height for random generators."""
    return _get_int(config, "degree"), _get_int(config, "height")


def get_cap(config: dict) -> int:
    """Degree cap of the exactness ansatz."""
    return _get_int(config, "cap")


def get_retry_cap(config: dict) -> int:
    return _get_int(config, "retry_cap")


def get_log_level(config: dict) -> str:
    level = str(config.get("log_level", DEFAULTS["log_level"])).upper()
    return level if level in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"} else DEFAULTS["log_level"]


def build_default_config(seed: int = 42, samples: int = 25, cap: int = 6) -> dict:
    """Build a default config dict."""
    config = dict(DEFAULTS)
    config.update({"seed": seed, "samples": samples, "cap": cap})
    return config
