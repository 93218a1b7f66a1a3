# ComplexTrees/config.py

from pathlib import Path
from typing import Any, Dict, Optional

import complextrees.default_config as default_config
from complextrees.errors import InputError

# Defaults until set_config overrides them
_config: Optional[Dict] = None


def initialize_config():
    """Initialize the configuration with default values."""
    global _config
    if _config is None:
        _config = default_config.DEFAULT_CONFIG.copy()


def set_config(config: Dict):
    """Override configured values; every key must already exist in DEFAULT_CONFIG."""
    global _config
    unknown = sorted(set(config) - set(default_config.DEFAULT_CONFIG))
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(unknown)}")
    initialize_config()
    _config.update(config)


def reset_config():
    global _config
    _config = default_config.DEFAULT_CONFIG.copy()


def get_config() -> Dict:
    """Get the current configuration."""
    initialize_config()
    return _config.copy()


def resolve(key: str, value: Any = None) -> Any:
    """Return ``value`` unless it is None, else the configured default."""
    if value is not None:
        return value
    return get_config()[key]


def results_path(name: str) -> Path:
    """Default output location for ``name`` under the configured results directory."""
    return Path(resolve("results_dir")) / name


initialize_config()
