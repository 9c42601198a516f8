import os
import json
from pathlib import Path
from typing import Dict, Any, Optional
from dotenv import load_dotenv


ENV_PREFIX = "ADDITIVE_BASES"


def load_dotenv_file() -> None:
    """Load environment variables from .env file."""
    # Load from .env file in the current directory
    load_dotenv()

    # Also try loading from config directory
    config_dir = Path.home() / ".additive-bases"
    env_path = config_dir / ".env"
    if env_path.exists():
        load_dotenv(env_path)


def get_config_path(custom_path: Optional[str] = None) -> Path:
    """
    Get the path to the configuration file.

    Args:
        custom_path: Optional custom path to the config file

    Returns:
        Path to the configuration file
    """
    if custom_path:
        config_path = Path(custom_path)
        # Create parent directory if it doesn't exist
        config_path.parent.mkdir(exist_ok=True, parents=True)
        return config_path

    # Default path
    config_dir = Path.home() / ".additive-bases"
    config_dir.mkdir(exist_ok=True)
    return config_dir / "config.json"


def get_default_config() -> Dict[str, Any]:
    """Return the default configuration."""
    return {
        "solver": {
            "node_budget": 2000000,
            "window_multiplier": 2,
        },
        "sweep": {
            "max_cells": 64,
        },
        "probe": {
            "coord_bound": 1,
            "denom_bound": 1,
            "budget": 20000,
        },
        "generators": {
            "power_base": 4,
        },
    }


def load_config(config_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from file, or create default if it doesn't exist.

    Args:
        config_file: Optional path to a custom config file

    Returns:
        The loaded configuration dictionary
    """
    config_path = get_config_path(config_file)

    if config_path.exists():
        try:
            with open(config_path, "r") as f:
                config = json.load(f)

            # Update with any missing default sections and keys
            default_config = get_default_config()
            for section, values in default_config.items():
                stored = config.setdefault(section, {})
                for key, value in values.items():
                    stored.setdefault(key, value)

            return config
        except json.JSONDecodeError:
            # If config file is invalid, return default config
            return get_default_config()
    else:
        # Create default config
        default_config = get_default_config()
        save_config(default_config, config_path)
        return default_config


def save_config(config: Dict[str, Any], config_path: Optional[Path] = None) -> None:
    """
    Save configuration to file.

    Args:
        config: The configuration dictionary to save
        config_path: Optional explicit path to save to (otherwise uses default path)
    """
    if config_path is None:
        config_path = get_config_path()

    with open(config_path, "w") as f:
        json.dump(config, f, indent=2)


def _coerce_like(raw: str, default: Any) -> Any:
    """Convert an environment string to the type of the default value."""
    if isinstance(default, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw)
    return raw


def get_setting(section: str, key: str, config_file: Optional[str] = None) -> Any:
    """
    Get a setting from the environment, the configuration file, or the defaults.

    Args:
        section: Configuration section (e.g., 'solver', 'sweep')
        key: Setting name inside the section (e.g., 'node_budget')
        config_file: Optional path to a custom config file

    Returns:
        The setting value, or None if it is unknown everywhere
    """
    # Make sure .env variables are loaded
    load_dotenv_file()

    default = get_default_config().get(section, {}).get(key)

    # Try environment variable
    env_var_name = f"{ENV_PREFIX}_{section.upper()}_{key.upper()}"
    if env_var_name in os.environ:
        return _coerce_like(os.environ[env_var_name], default)

    # Then try config file
    config = load_config(config_file)
    return config.get(section, {}).get(key, default)


def set_setting(section: str, key: str, value: Any, config_file: Optional[str] = None) -> None:
    """
    Store a setting in the configuration file.

    Args:
        section: Configuration section
        key: Setting name inside the section
        value: Value to store
        config_file: Optional path to a custom config file
    """
    config = load_config(config_file)
    config_path = get_config_path(config_file)

    if section not in config:
        config[section] = {}

    config[section][key] = value
    save_config(config, config_path)
