import os
from typing import Any, Dict, Optional

import toml

GLOBAL_SECTION = "record_tools"
INHERITED_KEYS = ("logging_level", "threads", "output_file_path", "timestamp_file")


class ConfigError(Exception):
    """Raised when a configuration value is missing or invalid."""


def default_config_path() -> str:
    """Config path from RECORD_TOOLS_CONFIG, else config.toml at the project root."""
    env_path = os.getenv("RECORD_TOOLS_CONFIG")
    if env_path:
        return env_path
    current_dir = os.path.dirname(os.path.abspath(__file__))
    project_root = os.path.dirname(os.path.dirname(current_dir))
    return os.path.join(project_root, "config.toml")


def get_config(tool_name: str, config_path: Optional[str] = None) -> Dict[str, Any]:
    """Helper function to process the config.toml file"""
    if config_path is None:
        config_path = default_config_path()

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Config file not found at {config_path}")

    with open(config_path, "r") as f:
        config = toml.load(f)

    if tool_name not in config:
        raise KeyError(f"Configuration for '{tool_name}' not found in config file")

    tool_config: Dict[str, Any] = dict(config[tool_name])

    if GLOBAL_SECTION in config:
        global_config = config[GLOBAL_SECTION]

        # Apply global keys if not set in tool-specific config section
        for key in INHERITED_KEYS:
            if key in global_config and key not in tool_config:
                tool_config[key] = global_config[key]

    return tool_config


def get_optional_config(tool_name: str, config_path: Optional[str] = None) -> Dict[str, Any]:
    """Like get_config, but an absent default config file or section yields {}.

    An explicitly given config_path must exist.
    """
    if config_path is not None:
        return get_config(tool_name, config_path)
    try:
        return get_config(tool_name)
    except (FileNotFoundError, KeyError):
        return {}
