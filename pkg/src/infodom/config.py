# infodom/config.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

import os
import yaml
from typing import Any, Dict
from dotenv import dotenv_values, find_dotenv
from importlib import resources
from infodom.logger import get_logger
from infodom.exceptions import ConfigError

logger = get_logger(__name__)

_config = None

#: Environment variable overriding the strategy-oracle guard.
MAX_ORACLE_ENV = "INFODOM_MAX_ORACLE"

def load_config_env() -> dict:
    """Load configuration from environment and .env file.

    Priority: system environment variables > .env file > defaults.

    Returns:
        dict: Configuration dictionary.
    """
    logger.info("Starting to load configuration")
    dotenv_path = find_dotenv(usecwd=True)
    env_cfg = dotenv_values(dotenv_path) if dotenv_path else {}
    cfg = {k: v for k, v in env_cfg.items() if v is not None}
    # System environment variables take higher priority
    cfg.update(os.environ)
    logger.info("Configuration loaded successfully")
    return cfg

def get_config() -> dict:
    """Get the configuration dictionary, loading it if not initialized.

    Returns:
        dict: Configuration dictionary.
    """
    global _config
    if _config is None:
        logger.info("Configuration not initialized, loading now")
        _config = load_config_env()
    return _config

def reset_config() -> None:
    """Drop the cached configuration so the next read reloads it."""
    global _config
    _config = None

def get_max_oracle_pairs() -> int:
    """Get the brute-force oracle guard.

    ``INFODOM_MAX_ORACLE`` overrides the packaged default.

    Returns:
        int: Maximum number of (prefix, action) pairs the oracle accepts.

    Raises:
        ConfigError: If the override is not a positive integer.
    """
    raw = os.environ.get(MAX_ORACLE_ENV, get_config().get(MAX_ORACLE_ENV))
    if raw is None or raw == "":
        return int(ORACLE_CONFIG.get("max_pairs", 1_000_000))
    try:
        value = int(raw)
    except ValueError as e:
        logger.error("%s is not an integer: %r", MAX_ORACLE_ENV, raw)
        raise ConfigError(f"{MAX_ORACLE_ENV} must be a positive integer, got {raw!r}") from e
    if value <= 0:
        raise ConfigError(f"{MAX_ORACLE_ENV} must be a positive integer, got {raw!r}")
    return value

def _load_yaml_config(resource_name: str) -> Dict[str, Any]:
    """Load a YAML configuration file from package resources.

    Args:
        resource_name: Name of the YAML resource file (e.g.,
            ``"defaults.yaml"``).

    Returns:
        Dict[str, Any]: Parsed YAML configuration dictionary.

    Raises:
        RuntimeError: If the resource file is not found.
        ConfigError: If the YAML content is malformed.
    """
    package_name = 'infodom.configs'

    try:
        config_path = resources.files(package_name) / resource_name
        config_data = config_path.read_text(encoding='utf-8')

    except FileNotFoundError as e:
        error_msg = f"Core configuration file '{resource_name}' not found within the '{package_name}' package."
        logger.error(error_msg)
        raise RuntimeError(error_msg) from e

    except ImportError as e:
        logger.error("Cannot access package resource: %s", e)
        raise RuntimeError(f"Failed to access package '{package_name}' resources.") from e

    try:
        config = yaml.safe_load(config_data)

    except yaml.YAMLError as e:
        logger.error("Failed to parse YAML content in %s: %s", resource_name, e)
        raise ConfigError(f"Configuration file '{resource_name}' is malformed.") from e

    if not isinstance(config, dict):
        raise ConfigError(f"Configuration file '{resource_name}' has an invalid root format. Expected a dictionary.")

    return config

def load_defaults_config() -> Dict[str, Any]:
    """Load packaged defaults from ``defaults.yaml``.

    Returns:
        Dict[str, Any]: Defaults configuration dictionary.
    """
    return _load_yaml_config('defaults.yaml')

DEFAULTS_CONFIG: Dict[str, Any] = load_defaults_config()

# Strategy-oracle guard
ORACLE_CONFIG: Dict[str, Any] = DEFAULTS_CONFIG.get('ORACLE', {})

# Decision-problem sampler bounds
SAMPLER_CONFIG: Dict[str, Any] = DEFAULTS_CONFIG.get('SAMPLER', {})

# Random signal / lottery generators
GENERATOR_CONFIG: Dict[str, Any] = DEFAULTS_CONFIG.get('GENERATORS', {})

# Increasing-beta counterexample grid
SEARCH_CONFIG: Dict[str, Any] = DEFAULTS_CONFIG.get('SEARCH', {})

# Acceptance suite sizes
SELFTEST_CONFIG: Dict[str, Any] = DEFAULTS_CONFIG.get('SELFTEST', {})
