"""Configuration management for the slow-fast early-warning toolkit."""

from .settings import Settings, get_settings, reset_settings
from .run_config import RunConfig, load_run_config

__all__ = ["Settings", "get_settings", "reset_settings", "RunConfig", "load_run_config"]
