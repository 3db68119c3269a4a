"""Utility Functions Module

Provides common utility functions for:
- Logging setup (coloredlogs console output, optional log files)
- Configuration management (YAML/JSON files, defaults, environment overrides)
- Report and table I/O
- The shared exception hierarchy
"""

from .errors import (
    RhpToolkitError, ConfigError, ContourError, CauchyError,
    PhaseError, FactorizationError, SolveError, ExtrapolationError,
    SingularMatrixError,
)
from .file_utils import ensure_dir, save_json, load_json, save_table, load_table
from .config_utils import load_config, init_config, get_config_value, merge_configs
from .logger import setup_logger, get_logger, set_default_level, enable_file_logging

__all__ = [
    'RhpToolkitError', 'ConfigError', 'ContourError', 'CauchyError',
    'PhaseError', 'FactorizationError', 'SolveError', 'ExtrapolationError',
    'SingularMatrixError',
    'ensure_dir', 'save_json', 'load_json', 'save_table', 'load_table',
    'load_config', 'init_config', 'get_config_value', 'merge_configs',
    'setup_logger', 'get_logger', 'set_default_level', 'enable_file_logging',
]
