"""Configuration Utility Module

Provides configuration loading, merging and environment overrides.
"""

import copy
import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import ConfigError
from .file_utils import file_exists
from .logger import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), '..', '..', 'config', 'default.yaml')


def load_config(config_path: str, use_default: bool = True) -> Dict[str, Any]:
    """加载 YAML 或 JSON 配置文件

    yaml.safe_load 同时接受 JSON 文档。文件缺失或格式错误时抛出 ConfigError，
    不会静默回退到默认配置。

    Args:
        config_path: 配置文件路径
        use_default: 是否与默认配置合并

    Returns:
        配置字典
    """
    if not file_exists(config_path):
        logger.error(f"配置文件不存在: {config_path}")
        raise ConfigError(f"配置文件不存在: {config_path}")

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        logger.error(f"配置文件格式错误 {config_path}: {e}")
        raise ConfigError(f"配置文件格式错误 {config_path}: {e}") from e

    if config is None:
        config = {}
    if not isinstance(config, dict):
        raise ConfigError(f"配置文件顶层必须是映射: {config_path}")

    logger.info(f"配置文件已加载: {config_path}")
    if use_default:
        return merge_configs(get_default_config(), config)
    return config


def get_config_value(config: Dict[str, Any], key: str, default: Any = None) -> Any:
    """从配置字典中获取值

    Args:
        config: 配置字典
        key: 配置键，支持点号分隔的嵌套键，如 'grid.nodes_per_panel'
        default: 默认值
    """
    value = config
    try:
        for k in key.split('.'):
            value = value[k]
        return value
    except (KeyError, TypeError):
        return default


def set_config_value(config: Dict[str, Any], key: str, value: Any) -> None:
    """在配置字典中设置值（点号分隔的嵌套键）"""
    keys = key.split('.')
    current = config
    for k in keys[:-1]:
        current = current.setdefault(k, {})
    current[keys[-1]] = value


def merge_configs(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并配置字典，override 优先"""
    result = copy.deepcopy(base)
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


_default_cache: Optional[Dict[str, Any]] = None


def get_default_config() -> Dict[str, Any]:
    """获取默认配置（config/default.yaml）"""
    global _default_cache
    if _default_cache is None:
        path = os.path.normpath(DEFAULT_CONFIG_PATH)
        if not file_exists(path):
            raise ConfigError(f"默认配置缺失: {path}")
        with open(path, 'r', encoding='utf-8') as f:
            _default_cache = yaml.safe_load(f) or {}
    return copy.deepcopy(_default_cache)


def get_env_config() -> Dict[str, Any]:
    """从环境变量（含 .env 文件）获取配置覆盖"""
    load_dotenv()
    env_config: Dict[str, Any] = {}

    if os.getenv('RHP_LOG_LEVEL'):
        set_config_value(env_config, 'logging.level', os.getenv('RHP_LOG_LEVEL'))

    if os.getenv('RHP_THREADS'):
        try:
            set_config_value(env_config, 'run.threads', int(os.getenv('RHP_THREADS')))
        except ValueError as e:
            raise ConfigError(f"RHP_THREADS 不是整数: {os.getenv('RHP_THREADS')}") from e

    if os.getenv('RHP_OUTPUT_DIR'):
        set_config_value(env_config, 'output.dir', os.getenv('RHP_OUTPUT_DIR'))

    return env_config


def init_config(config_path: str) -> Dict[str, Any]:
    """初始化配置：加载文件、合并默认值与环境变量"""
    config = load_config(config_path)
    env_config = get_env_config()
    if env_config:
        config = merge_configs(config, env_config)
        logger.info("已合并环境变量配置")
    return config
