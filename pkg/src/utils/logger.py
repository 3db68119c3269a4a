"""Logging Utility Module

Provides centralized logging configuration for the toolkit.
"""

import logging
import os
from datetime import datetime
from typing import Optional

import coloredlogs

# 全局日志配置
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# 日志级别映射
LOG_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL
}

# 进程内默认级别与日志文件，由 CLI 根据配置调整
_default_level = 'INFO'
_log_path: Optional[str] = None


def _configured_loggers():
    for name in list(logging.root.manager.loggerDict):
        logger = logging.getLogger(name)
        if getattr(logger, '_rhp_configured', False):
            yield logger


def set_default_level(level: str) -> None:
    """设置之后创建的日志记录器的默认级别，并同步已有的记录器"""
    global _default_level
    _default_level = level.upper()
    log_level = LOG_LEVELS.get(_default_level, logging.INFO)
    for logger in _configured_loggers():
        logger.setLevel(log_level)
        for handler in logger.handlers:
            handler.setLevel(log_level)


def _add_file_handler(logger: logging.Logger, path: str) -> None:
    if any(getattr(h, 'baseFilename', None) == os.path.abspath(path) for h in logger.handlers):
        return
    file_handler = logging.FileHandler(path, encoding='utf-8')
    file_handler.setLevel(logger.level)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
    logger.addHandler(file_handler)


def enable_file_logging(log_file: str, log_dir: str = 'logs') -> str:
    """所有记录器（含之后创建的）同时写入 log_dir/log_file"""
    global _log_path
    os.makedirs(log_dir, exist_ok=True)
    if not log_file.endswith('.log'):
        log_file += '.log'
    _log_path = os.path.join(log_dir, log_file)
    for logger in _configured_loggers():
        _add_file_handler(logger, _log_path)
    return _log_path


def setup_logger(name: str = 'main',
                 level: Optional[str] = None) -> logging.Logger:
    """设置并返回配置好的日志记录器

    Args:
        name: 日志记录器名称
        level: 日志级别 (DEBUG, INFO, WARNING, ERROR, CRITICAL)，None 表示使用默认级别

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)

    # 避免重复添加处理器
    if getattr(logger, '_rhp_configured', False):
        return logger

    log_level = LOG_LEVELS.get((level or _default_level).upper(), logging.INFO)
    logger.setLevel(log_level)
    logger.propagate = False

    # 彩色控制台输出
    coloredlogs.install(level=log_level, logger=logger, fmt=LOG_FORMAT, datefmt=DATE_FORMAT)
    if _log_path:
        _add_file_handler(logger, _log_path)

    logger._rhp_configured = True
    return logger


def get_logger(name: str = 'main') -> logging.Logger:
    """获取日志记录器，未配置时使用默认配置"""
    logger = logging.getLogger(name)
    if not getattr(logger, '_rhp_configured', False):
        return setup_logger(name)
    return logger


def create_daily_log_file(base_name: str = 'rhp') -> str:
    """创建基于日期的日志文件名"""
    today = datetime.now().strftime('%Y-%m-%d')
    return f"{base_name}_{today}.log"

