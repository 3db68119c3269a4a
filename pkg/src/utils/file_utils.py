"""File Utility Functions

Provides report and table I/O for the toolkit.
"""

import json
import os
from typing import Any, List, Optional, Sequence

import numpy as np
import pandas as pd

from .logger import get_logger

logger = get_logger(__name__)

# 表格数值统一写出 17 位有效数字
FLOAT_FORMAT = '%.17g'


def ensure_dir(directory: str) -> None:
    """确保目录存在，如果不存在则创建"""
    if directory and not os.path.exists(directory):
        os.makedirs(directory, exist_ok=True)
        logger.info(f"创建目录: {directory}")


def _to_jsonable(value: Any) -> Any:
    """把 numpy 标量、数组和复数转换为 JSON 可写的对象"""
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(np.real(value)), 'im': float(np.imag(value))}
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def save_json(filepath: str, data: Any, indent: int = 2) -> None:
    """保存数据为JSON文件（UTF-8，LF 换行）"""
    try:
        ensure_dir(os.path.dirname(filepath))
        with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(_to_jsonable(data), f, ensure_ascii=False, indent=indent)
            f.write('\n')
        logger.info(f"JSON文件已保存: {filepath}")
    except Exception as e:
        logger.error(f"保存JSON文件失败 {filepath}: {e}")
        raise


def load_json(filepath: str) -> Any:
    """从JSON文件加载数据，文件不存在时返回 None"""
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            data = json.load(f)
        logger.debug(f"JSON文件已加载: {filepath}")
        return data
    except FileNotFoundError:
        logger.warning(f"JSON文件不存在: {filepath}")
        return None
    except json.JSONDecodeError as e:
        logger.error(f"JSON文件格式错误 {filepath}: {e}")
        raise


def split_complex_columns(records: List[dict]) -> List[dict]:
    """把复数字段拆成 <name>_re / <name>_im 两列"""
    rows = []
    for record in records:
        row = {}
        for key, value in record.items():
            if isinstance(value, (complex, np.complexfloating)):
                row[f"{key}_re"] = float(np.real(value))
                row[f"{key}_im"] = float(np.imag(value))
            else:
                row[key] = value
        rows.append(row)
    return rows


def save_table(filepath: str, records: List[dict],
               columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """保存记录为CSV表格

    复数列拆分为实部和虚部；列顺序固定；浮点数写出 17 位有效数字。
    """
    frame = pd.DataFrame(split_complex_columns(records))
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    try:
        ensure_dir(os.path.dirname(filepath))
        frame.to_csv(filepath, index=False, float_format=FLOAT_FORMAT,
                     lineterminator='\n', encoding='utf-8', decimal='.')
        logger.info(f"CSV文件已保存: {filepath}, 共 {len(frame)} 行")
    except Exception as e:
        logger.error(f"保存CSV文件失败 {filepath}: {e}")
        raise
    return frame


def load_table(filepath: str) -> pd.DataFrame:
    """从CSV文件加载表格，文件不存在时返回空表"""
    if not file_exists(filepath):
        logger.warning(f"CSV文件不存在: {filepath}")
        return pd.DataFrame()
    frame = pd.read_csv(filepath, encoding='utf-8', float_precision='round_trip')
    logger.debug(f"CSV文件已加载: {filepath}, 共 {len(frame)} 行")
    return frame


def file_exists(filepath: str) -> bool:
    """检查文件是否存在"""
    return os.path.isfile(filepath)
