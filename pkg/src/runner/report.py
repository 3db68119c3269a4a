"""Run report: per-t records, decay experiments, acceptance checks and an environment stamp."""

import os
import platform
import threading
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import scipy

from ..utils.file_utils import ensure_dir, save_json, save_table
from ..utils.logger import get_logger

logger = get_logger('runner')

RECORD_COLUMNS = ('t', 'u_numeric', 'v_numeric', 'u_asym', 'v_asym', 'abs_error',
                  'jump_residual', 'det_deviation', 'condition', 'residual', 'method', 'nodes',
                  'iterations', 'seconds', 'contour', 'route')
COMPLEX_COLUMNS = ('u_numeric', 'v_numeric', 'u_asym', 'v_asym', 'u_abelian')
DECAY_COLUMNS = ('experiment', 'kind', 't', 'value', 'prediction')


def table_columns(records: List[Dict[str, Any]]) -> List[str]:
    """Fixed column order with complex fields split into _re/_im; extra keys are appended."""
    present = set().union(*(r.keys() for r in records)) if records else set()
    ordered = [c for c in RECORD_COLUMNS if c in present]
    ordered += sorted(present - set(RECORD_COLUMNS))
    columns = []
    for name in ordered:
        if name in COMPLEX_COLUMNS:
            columns += [f"{name}_re", f"{name}_im"]
        else:
            columns.append(name)
    return columns


@dataclass
class CheckResult:
    name: str
    status: str
    value: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ''

    @property
    def failed(self) -> bool:
        return self.status == 'fail'

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'status': self.status, 'value': self.value,
                'threshold': self.threshold, 'detail': self.detail}


def check(name: str, passed: bool, value: Optional[float] = None,
          threshold: Optional[float] = None, detail: str = '') -> CheckResult:
    status = 'pass' if passed else 'fail'
    result = CheckResult(name, status, None if value is None else float(value),
                         None if threshold is None else float(threshold), detail)
    log = logger.info if passed else logger.warning
    log(f"检查 {name}: {status} (值 {value}, 阈值 {threshold}) {detail}")
    return result


def skipped(name: str, detail: str) -> CheckResult:
    logger.info(f"检查 {name}: 跳过 ({detail})")
    return CheckResult(name, 'skipped', detail=detail)


def environment_stamp(extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    from .. import __version__
    stamp = {
        'toolkit_version': __version__,
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'pandas': pd.__version__,
        'platform': platform.platform(),
        'created': datetime.now().isoformat(timespec='seconds'),
    }
    if extra:
        stamp.update(extra)
    return stamp


@dataclass
class RunReport:
    """Collects everything a command produces; written even when the run fails."""

    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    records: List[Dict[str, Any]] = field(default_factory=list)
    experiments: List[Dict[str, Any]] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def __post_init__(self):
        self._lock = threading.Lock()

    def add_record(self, record: Dict[str, Any]) -> None:
        with self._lock:
            self.records.append(record)
            self.records.sort(key=lambda r: r['t'])

    def add_experiment(self, summary: Dict[str, Any], rows: List[Dict[str, Any]]) -> None:
        with self._lock:
            self.experiments.append({'summary': summary, 'records': rows})

    def add_check(self, result: CheckResult) -> None:
        with self._lock:
            self.checks.append(result)

    @property
    def passed(self) -> bool:
        return self.error is None and not any(c.failed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'passed': self.passed,
            'error': self.error,
            'environment': environment_stamp(self.config),
            'records': self.records,
            'experiments': self.experiments,
            'checks': [c.to_dict() for c in self.checks],
            'details': self.details,
        }

    def decay_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for exp in self.experiments:
            label = exp['summary'].get('label')
            kind = exp['summary'].get('kind')
            for row in exp['records']:
                rows.append({'experiment': label, 'kind': kind, **row})
        return rows

    def write(self, out_dir: str, formats=('json', 'csv')) -> Dict[str, str]:
        """report.json plus table.csv; decay runs also get one CSV per experiment."""
        ensure_dir(out_dir)
        written = {}
        if 'json' in formats:
            path = os.path.join(out_dir, 'report.json')
            save_json(path, self.to_dict())
            written['json'] = path
        if 'csv' in formats:
            path = os.path.join(out_dir, 'table.csv')
            if self.records:
                save_table(path, self.records, table_columns(self.records))
            else:
                save_table(path, self.decay_rows(), DECAY_COLUMNS)
            written['csv'] = path
            for i, exp in enumerate(self.experiments):
                kind = exp['summary'].get('kind')
                save_table(os.path.join(out_dir, f"decay_{i:02d}_{kind}.csv"), exp['records'],
                           ('t', 'value', 'prediction'))
        logger.info(f"报告已写出: {out_dir} ({'通过' if self.passed else '未通过'})")
        return written
