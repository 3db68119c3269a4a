"""Validated experiment plan built from the merged configuration document."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from ..contour.panels import NODE_FAMILIES
from ..delta.reflection import ReflectionPair, SYMMETRIES, pair_from_config
from ..phase.phase import PhaseSpec
from ..phase.presets import PRESETS, phase_from_config
from ..utils.config_utils import get_default_config, merge_configs
from ..utils.errors import ConfigError, FactorizationError, PhaseError
from ..utils.logger import LOG_LEVELS, get_logger

logger = get_logger('runner')

STAGES = ('abelian', 'error-order', 'phase-tracking', 'symmetry', 'separation', 'deformation',
          'conditioning', 'convergence')
CONTOURS = ('auto', 'real', 'lens')
METHODS = ('auto', 'dense', 'gmres')
FORMATS = ('json', 'csv')
CONSTANT_SOURCES = ('numeric-model-constant', 'explicit-first-order')
DECAY_KEYS = {
    'hardy-localization': {'kind', 'label', 'phase', 'support', 'k', 'p', 'backend', 'amplitude', 'ts'},
    'vanishing-multiplicity': {'kind', 'label', 'phase', 'j', 'm', 'k', 'p', 'radius', 'ts'},
    'linear-phase': {'kind', 'label', 'phase', 'support', 'k', 'j', 'm', 'radius', 'bump_order', 'ts'},
    'almost-orthogonality': {'kind', 'label', 'phase', 'centers', 'radius', 'amplitudes', 'p',
                             'swap', 'ts'},
    'perturbation': {'kind', 'label', 'amplitude', 'structure', 'radius', 'ts'},
}
# blocks whose values are free-form and skip the unknown-key walk
OPEN_KEYS = {'phase.pieces', 'phase.coefficients', 'decay.experiments', 'run.t', 'run.stages',
             'output.formats', 'decay.ts', 'run.check_t'}


def _reject_unknown(doc: Dict[str, Any], schema: Dict[str, Any], path: str = '') -> None:
    for key, value in doc.items():
        dotted = f"{path}.{key}" if path else key
        if key not in schema:
            logger.error(f"未知配置键: {dotted}")
            raise ConfigError(f"未知配置键: {dotted}")
        if dotted in OPEN_KEYS:
            continue
        if isinstance(schema[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"配置块 {dotted} 必须是映射")
            _reject_unknown(value, schema[key], dotted)


def _positive(value, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name} 必须是数值: {value}") from e
    if not value > 0 or not math.isfinite(value):
        raise ConfigError(f"{name} 必须为正: {value}")
    return value


def parse_t_list(text: str) -> Tuple[float, ...]:
    """'1,2,4' -> (1.0, 2.0, 4.0)."""
    try:
        return tuple(float(item) for item in text.split(',') if item.strip())
    except ValueError as e:
        raise ConfigError(f"无法解析 t 列表: {text}") from e


def _ts_from(run: Dict[str, Any]) -> Tuple[float, ...]:
    rng = run.get('t_range')
    if rng:
        unknown = set(rng) - {'start', 'ratio', 'count'}
        if unknown:
            raise ConfigError(f"未知配置键: run.t_range.{sorted(unknown)[0]}")
        start = _positive(rng.get('start'), 'run.t_range.start')
        ratio = _positive(rng.get('ratio', 2.0), 'run.t_range.ratio')
        count = int(rng.get('count', 5))
        ts = tuple(start * ratio ** i for i in range(count))
    else:
        ts = tuple(run.get('t') or ())
    if not ts:
        raise ConfigError("t 列表为空")
    return tuple(_positive(t, 'run.t') for t in ts)


@dataclass(frozen=True)
class GridPlan:
    L: float
    nodes_per_panel: int
    panel_width: float
    node_family: str
    gamma_alpha: Optional[float]
    gamma_nodes_per_ray: int
    localize_radius: float
    premodel_decay: int
    real_max_nodes: int
    lens_max_nodes: int


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated plan; nothing is computed before this exists."""

    phase: PhaseSpec
    pair: ReflectionPair
    grid: GridPlan
    ts: Tuple[float, ...]
    stages: Tuple[str, ...]
    threads: int
    method: str
    seed: int
    constant_source: str
    tolerances: Dict[str, float]
    contour: str
    check_ts: Tuple[float, ...]
    convergence_t_max: float
    decay_ts: Tuple[float, ...]
    decay_experiments: Tuple[Dict[str, Any], ...]
    output_dir: str
    formats: Tuple[str, ...]
    log_level: str = 'INFO'
    raw: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_dict(cls, doc: Dict[str, Any], preset: Optional[str] = None,
                  ts: Optional[Sequence[float]] = None, threads: Optional[int] = None,
                  output_dir: Optional[str] = None) -> 'ExperimentConfig':
        """Validate a configuration document merged over the defaults.

        CLI overrides (preset, t list, threads, output directory) win over the file.
        """
        defaults = get_default_config()
        _reject_unknown(doc, defaults)
        merged = merge_configs(defaults, doc)
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(f"未知相位预设: {preset}")
            merged['phase'] = merge_configs(merged['phase'], {'preset': preset})
        if ts is not None:
            merged['run']['t'] = list(ts)
            merged['run']['t_range'] = None
        if threads is not None:
            merged['run']['threads'] = threads
        if output_dir is not None:
            merged['output']['dir'] = output_dir

        try:
            phase = phase_from_config(merged['phase'])
        except PhaseError as e:
            raise ConfigError(f"相位配置无效: {e}") from e
        refl = merged['reflection']
        if refl.get('symmetry') not in SYMMETRIES:
            raise ConfigError(f"未知对称类型: {refl.get('symmetry')}")
        try:
            pair = pair_from_config(refl)
        except FactorizationError as e:
            raise ConfigError(f"反射系数配置无效: {e}") from e

        g = merged['grid']
        grid = GridPlan(
            L=_positive(g['L'], 'grid.L'),
            nodes_per_panel=int(g['nodes_per_panel']),
            panel_width=_positive(g['panel_width'], 'grid.panel_width'),
            node_family=str(g['node_family']),
            gamma_alpha=None if g.get('gamma_alpha') is None else _positive(g['gamma_alpha'], 'grid.gamma_alpha'),
            gamma_nodes_per_ray=int(g['gamma_nodes_per_ray']),
            localize_radius=_positive(g['localize_radius'], 'grid.localize_radius'),
            premodel_decay=int(g['premodel_decay']),
            real_max_nodes=int(g['real_max_nodes']),
            lens_max_nodes=int(g['lens_max_nodes']),
        )
        if min(grid.real_max_nodes, grid.lens_max_nodes) < grid.nodes_per_panel:
            raise ConfigError(f"节点上限必须至少为一个面板: {grid.real_max_nodes}, {grid.lens_max_nodes}")
        if grid.gamma_nodes_per_ray <= 0 or grid.gamma_nodes_per_ray % grid.nodes_per_panel:
            raise ConfigError(f"grid.gamma_nodes_per_ray={grid.gamma_nodes_per_ray} 不是 "
                              f"nodes_per_panel={grid.nodes_per_panel} 的整数倍")
        if grid.node_family not in NODE_FAMILIES:
            raise ConfigError(f"未知节点族: {grid.node_family}")
        if merged['logging']['level'].upper() not in LOG_LEVELS:
            raise ConfigError(f"未知日志级别: {merged['logging']['level']}")
        for lam in phase.stationary_locations:
            if not -grid.L < lam < grid.L:
                raise ConfigError(f"驻点 {lam} 不在 (-L, L) 内, L={grid.L}")

        run = merged['run']
        stages = tuple(run.get('stages') or ())
        for stage in stages:
            if stage not in STAGES:
                raise ConfigError(f"未知阶段: {stage}")
        if run['method'] not in METHODS:
            raise ConfigError(f"未知求解方法: {run['method']}")
        if run['contour'] not in CONTOURS:
            raise ConfigError(f"未知围道选择: {run['contour']}")
        check_ts = tuple(_positive(t, 'run.check_t') for t in (run.get('check_t') or ()))
        if 'deformation' in stages and not check_ts:
            raise ConfigError("deformation 阶段需要非空的 run.check_t")
        if run['constant_source'] not in CONSTANT_SOURCES:
            raise ConfigError(f"未知常数来源: {run['constant_source']}")
        threads_value = int(run['threads'])
        if threads_value < 1:
            raise ConfigError(f"线程数必须 ≥ 1: {threads_value}")

        decay = merged['decay']
        experiments = tuple(decay.get('experiments') or ())
        for item in experiments:
            kind = item.get('kind') if isinstance(item, dict) else None
            if kind not in DECAY_KEYS:
                raise ConfigError(f"未知衰减实验类型: {kind}")
            unknown = set(item) - DECAY_KEYS[kind]
            if unknown:
                raise ConfigError(f"衰减实验 {kind} 含未知键: {sorted(unknown)}")

        formats = tuple(merged['output'].get('formats') or FORMATS)
        for fmt in formats:
            if fmt not in FORMATS:
                raise ConfigError(f"未知输出格式: {fmt}")

        plan = cls(
            phase=phase, pair=pair, grid=grid, ts=_ts_from(run), stages=stages,
            threads=threads_value, method=run['method'], seed=int(run['seed']),
            constant_source=run['constant_source'],
            tolerances={k: float(v) for k, v in run['tolerances'].items()},
            contour=run['contour'], check_ts=check_ts,
            convergence_t_max=_positive(run['convergence_t_max'], 'run.convergence_t_max'),
            decay_ts=tuple(float(t) for t in decay['ts']), decay_experiments=experiments,
            output_dir=str(merged['output']['dir']), formats=formats,
            log_level=str(merged['logging']['level']), raw=merged,
        )
        logger.info(f"配置已校验: 相位 {phase.name}, 对称 {pair.symmetry}, t={list(plan.ts)}")
        return plan

    def phase_for(self, block: Optional[Dict[str, Any]]) -> PhaseSpec:
        """Phase for a decay experiment: its own block or the run's phase."""
        if not block:
            return self.phase
        try:
            return phase_from_config(block)
        except PhaseError as e:
            raise ConfigError(f"实验相位配置无效: {e}") from e

    def stamp(self) -> Dict[str, Any]:
        return {
            'phase': self.phase.name,
            'stationary_points': self.phase.stationary_locations,
            'symmetry': self.pair.symmetry,
            'grid': self.grid.__dict__,
            'tolerances': self.tolerances,
            'seed': self.seed,
            'method': self.method,
            'threads': self.threads,
            'contour': self.contour,
            'check_t': list(self.check_ts),
        }
