"""Truncated real line discretised by graded panels."""

from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import ContourError
from ..utils.logger import get_logger
from .panels import (GRADING_FLOOR, NODE_FAMILIES, Panel, PanelContourMixin, ReferenceRule,
                     lay_out_panels, reference_rule, split_segment)

logger = get_logger('contour')

MIN_NODES_PER_PANEL = 8


@dataclass(frozen=True, eq=False)
class RealGrid(PanelContourMixin):
    """[-L, L] cut into panels at -L, L, the stationary points and any extra breakpoints.

    ``nodes`` are real and strictly increasing; ``weights`` are positive and
    sum to 2L. Panels touching a stationary point are graded geometrically toward it.
    """

    L: float
    rule: ReferenceRule
    breakpoints: Tuple[float, ...]
    stationary_points: Tuple[float, ...]
    panels: Tuple[Panel, ...]
    points: np.ndarray
    ds: np.ndarray
    abs_ds: np.ndarray

    kind = 'real'
    is_complete = True

    @property
    def nodes(self) -> np.ndarray:
        return self.points.real

    @property
    def weights(self) -> np.ndarray:
        return self.abs_ds

    @property
    def panel_edges(self) -> np.ndarray:
        return np.array([p.a.real for p in self.panels] + [self.panels[-1].b.real])

    @property
    def singular_points(self) -> Tuple[complex, ...]:
        return tuple(complex(s) for s in self.stationary_points)

    def refined(self) -> 'RealGrid':
        """The same grid with every panel bisected (twice the nodes)."""
        panels, nodes, ds, abs_ds = lay_out_panels(self.bisected_segments(), self.rule)
        return replace(self, panels=panels, points=nodes, ds=ds, abs_ds=abs_ds)


def build_real_grid(L: float,
                    nodes_per_panel: int,
                    stationary_points: Sequence[float],
                    panel_width: float = 0.5,
                    node_family: str = 'chebyshev',
                    extra_breakpoints: Iterable[float] = (),
                    width: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                    grading_floor: float = GRADING_FLOOR,
                    max_nodes: Optional[int] = None) -> RealGrid:
    """Build the panel grid on [-L, L].

    Args:
        L: 截断半宽
        nodes_per_panel: 每个面板的节点数（≥ 8）
        stationary_points: 驻点，全部成为断点并在其两侧做几何加密
        panel_width: 断点之间面板的最大宽度
        node_family: 'chebyshev'（第一类 Chebyshev 节点 + Fejér 权重）或 'legendre'
        extra_breakpoints: 额外断点（不加密），用于带尖点的测试函数
        width: 局部面板宽度上限 x -> 宽度，通常来自 oscillation_width(θ', t, 包络)
        grading_floor: 最内加密面板相对于相邻面板的长度
        max_nodes: 节点数上限；超过时报错而不是给出未解析的网格
    """
    if not L > 0:
        raise ContourError(f"截断半宽必须为正: L={L}")
    if nodes_per_panel < MIN_NODES_PER_PANEL:
        raise ContourError(f"每个面板至少 {MIN_NODES_PER_PANEL} 个节点: {nodes_per_panel}")
    if not panel_width > 0:
        raise ContourError(f"面板宽度必须为正: {panel_width}")
    if node_family not in NODE_FAMILIES:
        raise ContourError(f"未知节点族: {node_family}")
    if not 0 < grading_floor < 1:
        raise ContourError(f"加密下限必须在 (0, 1) 内: {grading_floor}")

    points = sorted(float(s) for s in stationary_points)
    for s in points:
        if not -L < s < L:
            raise ContourError(f"驻点 {s} 不在 (-{L}, {L}) 内")
    extras = [float(e) for e in extra_breakpoints if -L < float(e) < L]
    breaks = sorted(set([-float(L), float(L)] + points + extras))

    real_width = None
    if width is not None:
        def real_width(z):
            return width(np.real(z))

    stationary = set(points)
    segments: List[Tuple[complex, complex]] = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        segments.extend(split_segment(a, b, panel_width, real_width,
                                      grade_start=a in stationary, grade_end=b in stationary,
                                      floor=grading_floor))

    rule = reference_rule(nodes_per_panel, node_family)
    size = len(segments) * rule.order
    if max_nodes is not None and size > max_nodes:
        logger.error(f"实轴网格需要 {size} 个节点，超过上限 {max_nodes}")
        raise ContourError(f"实轴网格需要 {size} 个节点，超过上限 {max_nodes}")
    panels, nodes, ds, abs_ds = lay_out_panels(segments, rule)
    grid = RealGrid(float(L), rule, tuple(breaks), tuple(points), panels, nodes, ds, abs_ds)
    logger.debug(f"实轴网格: L={L}, 面板 {len(panels)} 个, 节点 {grid.size} 个, 驻点 {points}")
    return grid
