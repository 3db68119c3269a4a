"""Steepest-descent lens around the stationary points with a small core at each of them.

Every stationary point λ_j sits inside a hexagon of radius r_j whose vertices
are λ_j ± r_j and λ_j + r_j e^{±iα}, λ_j + r_j e^{i(π±α)}. Inside the hexagon the
jump stays on the real segment; outside it the lens pieces leave at angle α
above and below every interval between stationary points. All lens pieces
travel leftward, the hexagon edges counterclockwise and the core segment
rightward.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import ContourError
from ..utils.logger import get_logger
from .panels import Panel, PanelContourMixin, ReferenceRule, lay_out_panels, reference_rule, split_segment

logger = get_logger('contour')

PIECE_KINDS = ('lens', 'edge', 'core')
# 六边形各边：相邻区间（-1 左，+1 右，0 不在透镜内）与所在半平面
EDGE_ZONES = {1: (+1, +1), 2: (0, +1), 3: (-1, +1), 4: (-1, -1), 5: (0, -1), 6: (+1, -1)}


@dataclass(frozen=True)
class LensPiece:
    """One named piece: a lens side over an interval, a hexagon edge or a core segment.

    ``interval`` indexes the gaps between stationary points (0 is the left half
    line); ``side`` is +1 above the real axis and -1 below it.
    """

    name: str
    kind: str
    side: int
    interval: Optional[int]
    point: Optional[int]
    segments: Tuple[Tuple[complex, complex], ...]
    start: int = 0
    stop: int = 0

    def __post_init__(self):
        if self.kind not in PIECE_KINDS:
            raise ContourError(f"未知透镜分支类型: {self.kind}")

    @property
    def slice(self) -> slice:
        return slice(self.start, self.stop)


@dataclass(frozen=True, eq=False)
class LensContour(PanelContourMixin):
    """Union of lens pieces, hexagon edges and core segments."""

    pieces: Tuple[LensPiece, ...]
    alpha: float
    stationary_points: Tuple[float, ...]
    core_radii: Tuple[float, ...]
    outer_radii: Tuple[float, float]
    rule: ReferenceRule
    panels: Tuple[Panel, ...]
    points: np.ndarray
    ds: np.ndarray
    abs_ds: np.ndarray

    kind = 'lens'
    is_complete = True

    def piece(self, name: str) -> LensPiece:
        for piece in self.pieces:
            if piece.name == name:
                return piece
        raise ContourError(f"透镜围道中没有分支 {name}")

    @property
    def piece_names(self) -> Tuple[str, ...]:
        return tuple(p.name for p in self.pieces)

    @property
    def singular_points(self) -> Tuple[complex, ...]:
        """Hexagon vertices, where lens pieces, edges and the core meet."""
        out = []
        for lam, r in zip(self.stationary_points, self.core_radii):
            out.extend(hexagon_vertices(lam, r, self.alpha))
        return tuple(out)

    def refined(self) -> 'LensContour':
        """Every panel bisected."""
        pieces = []
        for piece in self.pieces:
            halves = []
            for a, b in piece.segments:
                mid = 0.5 * (a + b)
                halves.extend([(a, mid), (mid, b)])
            pieces.append(replace(piece, segments=tuple(halves)))
        return _assemble(pieces, self.alpha, self.stationary_points, self.core_radii,
                         self.outer_radii, self.rule)


def hexagon_vertices(lam: float, r: float, alpha: float) -> List[complex]:
    """λ + r, λ + re^{iα}, λ + re^{i(π-α)}, λ - r, λ + re^{i(π+α)}, λ + re^{-iα}."""
    angles = (0.0, alpha, math.pi - alpha, math.pi, math.pi + alpha, -alpha)
    return [complex(lam + r * np.exp(1j * a)) for a in angles]


def _assemble(pieces, alpha, stationary, core_radii, outer_radii, rule) -> LensContour:
    n = rule.order
    placed, segments = [], []
    offset = 0
    for piece in pieces:
        count = len(piece.segments) * n
        placed.append(replace(piece, start=offset, stop=offset + count))
        segments.extend(piece.segments)
        offset += count
    panels, nodes, ds, abs_ds = lay_out_panels(segments, rule)
    return LensContour(tuple(placed), float(alpha), tuple(stationary), tuple(core_radii),
                       tuple(outer_radii), rule, panels, nodes, ds, abs_ds)


def _path(corners: Sequence[complex], max_width: float, width) -> Tuple[Tuple[complex, complex], ...]:
    out = []
    for a, b in zip(corners[:-1], corners[1:]):
        out.extend(split_segment(a, b, max_width, width))
    return tuple(out)


def build_lens_contour(stationary_points: Sequence[float],
                       alpha: float,
                       core_radii: Sequence[float],
                       outer_radii: Tuple[float, float],
                       nodes_per_panel: int = 16,
                       max_width: float = 0.5,
                       width: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                       max_nodes: Optional[int] = None) -> LensContour:
    """Build the lens contour.

    Args:
        stationary_points: 升序驻点 λ_1 < … < λ_n
        alpha: 透镜与实轴的夹角，0 < alpha < π/4
        core_radii: 各驻点处六边形半径 r_j
        outer_radii: 左、右无界透镜分支的截断半径（从 λ_1、λ_n 量起）
        nodes_per_panel: 面板阶数（Gauss–Legendre）
        max_width: 面板最大宽度
        width: 局部面板宽度 z -> 宽度
        max_nodes: 节点数上限
    """
    lams = [float(s) for s in stationary_points]
    if not lams:
        raise ContourError("透镜围道至少需要一个驻点")
    if any(b <= a for a, b in zip(lams[:-1], lams[1:])):
        raise ContourError(f"驻点必须严格递增: {lams}")
    if not 0 < alpha < math.pi / 4:
        raise ContourError(f"alpha 必须在 (0, π/4) 内: {alpha}")
    radii = [float(r) for r in core_radii]
    if len(radii) != len(lams) or any(not r > 0 for r in radii):
        raise ContourError(f"六边形半径无效: {radii}")
    for i, (a, b) in enumerate(zip(lams[:-1], lams[1:])):
        if radii[i] + radii[i + 1] > 0.5 * (b - a):
            raise ContourError(f"驻点 {a}, {b} 处的六边形半径过大: {radii[i]}, {radii[i + 1]}")
    left_R, right_R = (float(r) for r in outer_radii)
    if not (left_R > radii[0] and right_R > radii[-1]):
        raise ContourError(f"截断半径必须大于六边形半径: {outer_radii}")

    tan = math.tan(alpha)
    n_points = len(lams)
    pieces: List[LensPiece] = []

    # 透镜分支（全部向左）
    for i in range(n_points + 1):
        for side, tag in ((+1, 'U'), (-1, 'D')):
            name = f"{tag}{i}"
            if i == n_points:
                lam, r = lams[-1], radii[-1]
                direction = np.exp(1j * side * alpha)
                corners = [lam + right_R * direction, lam + r * direction]
            elif i == 0:
                lam, r = lams[0], radii[0]
                direction = np.exp(1j * (math.pi - side * alpha))
                corners = [lam + r * direction, lam + left_R * direction]
            else:
                a, b = lams[i - 1], lams[i]
                half = 0.5 * (b - a)
                apex = complex(a + half, side * tan * half)
                corners = [b + radii[i] * np.exp(1j * (math.pi - side * alpha)), apex,
                           a + radii[i - 1] * np.exp(1j * side * alpha)]
            pieces.append(LensPiece(name, 'lens', side, i, None,
                                    _path([complex(c) for c in corners], max_width, width)))

    # 六边形（逆时针）与核心实线段（向右）
    for j, (lam, r) in enumerate(zip(lams, radii)):
        v = hexagon_vertices(lam, r, alpha)
        for e in range(1, 7):
            offset, side = EDGE_ZONES[e]
            interval = None if offset == 0 else (j + 1 if offset > 0 else j)
            name = f"B{j}.{e}"
            a, b = v[e - 1], v[e % 6]
            pieces.append(LensPiece(name, 'edge', side, interval, j,
                                    tuple(split_segment(a, b, max_width, width))))
        name = f"S{j}"
        pieces.append(LensPiece(name, 'core', 0, None, j,
                                tuple(split_segment(lam - r, lam + r, max_width, width))))

    rule = reference_rule(nodes_per_panel, 'legendre')
    size = sum(len(p.segments) for p in pieces) * rule.order
    if max_nodes is not None and size > max_nodes:
        logger.error(f"透镜围道需要 {size} 个节点，超过上限 {max_nodes}")
        raise ContourError(f"透镜围道需要 {size} 个节点，超过上限 {max_nodes}")
    contour = _assemble(pieces, alpha, lams, radii, (left_R, right_R), rule)
    logger.debug(f"透镜围道: 驻点 {lams}, r={radii}, R={outer_radii}, 节点 {contour.size} 个")
    return contour
