"""The six-ray contour Γ through a point and its sector geometry."""

import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from ..utils.errors import ContourError
from ..utils.logger import get_logger
from .panels import (GRADING_FLOOR, Panel, PanelContourMixin, ReferenceRule, lay_out_panels,
                     reference_rule, split_segment)

logger = get_logger('contour')

RAY_NAMES = ('G0', 'G1', 'G2', 'G3', 'G4', 'G5')
OUTWARD_RAYS = ('G0', 'G2', 'G4')

# 扇区按辐角从 0 到 2π 排列；+1 表示位于所有相邻射线的左侧（+ 侧）
SECTORS = ('O01', 'O12', 'O23', 'O34', 'O45', 'O50')
SECTOR_SIDE = {'O01': 1, 'O12': -1, 'O23': 1, 'O34': -1, 'O45': 1, 'O50': -1}


def ray_angles(alpha: float) -> Dict[str, float]:
    return {
        'G0': 0.0,
        'G1': alpha,
        'G2': math.pi - alpha,
        'G3': math.pi,
        'G4': math.pi + alpha,
        'G5': -alpha,
    }


@dataclass(frozen=True)
class Ray:
    """One ray with its radial panel breaks, increasing from 0 to R."""

    name: str
    origin: complex
    direction: complex
    R: float
    orientation: str
    start: int
    stop: int
    breaks: Tuple[float, ...] = ()

    @property
    def travel(self) -> complex:
        """Unit tangent in the direction of travel."""
        return self.direction if self.orientation == 'outward' else -self.direction

    @property
    def slice(self) -> slice:
        return slice(self.start, self.stop)


@dataclass(frozen=True, eq=False)
class OrientedContour(PanelContourMixin):
    """Union of oriented rays sharing a common origin."""

    rays: Tuple[Ray, ...]
    alpha: float
    n_decay: int
    grading_floor: float
    rule: ReferenceRule
    panels: Tuple[Panel, ...]
    points: np.ndarray
    ds: np.ndarray
    abs_ds: np.ndarray
    is_complete: bool

    kind = 'rays'

    @property
    def origin(self) -> complex:
        return self.rays[0].origin

    @property
    def R(self) -> float:
        return self.rays[0].R

    @property
    def singular_points(self) -> Tuple[complex, ...]:
        return (self.origin,)

    def ray(self, name: str) -> Ray:
        for ray in self.rays:
            if ray.name == name:
                return ray
        raise ContourError(f"围道中没有射线 {name}")

    @property
    def ray_names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.rays)

    def radius(self) -> np.ndarray:
        """|z - origin| per node."""
        return np.abs(self.points - self.origin)

    def subset(self, names: Iterable[str]) -> 'OrientedContour':
        """Restrict to some rays; the result is no longer complete."""
        wanted = [self.ray(n) for n in names]
        return _assemble(wanted, self.alpha, self.n_decay, self.grading_floor, self.rule,
                         complete=False)

    def refined(self) -> 'OrientedContour':
        """Every radial panel bisected."""
        rays = []
        for ray in self.rays:
            b = np.asarray(ray.breaks)
            mids = 0.5 * (b[:-1] + b[1:])
            rays.append(replace(ray, breaks=tuple(np.sort(np.concatenate([b, mids])))))
        return _assemble(rays, self.alpha, self.n_decay, self.grading_floor, self.rule,
                         self.is_complete)

    def embedding(self, other: 'OrientedContour') -> np.ndarray:
        """Indices of this contour's nodes inside a contour containing all its rays."""
        idx = [np.arange(other.ray(r.name).start, other.ray(r.name).stop) for r in self.rays]
        return np.concatenate(idx)


def _ray_segments(ray: Ray):
    breaks = ray.breaks
    outer = [(ray.origin + r0 * ray.direction, ray.origin + r1 * ray.direction)
             for r0, r1 in zip(breaks[:-1], breaks[1:])]
    if ray.orientation == 'outward':
        return outer
    return [(b, a) for a, b in reversed(outer)]


def _assemble(rays, alpha, n_decay, grading_floor, rule, complete) -> OrientedContour:
    n = rule.order
    placed, segments = [], []
    offset = 0
    for ray in rays:
        m = len(ray.breaks) - 1
        segments.extend(_ray_segments(ray))
        placed.append(replace(ray, start=offset, stop=offset + m * n))
        offset += m * n
    panels, nodes, ds, abs_ds = lay_out_panels(segments, rule)
    return OrientedContour(tuple(placed), alpha, n_decay, grading_floor, rule, panels, nodes,
                           ds, abs_ds, complete)


def radial_breaks(R: float, max_width: float, direction: complex = 1.0, origin: complex = 0.0,
                  width: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                  grading_floor: float = GRADING_FLOOR) -> Tuple[float, ...]:
    """Radii 0 < … < R of the panel breaks along one ray, graded toward the origin."""
    origin, direction = complex(origin), complex(direction)
    ray_width = None
    if width is not None:
        def ray_width(z):
            return width(origin + direction * np.real(z))
    segments = split_segment(0.0, R, max_width, ray_width, grade_start=True, floor=grading_floor)
    return tuple([0.0] + [float(np.real(b)) for _, b in segments])


def build_gamma_contour(alpha: float,
                        R: float,
                        nodes_per_ray: int,
                        nodes_per_panel: int = 16,
                        origin: complex = 0.0,
                        n_decay: int = 4,
                        width: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                        grading_floor: float = GRADING_FLOOR) -> OrientedContour:
    """Build Γ₀…Γ₅ truncated at radius R.

    Args:
        alpha: 斜射线与实轴的夹角，0 < alpha < π/4 且 alpha ≤ π/(3·n_decay)
        R: 截断半径
        nodes_per_ray: 未加密部分每条射线的节点数（nodes_per_panel 的整数倍），决定最大面板宽度
        nodes_per_panel: 面板阶数
        origin: 射线公共起点（驻点）
        n_decay: 预模型包络的衰减指数 N
        width: 局部面板宽度上限 z -> 宽度，用于解析 e^{±itθ} 的振荡与衰减
        grading_floor: 原点处几何加密的最内相对长度
    """
    if not 0 < alpha < math.pi / 4:
        raise ContourError(f"alpha 必须在 (0, π/4) 内: {alpha}")
    if alpha > math.pi / (3 * n_decay) * (1 + 1e-12):
        raise ContourError(f"alpha={alpha} 超过 π/(3N)={math.pi / (3 * n_decay)}")
    if not R > 0:
        raise ContourError(f"截断半径必须为正: R={R}")
    if nodes_per_ray <= 0 or nodes_per_ray % nodes_per_panel:
        raise ContourError(f"每条射线节点数 {nodes_per_ray} 不是 {nodes_per_panel} 的正整数倍")
    if not 0 < grading_floor < 1:
        raise ContourError(f"加密下限必须在 (0, 1) 内: {grading_floor}")

    rule = reference_rule(nodes_per_panel, 'legendre')
    origin = complex(origin)
    max_width = R * nodes_per_panel / nodes_per_ray
    rays = []
    for name, angle in ray_angles(alpha).items():
        orientation = 'outward' if name in OUTWARD_RAYS else 'inward'
        direction = complex(np.exp(1j * angle))
        breaks = radial_breaks(R, max_width, direction, origin, width, grading_floor)
        rays.append(Ray(name, origin, direction, float(R), orientation, 0, 0, breaks))
    contour = _assemble(rays, float(alpha), int(n_decay), float(grading_floor), rule,
                        complete=True)
    logger.debug(f"Γ 围道: alpha={alpha:.6f}, R={R}, 节点 {contour.size} 个")
    return contour


def classify_sector(z: complex, contour: OrientedContour) -> Tuple[str, int]:
    """Sector label of z and its side (+1 in O01 ∪ O23 ∪ O45, -1 otherwise)."""
    w = complex(z) - contour.origin
    if abs(w) == 0:
        raise ContourError("原点不属于任何扇区")
    phi = math.atan2(w.imag, w.real) % (2 * math.pi)
    a = contour.alpha
    edges = (0.0, a, math.pi - a, math.pi, math.pi + a, 2 * math.pi - a, 2 * math.pi)
    for label, lo, hi in zip(SECTORS, edges[:-1], edges[1:]):
        if lo < phi < hi:
            return label, SECTOR_SIDE[label]
    raise ContourError(f"点 {z} 位于射线上")
