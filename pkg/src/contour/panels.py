"""Reference panel rules and the shared panel-contour machinery."""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import ContourError

NODE_FAMILIES = ('chebyshev', 'legendre')

# 奇点处几何加密：相邻面板长度比与最内面板的相对长度
GRADING_RATIO = 3.0
GRADING_FLOOR = 1e-10
# 一个面板内最多容纳的振荡波长数；包络低于 ENVELOPE_FLOOR 处不做振荡加密
WAVELENGTHS_PER_PANEL = 1.0
ENVELOPE_FLOOR = 1e-12
MAX_PANELS_PER_SEGMENT = 20000
# 节点之外的跳跃检验点（参考坐标），避开所有节点族的节点
CHECK_TAUS = (-0.5, 0.0, 0.5)


@dataclass(frozen=True, eq=False)
class ReferenceRule:
    """Interpolatory rule on [-1, 1] with barycentric and differentiation data."""

    family: str
    nodes: np.ndarray
    weights: np.ndarray
    bary: np.ndarray
    diff: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.shape[0]

    def interpolation_matrix(self, targets: np.ndarray) -> np.ndarray:
        """Rows ℓ_k(τ) of the Lagrange basis at (complex) targets off the nodes."""
        targets = np.asarray(targets, dtype=complex)
        diff = targets[:, None] - self.nodes[None, :]
        hit = np.abs(diff) < 1e-15
        diff[hit] = 1.0
        terms = self.bary[None, :] / diff
        rows = terms / terms.sum(axis=1, keepdims=True)
        exact = np.nonzero(hit.any(axis=1))[0]
        for i in exact:
            rows[i] = hit[i].astype(float)
        return rows


def _fejer_first(n: int) -> Tuple[np.ndarray, np.ndarray]:
    angles = (2 * np.arange(n) + 1) * np.pi / (2 * n)
    k = np.arange(1, n // 2 + 1)
    sums = np.cos(2 * np.outer(angles, k)) / (4 * k ** 2 - 1)
    weights = 2.0 / n * (1.0 - 2.0 * sums.sum(axis=1))
    nodes = np.cos(angles)
    order = np.argsort(nodes)
    return nodes[order], weights[order]


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    # log-sum keeps the products in range for large n
    logs = np.sum(np.log(np.abs(diff)), axis=1)
    signs = np.prod(np.sign(diff), axis=1)
    bary = signs * np.exp(-(logs - logs.max()))
    return bary / np.max(np.abs(bary))


@lru_cache(maxsize=None)
def reference_rule(n: int, family: str = 'chebyshev') -> ReferenceRule:
    if family not in NODE_FAMILIES:
        raise ContourError(f"未知节点族: {family}")
    if family == 'chebyshev':
        nodes, weights = _fejer_first(n)
    else:
        nodes, weights = np.polynomial.legendre.leggauss(n)
    bary = _barycentric_weights(nodes)
    diff = (bary[None, :] / bary[:, None]) / (nodes[:, None] - nodes[None, :] + np.eye(n))
    np.fill_diagonal(diff, 0.0)
    np.fill_diagonal(diff, -diff.sum(axis=1))
    for arr in (nodes, weights, bary, diff):
        arr.setflags(write=False)
    return ReferenceRule(family, nodes, weights, bary, diff)


@dataclass(frozen=True)
class Panel:
    """Straight oriented segment a → b carrying nodes start:stop."""

    a: complex
    b: complex
    start: int
    stop: int

    @property
    def center(self) -> complex:
        return 0.5 * (self.a + self.b)

    @property
    def half(self) -> complex:
        return 0.5 * (self.b - self.a)

    @property
    def length(self) -> float:
        return abs(self.b - self.a)


def lay_out_panels(segments, rule: ReferenceRule):
    """Place the reference rule on consecutive segments [(a, b), ...].

    Returns panels, nodes, complex ds weights and |ds|.
    """
    n = rule.order
    panels = []
    nodes = np.empty(len(segments) * n, dtype=complex)
    ds = np.empty_like(nodes)
    for i, (a, b) in enumerate(segments):
        panel = Panel(complex(a), complex(b), i * n, (i + 1) * n)
        nodes[panel.start:panel.stop] = panel.center + panel.half * rule.nodes
        ds[panel.start:panel.stop] = panel.half * rule.weights
        panels.append(panel)
    for arr in (nodes, ds):
        arr.setflags(write=False)
    abs_ds = np.abs(ds)
    abs_ds.setflags(write=False)
    return tuple(panels), nodes, ds, abs_ds


class PanelContourMixin:
    """Shared accessors for contours built from straight panels.

    Subclasses provide ``panels``, ``rule``, ``points`` (complex nodes),
    ``ds`` (complex weights) and ``abs_ds``.
    """

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def nodes_per_panel(self) -> int:
        return self.rule.order

    @property
    def panel_of_node(self) -> np.ndarray:
        return np.arange(self.size) // self.rule.order

    def local_spacing(self) -> np.ndarray:
        """Panel length divided by the panel order, per node."""
        lengths = np.array([p.length for p in self.panels])
        return lengths[self.panel_of_node] / self.rule.order

    def distance_to(self, z: complex) -> Tuple[float, int]:
        """Distance from z to the contour and the index of the nearest node."""
        z = complex(z)
        best = np.inf
        for p in self.panels:
            h = p.b - p.a
            s = np.clip(((z - p.a) * np.conj(h)).real / abs(h) ** 2, 0.0, 1.0)
            best = min(best, abs(z - (p.a + s * h)))
        nearest = int(np.argmin(np.abs(self.points - z)))
        return float(best), nearest

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Contour quadrature Σ ds_i f_i over the leading axis."""
        return np.tensordot(self.ds, np.asarray(values), axes=(0, 0))

    @property
    def singular_points(self) -> Tuple[complex, ...]:
        """Vertices where weights may carry |z - λ|^{iκ} factors; none by default."""
        return ()

    def distances(self, z: np.ndarray) -> np.ndarray:
        """Distance from every z to the contour, vectorised over z."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        best = np.full(z.shape, np.inf)
        for p in self.panels:
            h = p.b - p.a
            s = np.clip(((z - p.a) * np.conj(h)).real / abs(h) ** 2, 0.0, 1.0)
            best = np.minimum(best, np.abs(z - (p.a + s * h)))
        return best

    def check_points(self, taus: Sequence[float] = CHECK_TAUS):
        """Off-node points (panel index, τ, z) in panels away from the singular vertices.

        Panels closer to a singular vertex than their own length are skipped.
        """
        singular = np.asarray(self.singular_points, dtype=complex)
        rows = []
        for i, p in enumerate(self.panels):
            if singular.size:
                ends = np.array([p.a, p.b])
                gap = np.min(np.abs(ends[:, None] - singular[None, :]))
                if gap < p.length * (1 - 1e-12):
                    continue
            for tau in taus:
                rows.append((i, float(tau), p.center + p.half * tau))
        if not rows:
            return np.zeros(0, dtype=int), np.zeros(0), np.zeros(0, dtype=complex)
        idx, tau, z = zip(*rows)
        return np.array(idx, dtype=int), np.array(tau), np.array(z, dtype=complex)

    def bisected_segments(self) -> List[Tuple[complex, complex]]:
        """Every panel split at its midpoint, in contour order."""
        out = []
        for p in self.panels:
            out.extend([(p.a, p.center), (p.center, p.b)])
        return out


def grading_cuts(h: float, floor: float = GRADING_FLOOR, ratio: float = GRADING_RATIO) -> np.ndarray:
    """Distances h, h/ratio, h/ratio², … down to floor·h, increasing order."""
    levels = max(1, math.ceil(math.log(1.0 / floor) / math.log(ratio)))
    return h * ratio ** -np.arange(levels, -1, -1, dtype=float)


def split_segment(a: complex, b: complex, max_width: float,
                  width: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                  grade_start: bool = False, grade_end: bool = False,
                  floor: float = GRADING_FLOOR, ratio: float = GRADING_RATIO
                  ) -> List[Tuple[complex, complex]]:
    """Cut a → b into panels no longer than max_width or the local width(z).

    Without ``width`` the panels are equal. Ends marked for grading get
    geometric panels toward the endpoint down to floor times the first panel.
    """
    a, b = complex(a), complex(b)
    length = abs(b - a)
    if not length > 0:
        raise ContourError(f"退化线段: {a} → {b}")
    if not max_width > 0:
        raise ContourError(f"面板宽度必须为正: {max_width}")
    unit = (b - a) / length

    if width is None:
        count = max(1, math.ceil(length / max_width - 1e-12))
        cuts = list(np.linspace(0.0, length, count + 1))
    else:
        cuts = [0.0]
        s = 0.0
        while length - s > 1e-14 * length:
            samples = s + max_width * np.linspace(0.0, 1.0, 9)
            samples = samples[samples <= length] if np.any(samples <= length) else np.array([s])
            step = min(max_width, float(np.min(width(a + unit * samples))))
            if not step > 0:
                raise ContourError(f"局部面板宽度非正: {step}")
            s = s + step
            if length - s < 0.25 * step:
                s = length
            cuts.append(min(s, length))
            if len(cuts) > MAX_PANELS_PER_SEGMENT:
                raise ContourError(f"线段 {a} → {b} 需要超过 {MAX_PANELS_PER_SEGMENT} 个面板")
        cuts[-1] = length

    if (grade_start or grade_end) and len(cuts) == 2:
        cuts = [0.0, 0.5 * length, length]
    if grade_start:
        inner = grading_cuts(cuts[1], floor, ratio)
        cuts = [0.0] + list(inner[:-1]) + cuts[1:]
    if grade_end:
        h = cuts[-1] - cuts[-2]
        inner = length - grading_cuts(h, floor, ratio)[::-1]
        cuts = cuts[:-1] + list(inner[1:]) + [length]
    return [(a + unit * s0, a + unit * s1) for s0, s1 in zip(cuts[:-1], cuts[1:])]


def oscillation_width(slope: Callable[[np.ndarray], np.ndarray], t: float,
                      magnitude: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                      wavelengths: float = WAVELENGTHS_PER_PANEL,
                      floor: float = ENVELOPE_FLOOR) -> Callable[[np.ndarray], np.ndarray]:
    """Local panel width 2π·wavelengths/(t|θ'(z)|) where magnitude(z) > floor.

    ``magnitude`` is the weight size relative to its peak; below the floor the
    width is unbounded and the caller's max_width applies.
    """
    if not t > 0:
        raise ContourError(f"t 必须为正: {t}")

    def width(z):
        z = np.asarray(z)
        rate = t * np.abs(slope(z))
        out = np.where(rate > 0, 2.0 * math.pi * wavelengths / np.maximum(rate, 1e-300), np.inf)
        if magnitude is not None:
            out = np.where(np.abs(magnitude(z)) > floor, out, np.inf)
        return out

    return width
