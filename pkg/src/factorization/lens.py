"""δ-conjugated weights opened onto the lens, with the conjugation undone near each stationary point."""

import math
from dataclasses import replace
from typing import Callable, Tuple

import numpy as np

from ..contour import mat2
from ..contour.lens import LensContour, build_lens_contour
from ..contour.panels import ENVELOPE_FLOOR, WAVELENGTHS_PER_PANEL
from ..phase.phase import PhaseSpec, taylor_model
from ..delta.reflection import ReflectionPair
from ..utils.errors import ContourError, FactorizationError
from ..utils.logger import get_logger
from .jump import WeightPair

logger = get_logger('factorization')

# 权重（相对峰值）低于此值处截断无界透镜分支
LENS_TAIL_TOL = 1e-16
LENS_MAX_RADIUS = 40.0
LENS_SAMPLES = 4000
# 六边形内 t|b|r^{k+1} 的取值，约一个波长
CORE_PHASE = 2.0 * math.pi
CORE_RADIUS_MAX = 0.5
POLE_TOL = 0.05
GROWTH_TOL = 1e-9
DELTA_CHUNK = 512


def lens_angle(phase: PhaseSpec) -> float:
    """min(π/6, π/(2(k_max+1))) so every sector stays inside the decay sectors of θ."""
    if not phase.is_polynomial:
        raise FactorizationError("透镜形变要求多项式相位")
    if not phase.stationary:
        raise FactorizationError("透镜形变要求至少一个驻点")
    k_max = max(s.k for s in phase.stationary)
    return min(math.pi / 6.0, math.pi / (2.0 * (k_max + 1)))


def interval_regions(phase: PhaseSpec) -> Tuple[int, ...]:
    """sign θ' on every gap between consecutive stationary points, left to right."""
    lams = phase.stationary_locations
    samples = [lams[0] - 1.0] + [0.5 * (a + b) for a, b in zip(lams[:-1], lams[1:])] + [lams[-1] + 1.0]
    signs = tuple(int(np.sign(phase.evaluate(x, 1))) for x in samples)
    if 0 in signs:
        raise FactorizationError(f"θ' 在区间内为 0: {signs}")
    return signs


def _envelope(pair: ReflectionPair, z) -> np.ndarray:
    return np.maximum(np.abs(pair.p(z)), np.abs(pair.q(z)))


def _magnitude(pair: ReflectionPair, phase: PhaseSpec, t: float, z) -> np.ndarray:
    """Envelope size times the decaying exponential, valid on a correctly opened lens."""
    z = np.asarray(z, dtype=complex)
    return _envelope(pair, z) * np.exp(-t * np.abs(np.imag(phase.evaluate(z))))


def core_radii(phase: PhaseSpec, t: float) -> Tuple[float, ...]:
    """r_j with t|b_j| r_j^{k_j+1} = CORE_PHASE, capped by CORE_RADIUS_MAX and the gaps."""
    lams = phase.stationary_locations
    radii = []
    for j in range(len(lams)):
        mono = taylor_model(phase, j).monomial
        radii.append(min(CORE_RADIUS_MAX, (CORE_PHASE / (t * abs(mono.b))) ** (1.0 / (mono.k + 1))))
    for j, (a, b) in enumerate(zip(lams[:-1], lams[1:])):
        cap = 0.25 * (b - a)
        radii[j] = min(radii[j], cap)
        radii[j + 1] = min(radii[j + 1], cap)
    return tuple(radii)


def lens_radius(pair: ReflectionPair, phase: PhaseSpec, t: float, origin: float,
                direction: complex, tol: float = LENS_TAIL_TOL,
                r_max: float = LENS_MAX_RADIUS) -> float:
    """Smallest R beyond which the weight on the ray and the envelope below it stay under tol.

    The level is relative to the envelope peak on the real line.
    """
    r = np.linspace(0.0, r_max, LENS_SAMPLES + 1)[1:]
    z = origin + direction * r
    peak = max(float(np.max(_envelope(pair, np.linspace(-r_max, r_max, LENS_SAMPLES)))), 1e-300)
    level = np.maximum(_magnitude(pair, phase, t, z), _envelope(pair, z.real)) / peak
    above = np.nonzero(level >= tol)[0]
    if above.size == 0:
        return float(r[0])
    if above[-1] == r.size - 1:
        logger.warning(f"透镜分支在 r={r_max} 处权重仍为 {level[-1]:.2e}，按 r_max 截断")
        return float(r_max)
    return float(r[above[-1] + 1])


def lens_width(pair: ReflectionPair, phase: PhaseSpec, t: float,
               wavelengths: float = WAVELENGTHS_PER_PANEL,
               floor: float = ENVELOPE_FLOOR) -> Callable[[np.ndarray], np.ndarray]:
    """2π·wavelengths/(t|θ'(z)|) where the weight is above floor relative to its peak."""
    peak = max(float(np.max(_envelope(pair, np.linspace(-LENS_MAX_RADIUS, LENS_MAX_RADIUS,
                                                         LENS_SAMPLES)))), 1e-300)

    def width(z):
        z = np.asarray(z, dtype=complex)
        rate = t * np.abs(phase.evaluate(z, 1))
        out = np.where(rate > 0, 2.0 * math.pi * wavelengths / np.maximum(rate, 1e-300), np.inf)
        return np.where(_magnitude(pair, phase, t, z) / peak > floor, out, np.inf)

    return width


def build_lens_for(pair: ReflectionPair, phase: PhaseSpec, t: float, nodes_per_panel: int = 16,
                   max_width: float = 0.5, max_nodes=None) -> LensContour:
    """Lens contour sized for (pair, θ, t): core radii, tail radii and oscillation widths."""
    alpha = lens_angle(phase)
    lams = phase.stationary_locations
    radii = core_radii(phase, t)
    left = lens_radius(pair, phase, t, lams[0], np.exp(1j * (math.pi - alpha)))
    left = max(left, lens_radius(pair, phase, t, lams[0], np.exp(1j * (math.pi + alpha))))
    right = lens_radius(pair, phase, t, lams[-1], np.exp(1j * alpha))
    right = max(right, lens_radius(pair, phase, t, lams[-1], np.exp(-1j * alpha)))
    outer = (max(left, 2.0 * radii[0]), max(right, 2.0 * radii[-1]))
    return build_lens_contour(lams, alpha, radii, outer, nodes_per_panel, max_width,
                              lens_width(pair, phase, t), max_nodes)


def _delta_at(delta, z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape, dtype=complex)
    for start in range(0, z.size, DELTA_CHUNK):
        chunk = z[start:start + DELTA_CHUNK]
        out[start:start + DELTA_CHUNK] = delta.evaluate(chunk, near_ok=True)
    return out


def lens_weights(delta, t: float, contour: LensContour, pole_tol: float = POLE_TOL) -> WeightPair:
    """Weights of the lens-deformed problem.

    Upper lens pieces carry w⁺ = -(plus weight), lower pieces w⁻ = -(minus weight)
    of the δ-conjugated factorization continued off ℝ. Each hexagon edge carries
    w⁺ = L⁻¹δ^{σ3} - I with L the lens factor of the zone it crosses, and the
    core segment the canonical weights.
    """
    if not t > 0:
        raise FactorizationError(f"t 必须为正: {t}")
    if not isinstance(contour, LensContour):
        raise ContourError(f"透镜权重需要透镜围道: {type(contour).__name__}")
    pair, phase = delta.pair, delta.phase
    regions = interval_regions(phase)
    if len(regions) != len(contour.stationary_points) + 1:
        raise FactorizationError("透镜围道与相位的驻点数不一致")

    z = contour.points
    n = contour.size
    p, q = pair.p(z), pair.q(z)
    one_plus = 1.0 + p * q
    theta = phase.evaluate(z)
    # 只有衰减的那个指数会被用到；另一个可以溢出
    with np.errstate(over='ignore'):
        e = np.exp(-1j * t * theta)
        e_inv = np.exp(1j * t * theta)
    off_core = np.ones(n, dtype=bool)
    for piece in contour.pieces:
        if piece.kind == 'core':
            off_core[piece.slice] = False
    d = np.ones(n, dtype=complex)
    d[off_core] = _delta_at(delta, z[off_core])

    def upper_entry(sl, region):
        scale = 1.0 if region > 0 else 1.0 / one_plus[sl]
        return d[sl] ** 2 * p[sl] * e[sl] * scale

    def lower_entry(sl, region):
        scale = 1.0 if region > 0 else 1.0 / one_plus[sl]
        return q[sl] * e_inv[sl] / d[sl] ** 2 * scale

    def plus_weight(sl, region):
        if region > 0:
            return mat2.lower(lower_entry(sl, region))
        return mat2.upper(upper_entry(sl, region))

    def minus_weight(sl, region):
        if region > 0:
            return mat2.upper(upper_entry(sl, region))
        return mat2.lower(lower_entry(sl, region))

    w_minus = mat2.zeros(n)
    w_plus = mat2.zeros(n)
    lens_nodes = np.zeros(n, dtype=bool)
    for piece in contour.pieces:
        sl = piece.slice
        if piece.kind == 'lens':
            lens_nodes[sl] = True
            region = regions[piece.interval]
            factor = e[sl] if (region > 0) == (piece.side < 0) else e_inv[sl]
            if np.max(np.abs(factor)) > 1.0 + GROWTH_TOL:
                logger.error(f"透镜分支 {piece.name} 上 e^{{±itθ}} 增长到 {np.max(np.abs(factor)):.3e}")
                raise FactorizationError(f"透镜分支 {piece.name} 不在 θ 的衰减扇区内")
            if piece.side > 0:
                w_plus[sl] = -plus_weight(sl, region)
            else:
                w_minus[sl] = -minus_weight(sl, region)
        elif piece.kind == 'edge':
            count = sl.stop - sl.start
            lens_inverse = mat2.identity(count)
            if piece.interval is not None:
                region = regions[piece.interval]
                if piece.side > 0:
                    lens_inverse = lens_inverse + plus_weight(sl, region)
                else:
                    lens_inverse = lens_inverse - minus_weight(sl, region)
            w_plus[sl] = mat2.multiply(lens_inverse, mat2.diag_power(d[sl], 1)) - mat2.identity(count)
        else:
            w_minus[sl] = mat2.upper(p[sl] * e[sl])
            w_plus[sl] = mat2.lower(q[sl] * e_inv[sl])

    check_lens_poles(pair, z[lens_nodes], pole_tol)
    w = WeightPair(contour, w_minus, w_plus, 'lens-deformed', t=float(t), phase=phase, pair=pair,
                   delta=delta)
    logger.debug(f"透镜权重: t={t:g}, 节点 {n} 个, sup|w| = {w.sup_norm():.3e}")
    return replace(w, source=w.jump())


def check_lens_poles(pair: ReflectionPair, lens_points: np.ndarray, pole_tol: float = POLE_TOL) -> float:
    """min |1 + p q| over the lens pieces and the region between them and ℝ."""
    if lens_points.size == 0:
        return float('inf')
    s = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    zs = (lens_points.real[:, None] + 1j * lens_points.imag[:, None] * s[None, :]).ravel()
    smallest = float(np.min(np.abs(1.0 + pair.p(zs) * pair.q(zs))))
    if smallest < pole_tol:
        logger.error(f"透镜区域内 |1+pq| 最小为 {smallest:.3e}")
        raise FactorizationError(f"透镜区域内 1+pq 接近零点 (min |1+pq| = {smallest:.3e})")
    return smallest
