"""Jump matrices and their triangular factorizations on the real line."""

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ..contour import mat2
from ..phase.phase import PhaseSpec, taylor_model
from ..delta.reflection import ReflectionPair
from ..utils.errors import FactorizationError
from ..utils.logger import get_logger

logger = get_logger('factorization')

TAGS = ('canonical', 'conjugated', 'localized', 'phase-reduced', 'model', 'pre-model',
        'gamma-deformed', 'lens-deformed', 'custom')


@dataclass(frozen=True, eq=False)
class JumpMatrix:
    """J = [[1 + pq, p e^{-itθ}], [q e^{itθ}, 1]] at the grid nodes."""

    contour: object
    values: np.ndarray
    t: float
    phase: PhaseSpec
    pair: ReflectionPair

    def det_deviation(self) -> float:
        return float(np.max(np.abs(mat2.det(self.values) - 1.0)))


@dataclass(frozen=True, eq=False)
class WeightPair:
    """w⁻, w⁺ with J = (I - w⁻)⁻¹(I + w⁺).

    ``source`` is the jump the pair should reproduce; ``model`` holds the
    analytic data of model and pre-model weights for continuation off ℝ.
    """

    contour: object
    w_minus: np.ndarray
    w_plus: np.ndarray
    tag: str
    phase_weight: bool = False
    source: Optional[np.ndarray] = None
    t: Optional[float] = None
    phase: Optional[PhaseSpec] = None
    pair: Optional[ReflectionPair] = None
    delta: Optional[object] = None
    j: Optional[int] = None
    model: Optional[object] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise FactorizationError(f"未知分解标签: {self.tag}")
        for name in ('w_minus', 'w_plus'):
            values = np.array(getattr(self, name), dtype=complex, copy=True)
            if values.shape != (self.contour.size, 2, 2):
                raise FactorizationError(f"{name} 形状 {values.shape} 与围道不符")
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def total(self) -> np.ndarray:
        return self.w_plus + self.w_minus

    @property
    def size(self) -> int:
        return self.contour.size

    def jump(self) -> np.ndarray:
        """(I - w⁻)⁻¹(I + w⁺) at every node."""
        eye = mat2.identity(self.size)
        return mat2.multiply(mat2.inverse(eye - self.w_minus), eye + self.w_plus)

    def sup_norm(self) -> float:
        return float(max(mat2.frobenius_abs(self.w_minus).max(initial=0.0),
                         mat2.frobenius_abs(self.w_plus).max(initial=0.0)))

    def scaled(self, factor: float) -> 'WeightPair':
        return replace(self, w_minus=factor * self.w_minus, w_plus=factor * self.w_plus,
                       source=None, tag='custom')


def zero_weights(contour) -> WeightPair:
    return WeightPair(contour, mat2.zeros(contour.size), mat2.zeros(contour.size), 'custom',
                      source=mat2.identity(contour.size))


def factorization_residual(w: WeightPair) -> float:
    """max_x |(I - w⁻)⁻¹(I + w⁺) - J_source|; 0 when no source is attached."""
    if w.source is None:
        return 0.0
    return float(np.max(mat2.frobenius_abs(w.jump() - w.source), initial=0.0))


def is_strictly_triangular(w: WeightPair) -> bool:
    """w⁻w⁻ = w⁺w⁺ = 0 and both vanish on the diagonal."""
    for field in (w.w_minus, w.w_plus):
        if np.any(field[:, 0, 0]) or np.any(field[:, 1, 1]):
            return False
        if np.any(mat2.multiply(field, field)):
            return False
    return True


def build_jump(pair: ReflectionPair, theta: PhaseSpec, t: float, grid) -> JumpMatrix:
    """Oscillatory jump matrix on the real grid; det J = 1."""
    if not t > 0:
        raise FactorizationError(f"t 必须为正: {t}")
    x = grid.nodes
    one_plus = pair.one_plus_pq(x)
    phase = np.exp(-1j * t * theta.evaluate(x))
    values = np.empty((grid.size, 2, 2), dtype=complex)
    values[:, 0, 0] = one_plus
    values[:, 0, 1] = pair.p(x) * phase
    values[:, 1, 0] = pair.q(x) / phase
    values[:, 1, 1] = 1.0
    return JumpMatrix(grid, values, float(t), theta, pair)


def canonical_factorization(J: JumpMatrix) -> WeightPair:
    """w⁻ = upper(p e^{-itθ}), w⁺ = lower(q e^{itθ})."""
    x = J.contour.nodes
    phase = np.exp(-1j * J.t * J.phase.evaluate(x))
    w_minus = mat2.upper(J.pair.p(x) * phase)
    w_plus = mat2.lower(J.pair.q(x) / phase)
    return WeightPair(J.contour, w_minus, w_plus, 'canonical', source=J.values, t=J.t,
                      phase=J.phase, pair=J.pair)


def conjugated_factorization(J: JumpMatrix, delta) -> WeightPair:
    """Weights of δ₋^{σ3} J δ₊^{-σ3} with the phase-weight relation.

    D₊: w⁻ = upper(δ₋δ₊ p e^{-itθ}), w⁺ = lower(q e^{itθ}/(δ₋δ₊)).
    D₋: w⁻ = lower(q e^{itθ}/(δ₋δ₊)), w⁺ = upper(δ₋δ₊ p e^{-itθ}).
    """
    if delta.grid is not J.contour:
        raise FactorizationError("δ 与跳跃矩阵不在同一网格上")
    x = J.contour.nodes
    phase = np.exp(-1j * J.t * J.phase.evaluate(x))
    prod = delta.delta_minus * delta.delta_plus
    upper_entry = prod * J.pair.p(x) * phase
    lower_entry = J.pair.q(x) / (phase * prod)
    minus = delta.partition.minus[:, None, None]
    w_minus = np.where(minus, mat2.lower(lower_entry), mat2.upper(upper_entry))
    w_plus = np.where(minus, mat2.upper(upper_entry), mat2.lower(lower_entry))
    source = mat2.multiply(mat2.multiply(mat2.diag_power(delta.delta_minus, 1), J.values),
                           mat2.diag_power(delta.delta_plus, -1))
    return WeightPair(J.contour, w_minus, w_plus, 'conjugated', phase_weight=True, source=source,
                      t=J.t, phase=J.phase, pair=J.pair, delta=delta)


def smoothstep(u: np.ndarray) -> np.ndarray:
    """Degree-7 step from 0 to 1 with three vanishing derivatives at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return u ** 4 * (35.0 - 84.0 * u + 70.0 * u ** 2 - 20.0 * u ** 3)


def cutoff(x: np.ndarray, centers: Sequence[float], radius: float) -> np.ndarray:
    """1 within radius/2 of a center, 0 beyond radius, smoothstep in between."""
    x = np.asarray(x, dtype=float)
    if not centers:
        return np.zeros_like(x)
    dist = np.min(np.abs(x[:, None] - np.asarray(centers)[None, :]), axis=1)
    half = 0.5 * radius
    return 1.0 - smoothstep((dist - half) / half)


def localize(w: WeightPair, radius: float, points: Optional[Sequence[int]] = None) -> WeightPair:
    """Multiply the weights by the cutoff around the chosen stationary points."""
    if not w.phase_weight:
        raise FactorizationError("局部化要求权重满足相位-权重关系")
    if not radius > 0:
        raise FactorizationError(f"截断半径必须为正: {radius}")
    locations = w.phase.stationary_locations
    for i, a in enumerate(locations):
        for b in locations[i + 1:]:
            if abs(a - b) < 2 * radius:
                logger.error(f"截断半径 {radius} 使驻点 {a} 与 {b} 的支撑重叠")
                raise FactorizationError(f"截断半径 {radius} 覆盖了两个驻点 {a}, {b}")
    chosen = list(range(len(locations)) if points is None else points)
    phi = cutoff(w.contour.nodes, [locations[i] for i in chosen], radius)[:, None, None]
    w_minus = phi * w.w_minus
    w_plus = phi * w.w_plus
    local = replace(w, w_minus=w_minus, w_plus=w_plus, tag='localized',
                    j=chosen[0] if len(chosen) == 1 else None)
    eye = mat2.identity(w.size)
    return replace(local, source=mat2.multiply(eye + w_minus, eye + w_plus))


def phase_reduce(w: WeightPair, j: int) -> WeightPair:
    """Replace θ by its Taylor model Θ_j in the oscillatory factors."""
    if w.t is None or w.phase is None:
        raise FactorizationError("相位约化需要 t 与相位")
    model = taylor_model(w.phase, j)
    x = w.contour.nodes
    support = (mat2.frobenius_abs(w.w_minus) + mat2.frobenius_abs(w.w_plus)) > 0
    slope = np.sign(w.phase.evaluate(x[support], 1))
    model_slope = np.sign(model.evaluate(x[support], 1))
    if np.any(slope * model_slope < 0):
        bad = x[support][slope * model_slope < 0]
        logger.error(f"θ' 与 Θ' 在 {bad[:3]} 处符号不同")
        raise FactorizationError("截断半径过大: θ' 与 Θ' 在支撑上符号不一致")
    gap = np.asarray(model.evaluate(x), dtype=float) - np.asarray(w.phase.evaluate(x), dtype=float)
    e = np.exp(-0.5j * w.t * gap)
    conj = mat2.diag_power(e, 1)
    conj_inv = mat2.diag_power(e, -1)

    def apply(field):
        return mat2.multiply(mat2.multiply(conj, field), conj_inv)

    source = apply(w.source) if w.source is not None else None
    return replace(w, w_minus=apply(w.w_minus), w_plus=apply(w.w_plus), source=source,
                   tag='phase-reduced', phase=model, j=j)
