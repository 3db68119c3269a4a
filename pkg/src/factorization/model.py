"""Model and pre-model weights near one stationary point and their Γ continuation."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..contour import mat2
from ..delta.scalar_rhp import PointRecord, delta_model, delta_model_boundary
from ..phase.phase import PhaseSpec, taylor_model
from ..delta.reflection import ReflectionPair
from ..utils.errors import FactorizationError
from ..utils.logger import get_logger
from .jump import WeightPair

logger = get_logger('factorization')


@dataclass(frozen=True)
class LocalModel:
    """Constant envelopes p0, q0 with the monomial phase Θ = a + b(z - λ)^(k+1).

    ``n_decay`` switches on the pre-model factor h(z) = 1/(1 + i(z - λ)^N).
    """

    lam: float
    k: int
    a: float
    b: float
    p0: complex
    q0: complex
    omega: float
    t: float
    n_decay: Optional[int] = None

    def __post_init__(self):
        if abs(np.imag(self.pq)) > 1e-12 or 1.0 + np.real(self.pq) <= 0:
            raise FactorizationError(f"模型要求 1 + p0 q0 > 0: {self.pq}")
        if self.b == 0:
            raise FactorizationError("模型相位系数 b 不能为 0")

    @property
    def pq(self) -> complex:
        return complex(self.p0) * complex(self.q0)

    @property
    def nu(self) -> float:
        return float(-math.log(1.0 + self.pq.real) / (2.0 * math.pi))

    def region(self, half: int) -> int:
        """+1 if the half line λ + half·ℝ₊ lies in D₊, -1 if in D₋."""
        return int(np.sign(self.b)) if half > 0 else int(np.sign(self.b * (-1) ** self.k))

    @property
    def case(self) -> str:
        right, left = self.region(+1), self.region(-1)
        if right > 0 and left > 0:
            return 'exterior'
        if right < 0 and left < 0:
            return 'interior'
        return 'right-endpoint' if left < 0 else 'left-endpoint'

    @property
    def eps(self) -> int:
        return {'right-endpoint': 1, 'left-endpoint': -1}.get(self.case, 0)

    @property
    def record(self) -> PointRecord:
        return PointRecord(self.lam, self.case, self.eps, self.nu, self.omega)

    def theta(self, z):
        return self.a + self.b * (np.asarray(z) - self.lam) ** (self.k + 1)

    def h(self, z):
        z = np.asarray(z, dtype=complex)
        if self.n_decay is None:
            return np.ones_like(z)
        return 1.0 / (1.0 + 1j * (z - self.lam) ** self.n_decay)

    def delta(self, z):
        return delta_model(z, self.record, self.omega)

    def _upper_entry(self, z, region, d):
        """12 entry: δ² p0 h e^{-itΘ}, divided by 1 + pq on D₋."""
        scale = 1.0 if region > 0 else 1.0 / (1.0 + self.pq.real)
        return d ** 2 * self.p0 * scale * self.h(z) * np.exp(-1j * self.t * self.theta(z))

    def _lower_entry(self, z, region, d):
        """21 entry: δ⁻² q0 h e^{itΘ}, divided by 1 + pq on D₋."""
        scale = 1.0 if region > 0 else 1.0 / (1.0 + self.pq.real)
        return self.q0 * scale * self.h(z) * np.exp(1j * self.t * self.theta(z)) / d ** 2

    def minus_weight(self, z, region, d) -> np.ndarray:
        """w⁻: upper on D₊, lower on D₋; d is δ₋ or its continuation below ℝ."""
        if region > 0:
            return mat2.upper(self._upper_entry(z, region, d))
        return mat2.lower(self._lower_entry(z, region, d))

    def plus_weight(self, z, region, d) -> np.ndarray:
        """w⁺: lower on D₊, upper on D₋; d is δ₊ or its continuation above ℝ."""
        if region > 0:
            return mat2.lower(self._lower_entry(z, region, d))
        return mat2.upper(self._upper_entry(z, region, d))

    def real_weights(self, x):
        """(w⁻, w⁺) at real nodes using the boundary values δ_j±."""
        x = np.asarray(x, dtype=float)
        right = x > self.lam
        d_minus = delta_model_boundary(x, self.record, self.omega, -1)
        d_plus = delta_model_boundary(x, self.record, self.omega, +1)
        w_minus = mat2.zeros(x.size)
        w_plus = mat2.zeros(x.size)
        for half, mask in ((+1, right), (-1, ~right)):
            if np.any(mask):
                region = self.region(half)
                w_minus[mask] = self.minus_weight(x[mask], region, d_minus[mask])
                w_plus[mask] = self.plus_weight(x[mask], region, d_plus[mask])
        return w_minus, w_plus

    def real_source(self, x):
        """δ_j₋^{σ3} J_M δ_j₊^{-σ3} for the model jump J_M (h ≡ 1 only)."""
        x = np.asarray(x, dtype=float)
        e = np.exp(-1j * self.t * self.theta(x))
        jump = np.empty((x.size, 2, 2), dtype=complex)
        jump[:, 0, 0] = 1.0 + self.pq
        jump[:, 0, 1] = self.p0 * e
        jump[:, 1, 0] = self.q0 / e
        jump[:, 1, 1] = 1.0
        d_minus = delta_model_boundary(x, self.record, self.omega, -1)
        d_plus = delta_model_boundary(x, self.record, self.omega, +1)
        return mat2.multiply(mat2.multiply(mat2.diag_power(d_minus, 1), jump),
                             mat2.diag_power(d_plus, -1))


def local_model(phase: PhaseSpec, j: int, pair: ReflectionPair, omega: float, t: float,
                n_decay: Optional[int] = None) -> LocalModel:
    reduced = phase if phase.monomial is not None else taylor_model(phase, j)
    mono = reduced.monomial
    return LocalModel(mono.lam, mono.k, mono.a, mono.b, complex(pair.p(mono.lam)),
                      complex(pair.q(mono.lam)), float(omega), float(t), n_decay)


def _weights_on_real(model: LocalModel, grid, tag: str, **extra) -> WeightPair:
    w_minus, w_plus = model.real_weights(grid.nodes)
    if model.n_decay is None:
        source = model.real_source(grid.nodes)
    else:
        eye = mat2.identity(grid.size)
        source = mat2.multiply(eye + w_minus, eye + w_plus)
    return WeightPair(grid, w_minus, w_plus, tag, phase_weight=True, source=source,
                      t=model.t, model=model, **extra)


def gamma_weights(model: LocalModel, gamma, **extra) -> WeightPair:
    """Model weights continued onto the rays of Γ (or a subset of them)."""
    k, alpha = model.k, gamma.alpha
    if (k + 1) * alpha >= math.pi:
        raise FactorizationError(f"(k+1)·alpha = {(k + 1) * alpha:.4f} ≥ π，无法解析延拓")
    if model.n_decay is not None and alpha > math.pi / (3 * model.n_decay) * (1 + 1e-12):
        raise FactorizationError(f"预模型要求 alpha ≤ π/(3N): alpha={alpha}, N={model.n_decay}")
    if abs(gamma.origin - model.lam) > 1e-12 * max(1.0, abs(model.lam)):
        raise FactorizationError(f"Γ 的原点 {gamma.origin} 不是驻点 {model.lam}")

    w_minus = mat2.zeros(gamma.size)
    w_plus = mat2.zeros(gamma.size)
    for ray in gamma.rays:
        sl = ray.slice
        z = gamma.points[sl]
        if ray.name in ('G1', 'G2'):
            half = +1 if ray.name == 'G1' else -1
            w_plus[sl] = -model.plus_weight(z, model.region(half), model.delta(z))
        elif ray.name in ('G4', 'G5'):
            half = +1 if ray.name == 'G5' else -1
            w_minus[sl] = -model.minus_weight(z, model.region(half), model.delta(z))
    eye = mat2.identity(gamma.size)
    source = mat2.multiply(eye + w_minus, eye + w_plus)
    return WeightPair(gamma, w_minus, w_plus, 'gamma-deformed', phase_weight=False,
                      source=source, t=model.t, model=model, **extra)


def model_weights(j: int, t: float, contour, omega: float, phase: PhaseSpec,
                  pair: ReflectionPair) -> WeightPair:
    """Model weights at stationary point j on a real grid or on Γ centred at λ_j."""
    model = local_model(phase, j, pair, omega, t)
    if getattr(contour, 'kind', None) == 'rays':
        return gamma_weights(model, contour, j=j, pair=pair)
    return _weights_on_real(model, contour, 'model', j=j, pair=pair, phase=taylor_model(phase, j))


def premodel_weights(w: WeightPair, n_decay: int) -> WeightPair:
    """Replace every envelope f by f(λ_j)/(1 + i(x - λ_j)^N) keeping δ_j."""
    if w.j is None or w.delta is None or w.pair is None:
        raise FactorizationError("预模型需要在单个驻点处局部化、带 δ 的权重")
    if n_decay < 1:
        raise FactorizationError(f"衰减指数必须为正: {n_decay}")
    omega = w.delta.record(w.j).omega
    model = local_model(w.phase, w.j, w.pair, omega, w.t, n_decay=int(n_decay))
    return _weights_on_real(model, w.contour, 'pre-model', j=w.j, pair=w.pair, phase=w.phase,
                            delta=w.delta)


def deform_to_gamma(w: WeightPair, gamma) -> WeightPair:
    """Continue model or pre-model weights onto Γ₀…Γ₅.

    Γ₀, Γ₃ carry nothing; Γ₁, Γ₂ carry -w⁺ continued from ℝ₊, ℝ₋;
    Γ₄, Γ₅ carry -w⁻ continued from ℝ₋, ℝ₊.
    """
    if w.tag not in ('model', 'pre-model') or w.model is None:
        raise FactorizationError(f"只有模型或预模型权重可以形变到 Γ: {w.tag}")
    return gamma_weights(w.model, gamma, j=w.j, pair=w.pair)
