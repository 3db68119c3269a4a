"""Model constants U, V: closed first-order formula and timeless Γ solves."""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import loggamma

from ..contour.gamma import build_gamma_contour
from ..factorization.model import LocalModel, gamma_weights
from ..solver.beals_coifman import solve_mu
from ..utils.errors import FactorizationError, SolveError
from ..utils.logger import get_logger

logger = get_logger('asymptotics')

EULER_GAMMA = 0.57721566490153286061
# e^{-32.2} ~ 1e-14 at the truncation radius
TAIL_EXPONENT = 32.2
SYMMETRY_TOL = 1e-8


def alpha(eps: int, nu: float, k: int) -> float:
    """α = 2εν/(k+1)."""
    if eps not in (-1, 0, 1):
        raise FactorizationError(f"ε 必须属于 {{-1, 0, 1}}: {eps}")
    if k < 1:
        raise FactorizationError(f"驻点阶数必须 ≥ 1: {k}")
    return 2.0 * eps * nu / (k + 1)


def arg_gamma_imaginary(y: float) -> float:
    """arg Γ(iy) on the continuous branch through log-Gamma."""
    return float(np.imag(loggamma(1j * y)))


def arg_gamma_imaginary_product(y: float, terms: int = 200000) -> float:
    """arg Γ(iy) = -(π/2)sgn y - γy + Σ_n (y/n - arctan(y/n)) from the Weierstrass product.

    The truncated tail is replaced by its leading term y³/(6 terms²).
    """
    if y == 0:
        raise FactorizationError("Γ 在 0 处有极点")
    n = np.arange(1, terms + 1, dtype=float)
    ratio = y / n
    # the small-ratio branch avoids cancellation in y/n - arctan(y/n)
    small = np.abs(ratio) < 1e-3
    series = np.where(small, ratio ** 3 / 3 - ratio ** 5 / 5, ratio - np.arctan(ratio))
    tail = y ** 3 / (6.0 * terms ** 2)
    return float(-0.5 * math.pi * np.sign(y) - EULER_GAMMA * y + math.fsum(series) + tail)


def explicit_U_first_order(nu: float, eps: int, theta2: float, p: complex, q: complex,
                           t: float = 1.0) -> complex:
    """U = iν/√|νθ″t| · 1/√|pq| · exp(iπε/4 + i arg Γ(iεν)), with its pq → 0 limit.

    Pass ``t=1`` for the reading without the extra √t.
    """
    if theta2 == 0:
        raise FactorizationError("θ″(λ_j) 不能为 0")
    if not t > 0:
        raise FactorizationError(f"t 必须为正: {t}")
    pq = complex(p) * complex(q)
    scale = math.sqrt(abs(theta2) * t)
    if nu == 0 or pq == 0:
        limit = np.exp(0.25j * math.pi) if eps >= 0 else -np.exp(-0.25j * math.pi)
        return complex(limit / math.sqrt(2.0 * math.pi) / scale)
    phase = 0.25 * math.pi * eps + arg_gamma_imaginary(eps * nu)
    return complex(1j * nu / math.sqrt(abs(nu)) / scale / math.sqrt(abs(pq)) * np.exp(1j * phase))


def reference_amplitudes(pq: float) -> Tuple[complex, complex]:
    """(p̂, q̂) with p̂ q̂ = pq and the symmetry of the sign of pq."""
    if pq < 0:
        return math.sqrt(-pq), -math.sqrt(-pq)
    return math.sqrt(pq), math.sqrt(pq)


def default_ray_angle(k: int) -> float:
    return math.pi / (3 * (k + 1))


def truncation_radius(b: float, k: int, ray_angle: float, t0: float = 1.0) -> float:
    """Radius where |e^{-i t₀ b z^{k+1}}| on the rays reaches e^{-32.2}."""
    decay = abs(b) * t0 * math.sin((k + 1) * ray_angle)
    return (TAIL_EXPONENT / decay) ** (1.0 / (k + 1))


@dataclass(frozen=True)
class ModelConstants:
    """U, V for the model at one (pq, k, b) with the Γ truncation used."""

    pq: float
    k: int
    b: float
    U: complex
    V: complex
    t0: float
    ray_angle: float
    R: float
    nodes_per_ray: int
    diagnostics: Dict[str, float] = field(default_factory=dict)

    @property
    def symmetry_gap(self) -> float:
        return abs(self.U + np.conj(self.V))


def _solve_model(p0: complex, q0: complex, k: int, b: float, t0: float, ray_angle: float,
                 nodes_per_ray: int, nodes_per_panel: int) -> Tuple[complex, complex, dict, float]:
    R = truncation_radius(b, k, ray_angle, t0)
    gamma = build_gamma_contour(ray_angle, R, nodes_per_ray, nodes_per_panel, n_decay=1)
    # Γ₀ and Γ₃ carry no weight
    rays = gamma.subset(('G1', 'G2', 'G4', 'G5'))
    model = LocalModel(0.0, k, 0.0, b, complex(p0), complex(q0), 0.0, t0)
    sol = solve_mu(gamma_weights(model, rays), condition=False)
    return sol.u, sol.v, sol.diagnostics, R


@lru_cache(maxsize=64)
def model_constants_numeric(pq: float, k: int, b: float, t0: float = 1.0,
                            ray_angle: Optional[float] = None, nodes_per_ray: int = 128,
                            nodes_per_panel: int = 16) -> ModelConstants:
    """Timeless model constants from a Beals–Coifman solve on Γ centred at 0.

    The model with λ = a = ω = 0 gives u = U p̂ t₀^{-1/(k+1)} e^{-iα ln t₀}
    and the mirrored relation for v.
    """
    if 1.0 + pq <= 0:
        raise FactorizationError(f"模型要求 1 + pq > 0: pq={pq}")
    if k >= 3 and pq >= 1:
        raise FactorizationError(f"k ≥ 3 时要求 pq < 1: pq={pq}")
    ray_angle = default_ray_angle(k) if ray_angle is None else float(ray_angle)

    unit_model = LocalModel(0.0, k, 0.0, b, 1.0, complex(pq), 0.0, t0)
    a = alpha(unit_model.eps, unit_model.nu, k)
    scale = t0 ** (1.0 / (k + 1))
    rotation = np.exp(1j * a * math.log(t0))

    try:
        if pq == 0:
            u, _, diag_u, R = _solve_model(1.0, 0.0, k, b, t0, ray_angle, nodes_per_ray,
                                           nodes_per_panel)
            _, v, diag_v, _ = _solve_model(0.0, 1.0, k, b, t0, ray_angle, nodes_per_ray,
                                           nodes_per_panel)
            p_hat = q_hat = 1.0
            diagnostics = {'residual': max(diag_u['residual'], diag_v['residual'])}
        else:
            p_hat, q_hat = reference_amplitudes(pq)
            u, v, diag, R = _solve_model(p_hat, q_hat, k, b, t0, ray_angle, nodes_per_ray,
                                         nodes_per_panel)
            diagnostics = {'residual': diag['residual'], 'jump_residual': diag['jump_residual']}
    except SolveError as e:
        logger.error(f"模型问题在 pq={pq}, k={k}, b={b} 处不可解: {e}")
        raise SolveError(f"模型可解性失败 (pq={pq}, k={k}, b={b}): {e}") from e

    U = complex(u * scale * rotation / p_hat)
    V = complex(v * scale / rotation / q_hat)
    constants = ModelConstants(float(pq), int(k), float(b), U, V, float(t0), ray_angle, R,
                               int(nodes_per_ray), diagnostics)
    if constants.symmetry_gap > SYMMETRY_TOL * max(1.0, abs(U)):
        logger.warning(f"U 与 -conj(V) 相差 {constants.symmetry_gap:.2e} (pq={pq}, k={k})")
    logger.info(f"模型常数: pq={pq}, k={k}, b={b}, U={U:.10g}")
    return constants


def reconcile_first_order_readings(nu: float, eps: int, theta2: float, p: complex, q: complex,
                                   t: float, numeric: Optional[ModelConstants] = None) -> Dict[str, object]:
    """Compare both readings of the first-order U against the numeric and the pq → 0 constants.

    ``with_t`` keeps the √t in the denominator; ``t_free`` drops it.
    """
    readings = {
        'with_t': explicit_U_first_order(nu, eps, theta2, p, q, t),
        't_free': explicit_U_first_order(nu, eps, theta2, p, q, 1.0),
    }
    limit = explicit_U_first_order(0.0, eps, theta2, 1.0, 0.0, 1.0)
    reference = numeric.U if numeric is not None else None
    gaps = {}
    for name, value in readings.items():
        if reference is not None:
            gaps[name] = abs(value - reference) / abs(reference)
        else:
            # magnitude check against the linear stationary-phase limit
            gaps[name] = abs(abs(value) - abs(limit)) / abs(limit)
    chosen = min(gaps, key=gaps.get)
    message = (f"一阶常数两种读法: with_t={readings['with_t']:.10g}, "
               f"t_free={readings['t_free']:.10g}, 参考={reference if reference is not None else limit:.10g}, "
               f"相对差 {gaps}; 采用 {chosen}")
    if chosen != 't_free':
        logger.warning(message)
    else:
        logger.info(message)
    return {'readings': readings, 'gaps': gaps, 'consistent': chosen, 'limit': limit,
            'reference': reference, 'message': message}
