"""Scalar conjugating problem δ₊ = δ₋(1 + pq) on D₋, its local models and ω_j."""

import math
from dataclasses import dataclass, replace
from typing import Dict, Tuple

import numpy as np
from scipy import integrate

from ..cauchy.panel import CauchyOperator, operator_for
from ..phase.phase import PhaseSpec, SignPartition
from ..utils.errors import ExtrapolationError, FactorizationError
from ..utils.logger import get_logger
from .reflection import ReflectionPair

logger = get_logger('delta')

OMEGA_LEVELS = 6
OMEGA_START = 1.0 / 64.0
OMEGA_CAUCHY_TOL = 1e-5
OMEGA_IMAG_TOL = 1e-6


@dataclass(frozen=True)
class PointRecord:
    lam: float
    case: str
    eps: int
    nu: float
    omega: float = float('nan')


@dataclass(frozen=True, eq=False)
class DeltaSolution:
    """Boundary values δ± on a real grid and the off-line evaluator.

    ``log_jump`` holds 1_{D₋} ln(1 + pq) at the nodes; δ(z) = exp C[log_jump](z).
    """

    grid: object
    partition: SignPartition
    pair: ReflectionPair
    phase: PhaseSpec
    log_jump: np.ndarray
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    records: Tuple[PointRecord, ...]
    operator: CauchyOperator

    def log_delta(self, z, near_ok: bool = False):
        return self.operator.evaluate(self.log_jump, z, near_ok=near_ok)

    def evaluate(self, z, near_ok: bool = False):
        """δ(z) for z off the real line."""
        return np.exp(self.log_delta(z, near_ok=near_ok))

    def record(self, j: int) -> PointRecord:
        return self.records[j]

    def jump_residual(self) -> float:
        factor = np.where(self.partition.minus, self.pair.one_plus_pq(self.grid.nodes), 1.0)
        resid = np.abs(self.delta_plus - self.delta_minus * factor)
        return float(resid.max() / np.abs(self.delta_plus).max())


def solve_scalar_rhp(pair: ReflectionPair, part: SignPartition, grid, phase: PhaseSpec,
                     with_omega: bool = True) -> DeltaSolution:
    """δ± = exp C±(1_{D₋} ln(1 + pq)) on the grid.

    Args:
        pair: 反射系数 p, q
        part: 相位的符号划分
        grid: 实轴网格
        phase: 已分类的相位（提供驻点数据）
        with_omega: 是否用极限法计算各驻点的 ω_j
    """
    x = grid.nodes
    log_jump = np.where(part.minus, pair.log_one_plus_pq(x), 0.0).astype(complex)
    log_jump.setflags(write=False)
    op = operator_for(grid)
    delta_plus = np.exp(op.plus(log_jump))
    delta_minus = np.exp(op.minus(log_jump))

    records = tuple(PointRecord(s.lam, part.case(j), s.eps, pair.nu(s.lam))
                    for j, s in enumerate(phase.stationary))
    sol = DeltaSolution(grid, part, pair, phase, log_jump, delta_plus, delta_minus, records, op)
    logger.info(f"标量 RHP 已求解: 节点 {grid.size} 个, 跳跃残差 {sol.jump_residual():.2e}")

    if with_omega and records:
        omegas = [omega_limit(j, sol) for j in range(len(records))]
        sol = replace(sol, records=tuple(replace(r, omega=w) for r, w in zip(records, omegas)))
    return sol


def _case_of(record: PointRecord) -> str:
    if record.case in ('left-endpoint', 'right-endpoint'):
        return 'endpoint'
    return record.case


def beta_j(lam, record: PointRecord):
    """β_j(λ) for λ off ℝ (interior case) and off the cut ε(λ - λ_j) ∈ ℝ₋ (endpoint case)."""
    lam = np.asarray(lam, dtype=complex)
    case = _case_of(record)
    if case == 'exterior':
        return np.zeros_like(lam)
    if case == 'interior':
        if np.any(lam.imag == 0):
            raise FactorizationError("内点情形要求 λ 不在实轴上")
        return -math.pi * record.nu * np.sign(lam.imag)
    w = record.eps * (lam - record.lam)
    if np.any((w.imag == 0) & (w.real <= 0)):
        raise FactorizationError(f"λ 位于 β_{record.lam} 的支割线上")
    return 1j * record.eps * record.nu * np.log(w)


def beta_boundary(x, record: PointRecord, side: int):
    """Boundary values β±(x) on the real line, side = +1 or -1."""
    x = np.asarray(x, dtype=float)
    case = _case_of(record)
    if case == 'exterior':
        return np.zeros_like(x, dtype=complex)
    if case == 'interior':
        return np.full(x.shape, -side * math.pi * record.nu, dtype=complex)
    eps, nu = record.eps, record.nu
    dist = np.abs(x - record.lam)
    if np.any(dist == 0):
        raise FactorizationError("β 在驻点处无边界值")
    on_cut = eps * (x - record.lam) < 0
    return 1j * eps * nu * np.log(dist) - np.where(on_cut, side * math.pi * nu, 0.0)


def delta_model(lam, record: PointRecord, omega: float):
    """δ_j(λ) = exp(iω_j + β_j(λ))."""
    return np.exp(1j * omega + beta_j(lam, record))


def delta_model_boundary(x, record: PointRecord, omega: float, side: int):
    return np.exp(1j * omega + beta_boundary(x, record, side))


def _richardson_constant(s: np.ndarray, values: np.ndarray) -> complex:
    basis = np.column_stack([np.ones_like(s), s * np.log(s), s, s ** 2 * np.log(s), s ** 2])
    coef, *_ = np.linalg.lstsq(basis.astype(complex), values, rcond=None)
    return complex(coef[0])


def omega_limit(j: int, delta: DeltaSolution, start: float = OMEGA_START,
                levels: int = OMEGA_LEVELS) -> float:
    """ω_j = (1/i) lim (C[1_{D₋} ln(1+pq)](z) - β_j(z)) along z = λ_j + i s.

    The sequence s = start·2^-m is extrapolated on the basis
    {1, s ln s, s, s² ln s, s²}; the fits on the coarse and fine five-level
    windows must agree to 1e-5.
    """
    record = delta.record(j)
    if not np.any(delta.log_jump):
        return 0.0
    s = start * 0.5 ** np.arange(levels)
    z = record.lam + 1j * s
    values = (delta.log_delta(z, near_ok=True) - beta_j(z, record)) / 1j
    coarse = _richardson_constant(s[:-1], values[:-1])
    fine = _richardson_constant(s[1:], values[1:])
    if abs(coarse - fine) > OMEGA_CAUCHY_TOL:
        logger.error(f"ω_{j} 外推不收敛: {coarse} vs {fine}")
        raise ExtrapolationError(f"ω_{j} 外推不收敛: 差 {abs(coarse - fine):.2e}")
    if abs(fine.imag) > OMEGA_IMAG_TOL:
        logger.error(f"ω_{j} 外推值虚部过大: {fine.imag:.2e}")
        raise ExtrapolationError(f"ω_{j} 虚部 {fine.imag:.2e} 超过 {OMEGA_IMAG_TOL}")
    logger.debug(f"ω_{j} (极限法) = {fine.real:.12f}")
    return float(fine.real)


def omega_integral(j: int, pair: ReflectionPair, part: SignPartition, phase: PhaseSpec) -> float:
    """ω_j = (1/2π)∫_{D₋} ln|λ_j - y| d ln(1+pq)(y) + Σ_{k≠j} ε_k ν_k ln|λ_j - λ_k|."""
    points = phase.stationary
    lam = points[j].lam
    dlog = pair.d_log_one_plus_pq
    total = 0.0
    for a, b in part.minus_intervals:
        pieces = [(a, lam), (lam, b)] if a < lam < b else [(a, b)]
        for lo, hi in pieces:
            if hi - lo <= 0:
                continue
            if lo == lam:
                val, _ = integrate.quad(dlog, lo, hi, weight='alg-loga', wvar=(0.0, 0.0),
                                        epsabs=1e-14, epsrel=1e-12, limit=200)
            elif hi == lam:
                val, _ = integrate.quad(dlog, lo, hi, weight='alg-logb', wvar=(0.0, 0.0),
                                        epsabs=1e-14, epsrel=1e-12, limit=200)
            else:
                val, _ = integrate.quad(lambda y: np.log(abs(lam - y)) * dlog(y), lo, hi,
                                        epsabs=1e-14, epsrel=1e-12, limit=200)
            total += val
    cross = sum(s.eps * pair.nu(s.lam) * math.log(abs(lam - s.lam))
                for k, s in enumerate(points) if k != j)
    omega = total / (2.0 * math.pi) + cross
    logger.debug(f"ω_{j} (积分法) = {omega:.12f}")
    return float(omega)


def delta_bound_constant(delta: DeltaSolution, z: complex) -> Dict[str, float]:
    """ln|δ(z)| against ‖ln(1 + pq)‖∞."""
    sup = float(np.max(np.abs(delta.log_jump)))
    log_abs = float(np.real(delta.log_delta(z)))
    return {'log_abs_delta': log_abs, 'sup_log': sup,
            'ratio': abs(log_abs) / sup if sup else 0.0}
