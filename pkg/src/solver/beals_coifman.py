"""Beals–Coifman equation μ = I + C_w μ, reconstruction of M and potential recovery."""

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from ..cauchy.operators import backend_for
from ..contour import mat2
from ..factorization.jump import WeightPair, build_jump, canonical_factorization
from ..utils.errors import ContourError, SolveError
from ..utils.logger import get_logger

logger = get_logger('solver')

DENSE_LIMIT = 1500
GMRES_RTOL = 1e-11
GMRES_RESTART = 80
GMRES_MAXITER = 50
ROUTES = ('auto', 'direct', 'deconjugated')


@dataclass(frozen=True, eq=False)
class RhpSolution:
    """μ on the contour with the recovered potentials and solve diagnostics.

    When the solve went through the canonical problem, ``weights`` and ``mu``
    belong to it, ``requested`` holds the conjugated weights asked for and
    ``mu_conjugated`` the matching μ.
    """

    weights: WeightPair
    mu: np.ndarray
    u: complex
    v: complex
    diagnostics: Dict[str, object] = field(default_factory=dict)
    operator: object = None
    requested: Optional[WeightPair] = None
    mu_conjugated: Optional[np.ndarray] = None

    @property
    def contour(self):
        return self.weights.contour


def apply_cw(w: WeightPair, f: np.ndarray, operator=None) -> np.ndarray:
    """C_w f = C₊(f w⁻) + C₋(f w⁺), acting row by row."""
    f = np.asarray(getattr(f, 'values', f))
    if f.shape[0] != w.size:
        raise ContourError(f"场长度 {f.shape[0]} 与权重长度 {w.size} 不一致")
    op = operator or backend_for(w.contour)
    if op.contour is not w.contour:
        raise ContourError("算子与权重不在同一围道上")
    return op.plus(np.matmul(f, w.w_minus)) + op.minus(np.matmul(f, w.w_plus))


class _RowSystem:
    """(I - C_w) restricted to one row of μ; unknown x = [m[:, 0]; m[:, 1]]."""

    def __init__(self, w: WeightPair, op):
        self.w = w
        self.op = op
        self.n = w.size
        self.sqrt_ds = np.sqrt(np.tile(np.asarray(w.contour.abs_ds, dtype=float), 2))

    def _split(self, x):
        return np.stack([x[:self.n], x[self.n:]], axis=1)

    def matvec(self, x):
        rows = self._split(np.asarray(x, dtype=complex).ravel())
        fm = np.einsum('na,nac->nc', rows, self.w.w_minus)
        fp = np.einsum('na,nac->nc', rows, self.w.w_plus)
        out = rows - self.op.plus(fm) - self.op.minus(fp)
        return np.concatenate([out[:, 0], out[:, 1]])

    def rmatvec(self, y):
        rows = self._split(np.asarray(y, dtype=complex).ravel())
        gp = self.op.adjoint_plus(rows)
        gm = self.op.adjoint_minus(rows)
        out = rows - (np.einsum('nc,nac->na', gp, np.conj(self.w.w_minus))
                      + np.einsum('nc,nac->na', gm, np.conj(self.w.w_plus)))
        return np.concatenate([out[:, 0], out[:, 1]])

    def rhs(self, r: int):
        b = self.op.plus(self.w.w_minus[:, r, :]) + self.op.minus(self.w.w_plus[:, r, :])
        return np.concatenate([b[:, 0], b[:, 1]])

    def dense(self) -> np.ndarray:
        cp, cm = self.op.matrix(+1), self.op.matrix(-1)
        n = self.n
        A = np.eye(2 * n, dtype=complex)
        for c in range(2):
            for a in range(2):
                A[c * n:(c + 1) * n, a * n:(a + 1) * n] -= (cp * self.w.w_minus[:, a, c][None, :]
                                                            + cm * self.w.w_plus[:, a, c][None, :])
        return A


def _power_norm(apply: Callable, apply_adj: Callable, size: int, rng, iters: int) -> float:
    x = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    x /= np.linalg.norm(x)
    value = 0.0
    for _ in range(iters):
        y = apply_adj(apply(x))
        value = np.linalg.norm(y)
        if value == 0:
            return 0.0
        x = y / value
    return math.sqrt(value)


def estimate_condition(system: _RowSystem, solve: Callable, solve_adj: Callable,
                       seed: int = 0, iters: int = 20) -> float:
    """‖A‖·‖A⁻¹‖ in the |ds|-weighted L² norm by power iterations."""
    d = system.sqrt_ds
    rng = np.random.default_rng(seed)
    size = d.size
    a_norm = _power_norm(lambda x: d * system.matvec(x / d),
                         lambda y: system.rmatvec(d * y) / d, size, rng, iters)
    inv_norm = _power_norm(lambda x: d * solve(x / d),
                           lambda y: solve_adj(d * y) / d, size, rng, iters)
    return float(a_norm * inv_norm)


def _deconjugation_factor(conjugated: WeightPair, canonical: WeightPair) -> np.ndarray:
    """(I + w⁺)δ₊^{-σ3}(I - w̃⁺): maps the canonical μ to the conjugated one."""
    eye = mat2.identity(conjugated.size)
    left = mat2.multiply(eye + canonical.w_plus, mat2.diag_power(conjugated.delta.delta_plus, -1))
    return mat2.multiply(left, eye - conjugated.w_plus)


def _can_deconjugate(w: WeightPair) -> bool:
    return (w.tag == 'conjugated' and w.delta is not None and w.pair is not None
            and w.phase is not None and w.t is not None
            and getattr(w.contour, 'kind', None) == 'real')


def solve_mu(w: WeightPair, method: str = 'auto', dense_limit: int = DENSE_LIMIT,
             rtol: float = GMRES_RTOL, restart: int = GMRES_RESTART,
             maxiter: int = GMRES_MAXITER, condition: bool = True, seed: int = 0,
             operator=None, route: str = 'auto') -> RhpSolution:
    """Solve (1 - C_w)(μ - I) = C_w I.

    δ-conjugated weights on the real line are solved through the canonical
    problem on the same grid when ``route`` is 'auto' or 'deconjugated'; the
    conjugated μ is then μ(I + w⁺)δ₊^{-σ3}(I - w̃⁺) and u, v are unchanged.

    Args:
        w: 权重
        method: 'auto'、'dense'（LU）或 'gmres'（无矩阵重启 GMRES）
        dense_limit: auto 模式下使用稠密 LU 的最大节点数
        rtol: GMRES 相对残差
        condition: 是否估计条件数
        seed: 条件数幂迭代的随机种子
        route: 'auto'、'direct'（直接解给定权重）或 'deconjugated'
    """
    if route not in ROUTES:
        raise SolveError(f"未知求解路线: {route}")
    if route == 'deconjugated' and not _can_deconjugate(w):
        raise SolveError(f"权重 {w.tag} 不能去共轭求解")
    if route != 'direct' and _can_deconjugate(w):
        canonical = canonical_factorization(build_jump(w.pair, w.phase, w.t, w.contour))
        sol = _solve(canonical, method, dense_limit, rtol, restart, maxiter, condition, seed,
                     operator)
        mu_conjugated = mat2.multiply(sol.mu, _deconjugation_factor(w, canonical))
        deviation = float(np.max(np.abs(mat2.det(mu_conjugated) - 1.0)))
        sol.diagnostics['route'] = 'deconjugated'
        sol.diagnostics['det_deviation'] = max(sol.diagnostics['det_deviation'], deviation)
        return replace(sol, requested=w, mu_conjugated=mu_conjugated)
    sol = _solve(w, method, dense_limit, rtol, restart, maxiter, condition, seed, operator)
    sol.diagnostics['route'] = 'direct'
    return sol


def _solve(w: WeightPair, method: str, dense_limit: int, rtol: float, restart: int,
           maxiter: int, condition: bool, seed: int, operator) -> RhpSolution:
    op = operator or backend_for(w.contour)
    system = _RowSystem(w, op)
    n = w.size
    if method == 'auto':
        method = 'dense' if (n <= dense_limit and hasattr(op, 'matrix')) else 'gmres'
    if method not in ('dense', 'gmres'):
        raise SolveError(f"未知求解方法: {method}")

    started = time.perf_counter()
    iterations = 0
    rhs = np.stack([system.rhs(0), system.rhs(1)], axis=1)

    if not np.any(rhs) and not np.any(w.w_minus) and not np.any(w.w_plus):
        x = np.zeros_like(rhs)
        solve = solve_adj = (lambda b: b)
    elif method == 'dense':
        try:
            lu = scipy.linalg.lu_factor(system.dense(), check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as e:
            logger.error(f"稠密 LU 分解失败: {e}")
            raise SolveError(f"稠密 LU 分解失败: {e}") from e
        x = scipy.linalg.lu_solve(lu, rhs)
        solve = lambda b: scipy.linalg.lu_solve(lu, b)
        solve_adj = lambda b: scipy.linalg.lu_solve(lu, b, trans=2)
    else:
        A = spla.LinearOperator((2 * n, 2 * n), matvec=system.matvec, rmatvec=system.rmatvec,
                                dtype=complex)
        Ah = spla.LinearOperator((2 * n, 2 * n), matvec=system.rmatvec, rmatvec=system.matvec,
                                 dtype=complex)
        counter = {'k': 0}

        def callback(_):
            counter['k'] += 1

        def gmres_solve(matrix, b):
            if not np.any(b):
                return np.zeros_like(b)
            sol, info = spla.gmres(matrix, b, rtol=rtol, atol=0.0, restart=restart,
                                   maxiter=maxiter, callback=callback, callback_type='pr_norm')
            if info != 0:
                logger.error(f"GMRES 未收敛: info={info}, 迭代 {counter['k']} 次")
                raise SolveError(f"GMRES 未在迭代预算内收敛 (info={info})")
            return sol

        x = np.stack([gmres_solve(A, rhs[:, 0]), gmres_solve(A, rhs[:, 1])], axis=1)
        iterations = counter['k']
        solve = lambda b: gmres_solve(A, b)
        solve_adj = lambda b: gmres_solve(Ah, b)

    mu = mat2.identity(n)
    for r in range(2):
        mu[:, r, 0] += x[:n, r]
        mu[:, r, 1] += x[n:, r]
    if not np.all(np.isfinite(mu)):
        raise SolveError("μ 包含非有限值")

    coef = -w.contour.integrate(np.matmul(mu, w.total)) / (2j * math.pi)
    diagnostics = {
        'method': method,
        'nodes': n,
        'iterations': iterations,
        'seconds': time.perf_counter() - started,
    }
    sol = RhpSolution(w, mu, complex(coef[0, 1]), complex(coef[1, 0]), diagnostics, op)

    diagnostics['residual'] = solve_residual(sol)
    diagnostics['det_deviation'] = float(np.max(np.abs(mat2.det(mu) - 1.0)))
    diagnostics['jump_residual'] = jump_residual(sol)
    if condition:
        cond_iters = 20 if method == 'dense' else 3
        diagnostics['condition'] = estimate_condition(system, solve, solve_adj, seed, cond_iters)
    logger.info(f"BC 方程已求解 ({method}): N={n}, 残差 {diagnostics['residual']:.2e}, "
                f"跳跃残差 {diagnostics['jump_residual']:.2e}")
    return sol


def solve_residual(sol: RhpSolution) -> float:
    """‖μ - I - C_w μ‖∞ / (1 + ‖μ‖∞)."""
    r = sol.mu - mat2.identity(sol.weights.size) - apply_cw(sol.weights, sol.mu, sol.operator)
    return float(mat2.frobenius_abs(r).max() / (1.0 + mat2.frobenius_abs(sol.mu).max()))


def boundary_values(sol: RhpSolution) -> Dict[str, np.ndarray]:
    """M± algebraically, μ(I ± w±), and through the Cauchy route I + C±(μw)."""
    w = sol.weights
    eye = mat2.identity(w.size)
    h = np.matmul(sol.mu, w.total)
    op = sol.operator
    return {
        'plus': np.matmul(sol.mu, eye + w.w_plus),
        'minus': np.matmul(sol.mu, eye - w.w_minus),
        'plus_cauchy': eye + op.plus(h),
        'minus_cauchy': eye + op.minus(h),
    }


def jump_residual(sol: RhpSolution) -> float:
    """max ‖M₊ - M₋ J‖ / (1 + ‖M₊‖∞) between the nodes.

    M± = I + C±(μw) and J come from the panel interpolants at points inside
    every panel not touching a singular vertex, so an unresolved μ or weight
    shows up here. Contours without panels fall back to the nodes.
    """
    w = sol.weights
    source = w.source if w.source is not None else w.jump()
    h = np.matmul(sol.mu, w.total)
    op = sol.operator
    if hasattr(w.contour, 'check_points') and hasattr(op, 'boundary_values'):
        idx, tau, _ = w.contour.check_points()
        if idx.size:
            eye = mat2.identity(idx.size)
            plus = eye + op.boundary_values(h, idx, tau, +1)
            minus = eye + op.boundary_values(h, idx, tau, -1)
            jump = op.interpolate(source, idx, tau)
            diff = plus - np.matmul(minus, jump)
            return float(mat2.frobenius_abs(diff).max() / (1.0 + mat2.frobenius_abs(plus).max()))
    eye = mat2.identity(w.size)
    plus = eye + op.plus(h)
    diff = plus - np.matmul(eye + op.minus(h), source)
    return float(mat2.frobenius_abs(diff).max() / (1.0 + mat2.frobenius_abs(plus).max()))


def reconstruct_M(sol: RhpSolution, z) -> np.ndarray:
    """M(z) = I + C(μ(w⁺ + w⁻))(z) off the contour."""
    h = np.matmul(sol.mu, sol.weights.total)
    values = sol.operator.evaluate(h, z)
    return mat2.identity() + values


def recover_potentials(sol: RhpSolution) -> Tuple[complex, complex]:
    """Off-diagonal entries of -(1/2πi)∫ μ(w⁺ + w⁻)."""
    return sol.u, sol.v


def mu_far_field(sol: RhpSolution, x: float, center: float,
                 support_tol: float = 1e-14) -> Dict[str, object]:
    """μ at the node nearest x against I + [[0, u/(x-λ)], [v/(x-λ), 0]]."""
    w = sol.weights
    nodes = w.contour.points
    mag = mat2.frobenius_abs(w.w_minus) + mat2.frobenius_abs(w.w_plus)
    support = nodes[mag > support_tol * max(1.0, mag.max(initial=0.0))]
    if abs(x - center) < 1.0 or (support.size and np.min(np.abs(support - x)) < 1.0):
        raise ContourError(f"x={x} 距离权重支撑或驻点不足 1")
    i = int(np.argmin(np.abs(nodes - x)))
    xi = nodes[i].real
    predicted = mat2.identity()
    predicted[0, 1] = sol.u / (xi - center)
    predicted[1, 0] = sol.v / (xi - center)
    residual = float(mat2.frobenius_abs(sol.mu[i] - predicted))
    return {'x': float(xi), 'mu': sol.mu[i].copy(), 'predicted': predicted, 'residual': residual}
