"""Empirical decay rates of oscillatory projections, integrals and weight operators."""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.integrate
import scipy.sparse.linalg as spla

from ..cauchy.fourier import FourierCauchy, UniformGrid, lp_norm
from ..cauchy.operators import backend_for
from ..cauchy.panel import CauchyOperator
from ..contour import mat2
from ..contour.grid import build_real_grid
from ..contour.panels import oscillation_width
from ..factorization.jump import WeightPair, cutoff
from ..phase.phase import PhaseSpec
from ..solver.beals_coifman import solve_mu
from ..utils.errors import ConfigError, FactorizationError
from ..utils.logger import get_logger

logger = get_logger('decay_lab')

KINDS = ('hardy-localization', 'vanishing-multiplicity', 'linear-phase',
         'almost-orthogonality', 'perturbation')
SLOPE_TOL = 0.15
OPERATOR_TOL = 0.2
BOUND_FACTOR = 10.0
OVERSAMPLE = 8
DEFAULT_TS = (16.0, 32.0, 64.0, 128.0, 256.0, 512.0)
MIN_POINTS = 5
MIN_RATIO = 2.0


def validate_t_grid(ts: Sequence[float]) -> Tuple[float, ...]:
    """At least five positive points with a constant ratio ≥ 2."""
    ts = tuple(float(t) for t in ts)
    if len(ts) < MIN_POINTS:
        raise ConfigError(f"t 网格至少需要 {MIN_POINTS} 个点: {ts}")
    if min(ts) <= 0:
        raise ConfigError(f"t 必须为正: {ts}")
    ratios = np.array(ts[1:]) / np.array(ts[:-1])
    if ratios.min() < MIN_RATIO * (1 - 1e-12) or not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise ConfigError(f"t 网格必须是公比 ≥ {MIN_RATIO} 的等比数列: {ts}")
    return ts


def geometric_ts(start: float, ratio: float = 2.0, count: int = 6) -> Tuple[float, ...]:
    return tuple(float(start) * ratio ** i for i in range(count))


def fit_slope(ts: Sequence[float], values: Sequence[float],
              log_factor: bool = False) -> Tuple[float, float, float]:
    """Least squares for ln v = c₀ + s ln t (+ c₁ ln ln t); returns (s, c₀, c₁)."""
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0):
        raise FactorizationError("对数拟合要求全部测量值为正")
    columns = [np.ones_like(ts), np.log(ts)]
    if log_factor:
        if ts.min() <= math.e:
            raise FactorizationError("ln ln t 回归要求 t > e")
        columns.append(np.log(np.log(ts)))
    coef, *_ = np.linalg.lstsq(np.column_stack(columns), np.log(values), rcond=None)
    return float(coef[1]), float(coef[0]), float(coef[2]) if log_factor else 0.0


@dataclass(frozen=True)
class DecayExperiment:
    """Measured values over a geometric t-grid with the predicted log-log slope."""

    kind: str
    label: str
    p: float
    ts: Tuple[float, ...]
    values: Tuple[float, ...]
    predicted_slope: float
    tolerance: float = SLOPE_TOL
    log_factor: bool = False
    slope: float = float('nan')
    intercept: float = float('nan')
    log_coef: float = 0.0
    bounds: Tuple[float, ...] = ()
    details: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"未知实验类型: {self.kind}")
        validate_t_grid(self.ts)
        if len(self.values) != len(self.ts):
            raise FactorizationError("测量值个数与 t 网格不一致")
        if self.bounds and len(self.bounds) != len(self.ts):
            raise FactorizationError("界的个数与 t 网格不一致")

    @property
    def degenerate(self) -> bool:
        return all(v == 0 for v in self.values)

    def fit(self) -> 'DecayExperiment':
        if self.degenerate or any(v <= 0 for v in self.values):
            return self
        slope, intercept, log_coef = fit_slope(self.ts, self.values, self.log_factor)
        return replace(self, slope=slope, intercept=intercept, log_coef=log_coef)

    @property
    def passed(self) -> bool:
        if self.kind == 'perturbation':
            return all(v <= BOUND_FACTOR * b + 1e-14 for v, b in zip(self.values, self.bounds))
        if self.degenerate:
            return True
        return bool(abs(self.slope - self.predicted_slope) <= self.tolerance)

    def predictions(self) -> List[float]:
        """Bound per t for perturbation probes, else the predicted power law through the first value."""
        if self.bounds:
            return list(self.bounds)
        t0, v0 = self.ts[0], self.values[0]
        return [v0 * (t / t0) ** self.predicted_slope for t in self.ts]

    def records(self) -> List[Dict[str, float]]:
        return [{'t': t, 'value': v, 'prediction': pr}
                for t, v, pr in zip(self.ts, self.values, self.predictions())]

    def summary(self) -> Dict[str, object]:
        return {
            'kind': self.kind, 'label': self.label, 'p': self.p,
            'slope': self.slope, 'predicted_slope': self.predicted_slope,
            'tolerance': self.tolerance, 'log_factor': self.log_factor,
            'log_coef': self.log_coef, 'degenerate': self.degenerate, 'passed': self.passed,
            'details': self.details,
        }


# ----------------------------------------------------------------------
# test functions

def order_k_bump(x, a: float, b: float, k: int) -> np.ndarray:
    """((x-a)(b-x)/h²)^(k-1) on [a, b], 0 outside; its (k-1)-st derivative jumps at a and b."""
    if k < 1:
        raise FactorizationError(f"光滑阶数必须 ≥ 1: {k}")
    x = np.asarray(x, dtype=float)
    h = 0.5 * (b - a)
    inside = (x >= a) & (x <= b)
    base = np.clip((x - a) * (b - x) / h ** 2, 0.0, None)
    return np.where(inside, base ** (k - 1), 0.0)


def power_profile(x, lam0: float, m: float) -> np.ndarray:
    """|x - λ₀|^m."""
    x = np.asarray(x, dtype=float)
    if m == 0:
        return np.ones_like(x)
    return np.abs(x - lam0) ** m


def _inv_p(p: float) -> float:
    return 0.0 if np.isinf(p) else 1.0 / p


def _max_slope(theta: PhaseSpec, lo: float, hi: float) -> float:
    x = np.linspace(lo, hi, 2001)
    return float(max(np.max(np.abs(theta.evaluate(x, 1))), 1e-12))


def _fourier_grid(theta: PhaseSpec, support: Tuple[float, float], t_max: float,
                  oversample: int = OVERSAMPLE):
    """Uniform periodic grid padded four widths past the support, and the measuring window."""
    lo, hi = support
    width = hi - lo
    dx = min(width / 2048, math.pi / (oversample * t_max * _max_slope(theta, lo, hi)))
    grid = UniformGrid.covering(lo - 4 * width, hi + 4 * width, dx)
    x = grid.points
    window = (x >= lo - width) & (x <= hi + width)
    return grid, window


def _panel_minus_norms(theta: PhaseSpec, profile: Callable, support: Tuple[float, float],
                       ts: Sequence[float], p: float, panel_nodes: int) -> List[float]:
    """C₋ norms on a fresh grid per t, one wavelength per panel inside the support only."""
    lo, hi = support
    width = hi - lo
    L = max(abs(lo - width), abs(hi + width))

    def inside(x):
        x = np.real(np.asarray(x))
        return ((x > lo) & (x < hi)).astype(float)

    out, sizes = [], []
    for t in ts:
        local = oscillation_width(lambda x: theta.evaluate(np.real(x), 1), t, inside)
        grid = build_real_grid(L, panel_nodes, [], panel_width=0.5, extra_breakpoints=(lo, hi),
                               width=local)
        x = grid.nodes
        window = (x >= lo - width) & (x <= hi + width)
        f = profile(x) * np.exp(1j * t * np.asarray(theta.evaluate(x), dtype=float))
        values = CauchyOperator(grid).minus(f)
        out.append(lp_norm(values[window], grid.abs_ds[window], p))
        sizes.append(grid.size)
    logger.debug(f"C₋ 范数 (panel, N={sizes}): {out}")
    return out


def _minus_norms(theta: PhaseSpec, profile: Callable, support: Tuple[float, float],
                 ts: Sequence[float], p: float, backend: str, panel_nodes: int) -> List[float]:
    if backend == 'panel':
        return _panel_minus_norms(theta, profile, support, ts, p, panel_nodes)
    if backend != 'fourier':
        raise ConfigError(f"未知 Cauchy 后端: {backend}")
    grid, window = _fourier_grid(theta, support, max(ts))
    op = FourierCauchy(grid)
    x = grid.points
    f = profile(x)
    theta_x = np.asarray(theta.evaluate(x), dtype=float)
    out = []
    for t in ts:
        values = op.minus(f * np.exp(1j * t * theta_x))
        out.append(lp_norm(values[window], grid.dx, p))
    logger.debug(f"C₋ 范数 (fourier, N={grid.size}): {out}")
    return out


def hardy_localization(theta: PhaseSpec, support: Tuple[float, float], k: int, p: float = 2.0,
                       ts: Sequence[float] = DEFAULT_TS, backend: str = 'fourier',
                       amplitude: float = 1.0, panel_nodes: int = 16) -> DecayExperiment:
    """‖C₋(f e^{itθ})‖_p for an order-k bump f supported where θ' > 0; slope -(k-1+1/p)."""
    ts = validate_t_grid(ts)
    lo, hi = support
    if not lo < hi:
        raise FactorizationError(f"支撑区间无效: {support}")
    slope = np.asarray(theta.evaluate(np.linspace(lo, hi, 2001), 1), dtype=float)
    if np.any(slope <= 0) or any(lo <= s <= hi for s in theta.stationary_locations):
        logger.error(f"支撑 {support} 不在 {{θ' > 0}} 内或触及驻点")
        raise FactorizationError(f"支撑 {support} 触及驻点或 θ' ≤ 0 的区域")
    profile = lambda x: amplitude * order_k_bump(x, lo, hi, k)
    values = (0.0,) * len(ts) if amplitude == 0 else tuple(
        _minus_norms(theta, profile, support, ts, p, backend, panel_nodes))
    predicted = -(k - 1 + _inv_p(p))
    return DecayExperiment('hardy-localization', f"hardy k={k} p={p} {backend}", p, ts, values,
                           predicted, details={'support': list(support), 'k': k,
                                               'backend': backend}).fit()


def vanishing_multiplicity(theta: PhaseSpec, j: int, m: float, k: int, p: float = 2.0,
                           ts: Sequence[float] = DEFAULT_TS, radius: float = 1.0,
                           backend: str = 'fourier') -> DecayExperiment:
    """f = |x-λ₀|^m · |λ₀ ± r - x|^(k-1) on the side of λ₀ where θ' > 0.

    Predicted slope max(-(k-1+1/p), -(m+1/p)/(k₀+1)); one ln t factor is
    fitted out when the two exponents coincide.
    """
    ts = validate_t_grid(ts)
    point = theta.point(j)
    lam0, k0 = point.lam, point.k
    side = 1 if float(theta.evaluate(lam0 + 0.5 * radius, 1)) > 0 else -1
    far = lam0 + side * radius
    support = (min(lam0, far), max(lam0, far))

    def profile(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= support[0]) & (x <= support[1])
        out = np.zeros_like(x)
        out[inside] = (power_profile(x[inside], lam0, m)
                       * (np.abs(far - x[inside]) / radius) ** (k - 1))
        return out

    values = tuple(_minus_norms(theta, profile, support, ts, p, backend, 16))
    inv = _inv_p(p)
    smooth, local = -(k - 1 + inv), -(m + inv) / (k0 + 1)
    borderline = abs(smooth - local) < 1e-12
    return DecayExperiment('vanishing-multiplicity', f"vanish m={m} k={k} k0={k0} p={p}", p, ts,
                           values, max(smooth, local), log_factor=borderline,
                           details={'lambda0': lam0, 'k0': k0, 'm': m, 'k': k,
                                    'side': side}).fit()


def _oscillatory_integral(f: Callable, theta: PhaseSpec, a: float, b: float, t: float,
                          points: Sequence[float]) -> complex:
    cycles = t * _max_slope(theta, a, b) * (b - a) / (2 * math.pi)
    limit = int(max(200, 50 * cycles))
    inner = sorted(s for s in points if a < s < b) or None
    kwargs = dict(points=inner, limit=limit, epsabs=1e-15, epsrel=1e-12)
    re, _ = scipy.integrate.quad(lambda x: f(x) * math.cos(t * float(theta.evaluate(x))), a, b,
                                 **kwargs)
    im, _ = scipy.integrate.quad(lambda x: f(x) * math.sin(t * float(theta.evaluate(x))), a, b,
                                 **kwargs)
    return complex(re, im)


def linear_phase(theta: PhaseSpec, ts: Sequence[float] = DEFAULT_TS,
                 support: Optional[Tuple[float, float]] = None, k: int = 3,
                 j: Optional[int] = None, m: float = 0.0, radius: float = 1.0,
                 bump_order: int = 5) -> DecayExperiment:
    """|∫ f e^{itθ}| with Ω ≡ 1.

    Without ``j`` f is an order-k bump on ``support`` free of stationary points
    (slope -k); with ``j`` f = |x-λ_j|^m · bump around λ_j (slope -(m+1)/(k₀+1)).
    """
    ts = validate_t_grid(ts)
    if j is None:
        if support is None:
            raise FactorizationError("未给出驻点时必须给出支撑区间")
        a, b = support
        if any(a <= s <= b for s in theta.stationary_locations):
            raise FactorizationError(f"支撑 {support} 包含驻点")
        f = lambda x: float(order_k_bump(x, a, b, k))
        breaks, predicted, k0, lam0 = (), -float(k), None, None
    else:
        point = theta.point(j)
        lam0, k0 = point.lam, point.k
        a, b = lam0 - radius, lam0 + radius
        f = lambda x: float(power_profile(x, lam0, m) * order_k_bump(x, a, b, bump_order))
        breaks = (lam0,)
        predicted = max(-float(bump_order), -(m + 1) / (k0 + 1))
    values = tuple(abs(_oscillatory_integral(f, theta, a, b, t, breaks)) for t in ts)
    borderline = j is not None and abs(bump_order - (m + 1) / (k0 + 1)) < 1e-12
    return DecayExperiment('linear-phase', f"linear j={j} m={m} k={k}", float('inf'), ts, values,
                           predicted, log_factor=borderline,
                           details={'support': [a, b], 'lambda0': lam0, 'k0': k0, 'm': m}).fit()


# ----------------------------------------------------------------------
# weight operators

def phase_weight_pair(grid, theta: PhaseSpec, t: float, envelope: np.ndarray) -> WeightPair:
    """Weights with the correct phase-weight relation for an envelope f.

    θ' ≥ 0: w⁻ = upper(f e^{-itθ}), w⁺ = lower(f e^{itθ}); θ' < 0: roles swapped.
    """
    x = np.real(grid.points)
    e = np.exp(-1j * t * np.asarray(theta.evaluate(x), dtype=float))
    upper, lower = mat2.upper(envelope * e), mat2.lower(envelope / e)
    rising = (np.asarray(theta.evaluate(x, 1), dtype=float) >= 0)[:, None, None]
    return WeightPair(grid, np.where(rising, upper, lower), np.where(rising, lower, upper),
                      'custom', phase_weight=True, t=float(t), phase=theta)


def _row_operator(w: WeightPair, op) -> Tuple[Callable, Callable]:
    """C_w and its adjoint on one row of a matrix field, flattened to length 2N."""
    n = w.size

    def split(x):
        x = np.asarray(x, dtype=complex).ravel()
        return np.stack([x[:n], x[n:]], axis=1)

    def join(rows):
        return np.concatenate([rows[:, 0], rows[:, 1]])

    def matvec(x):
        rows = split(x)
        return join(op.plus(np.einsum('na,nac->nc', rows, w.w_minus))
                    + op.minus(np.einsum('na,nac->nc', rows, w.w_plus)))

    def rmatvec(y):
        rows = split(y)
        return join(np.einsum('nc,nac->na', op.adjoint_plus(rows), np.conj(w.w_minus))
                    + np.einsum('nc,nac->na', op.adjoint_minus(rows), np.conj(w.w_plus)))

    return matvec, rmatvec


def composition_norm(first: WeightPair, second: WeightPair, seed: int = 0) -> float:
    """‖C_first C_second‖ on L² by the largest singular value."""
    if first.contour is not second.contour:
        raise FactorizationError("两组权重不在同一网格上")
    if not (np.any(first.total) and np.any(second.total)):
        return 0.0
    op = backend_for(first.contour)
    a_mv, a_rmv = _row_operator(first, op)
    b_mv, b_rmv = _row_operator(second, op)
    size = 2 * first.size
    composed = spla.LinearOperator((size, size), matvec=lambda x: a_mv(b_mv(x)),
                                   rmatvec=lambda y: b_rmv(a_rmv(y)), dtype=complex)
    sigma = spla.svds(composed, k=1, tol=1e-8, return_singular_vectors=False,
                      random_state=np.random.default_rng(seed))
    return float(np.max(sigma))


def almost_orthogonality(theta: PhaseSpec, centers: Tuple[float, float], radius: float = 0.5,
                         amplitudes: Tuple[float, float] = (1.0, 1.0), p: float = 2.0,
                         ts: Sequence[float] = DEFAULT_TS, swap: bool = False,
                         seed: int = 0) -> DecayExperiment:
    """‖C_{w₁}C_{w₂}‖ for phase-weight pairs localized at two disjoint centers.

    Predicted slope -1/(p(k_θ+1)) with k_θ the largest stationary order.
    """
    ts = validate_t_grid(ts)
    if p != 2:
        raise ConfigError(f"算子范数只在 L² 上计算: p={p}")
    c1, c2 = centers
    gap = abs(c1 - c2) - 2 * radius
    if gap <= 0:
        logger.error(f"两组权重支撑重叠: centers={centers}, radius={radius}")
        raise FactorizationError(f"支撑重叠: centers={centers}, radius={radius}")
    if gap < 1:
        logger.warning(f"支撑间隙 {gap:.3f} < 1")
    support = (min(c1, c2) - radius, max(c1, c2) + radius)
    grid, _ = _fourier_grid(theta, support, max(ts))
    x = grid.points
    envelopes = [amp * cutoff(x, [c], radius) for amp, c in zip(amplitudes, centers)]
    values = []
    for t in ts:
        w1 = phase_weight_pair(grid, theta, t, envelopes[0])
        w2 = phase_weight_pair(grid, theta, t, envelopes[1])
        values.append(composition_norm(w2, w1, seed) if swap else composition_norm(w1, w2, seed))
    k_theta = max([s.k for s in theta.stationary], default=0)
    predicted = -1.0 / (p * (k_theta + 1))
    label = 'C_w2 C_w1' if swap else 'C_w1 C_w2'
    return DecayExperiment('almost-orthogonality', f"orthogonality {label}", p, ts, tuple(values),
                           predicted, tolerance=OPERATOR_TOL,
                           details={'centers': list(centers), 'radius': radius, 'gap': gap,
                                    'nodes': grid.size}).fit()


# ----------------------------------------------------------------------
# perturbation

def weight_norm(w_minus: np.ndarray, w_plus: np.ndarray, contour, p: float) -> float:
    """‖w‖_p = ‖w⁺‖_p + ‖w⁻‖_p."""
    return (lp_norm(w_plus, contour.abs_ds, p) + lp_norm(w_minus, contour.abs_ds, p))


def hardy_norm(w: WeightPair, p: float = 2.0, operator=None) -> float:
    """H_p(w) = ‖C₋(w⁺)‖_p + ‖C₊(w⁻)‖_p."""
    op = operator or backend_for(w.contour)
    return (lp_norm(op.minus(w.w_plus), w.contour.abs_ds, p)
            + lp_norm(op.plus(w.w_minus), w.contour.abs_ds, p))


def perturbation_bound(base: WeightPair, perturbed: WeightPair, operator=None) -> Dict[str, float]:
    """Itemised bound on the change of u, v from replacing ``base`` by ``perturbed``."""
    op = operator or backend_for(base.contour)
    contour = base.contour
    dm = perturbed.w_minus - base.w_minus
    dp = perturbed.w_plus - base.w_plus
    h_base = hardy_norm(base, 2.0, op)
    h_pert = hardy_norm(perturbed, 2.0, op)
    items = {
        'hardy_base': h_base,
        'hardy_perturbed': h_pert,
        'delta_l2': weight_norm(dm, dp, contour, 2.0),
        'delta_sup': weight_norm(dm, dp, contour, np.inf),
    }
    items['cross_l2'] = items['delta_l2'] * (h_pert + h_base)
    items['cross_sup'] = items['delta_sup'] * h_pert * h_base
    items['triangular'] = float(mat2.frobenius_abs(contour.integrate(np.matmul(dp, base.w_plus)))
                                + mat2.frobenius_abs(contour.integrate(np.matmul(dm, base.w_minus))))
    items['infinity'] = float(mat2.frobenius_abs(contour.integrate(dm + dp)) / (2 * math.pi))
    items['bound'] = items['cross_l2'] + items['cross_sup'] + items['triangular'] + items['infinity']
    return items


def perturbation_probe(base: Callable[[float], WeightPair],
                       perturbation: Callable[[WeightPair], Tuple[np.ndarray, np.ndarray]],
                       ts: Sequence[float], method: str = 'auto') -> DecayExperiment:
    """|u(w+Δw) - u(w)| against the bound at every t; passes when effect ≤ 10 × bound."""
    ts = validate_t_grid(ts)
    effects, bounds, items = [], [], []
    for t in ts:
        w1 = base(t)
        dm, dp = perturbation(w1)
        w2 = WeightPair(w1.contour, w1.w_minus + dm, w1.w_plus + dp, 'custom', t=t)
        s1 = solve_mu(w1, method=method, condition=False, route='direct')
        s2 = solve_mu(w2, method=method, condition=False, operator=s1.operator, route='direct')
        effect = max(abs(s2.u - s1.u), abs(s2.v - s1.v))
        terms = perturbation_bound(w1, w2, s1.operator)
        effects.append(float(effect))
        bounds.append(terms['bound'])
        items.append({'t': t, **terms, 'effect': float(effect)})
        logger.debug(f"t={t}: 扰动效应 {effect:.3e}, 界 {terms['bound']:.3e}")
    return DecayExperiment('perturbation', 'perturbation probe', 2.0, ts, tuple(effects),
                           float('nan'), bounds=tuple(bounds), details={'items': items}).fit()
