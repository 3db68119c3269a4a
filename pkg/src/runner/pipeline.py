"""Command pipelines: solve, asym, verify, decay and sweep.

Each command fills a RunReport; per-t work is spread over a thread pool and
the report is written even when a stage fails. Every t gets its own contour:
a real grid resolving e^{±itθ} while it stays under grid.real_max_nodes, the
lens beyond that.
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import integrate

from ..asymptotics import (SYMMETRY_TOL, AsymptoticTerm, build_terms, default_ray_angle,
                           reconcile_first_order_readings, sum_contributions, truncation_radius)
from ..contour import build_gamma_contour, build_real_grid, oscillation_width
from ..decay_lab import (almost_orthogonality, fit_slope, hardy_localization, linear_phase,
                         perturbation_probe, vanishing_multiplicity)
from ..delta import omega_integral, solve_scalar_rhp
from ..factorization import (WeightPair, build_jump, build_lens_for, canonical_factorization,
                             conjugated_factorization, cutoff, deform_to_gamma, lens_weights,
                             localize, premodel_weights)
from ..phase import sign_partition, taylor_model
from ..solver import RhpSolution, solve_mu
from ..utils.errors import ConfigError, ContourError, RhpToolkitError
from ..utils.logger import get_logger
from .config import ExperimentConfig
from .report import CheckResult, RunReport, check, skipped

logger = get_logger('runner')

COMMANDS = ('solve', 'asym', 'verify', 'decay', 'sweep')
# q = -conj(p) gives v = conj(u); q = conj(p) gives v = -conj(u)
SYMMETRY_SIGN = {'defocusing': 1.0, 'focusing': -1.0}
ENVELOPE_SAMPLES = 4001


@dataclass(frozen=True, eq=False)
class Setup:
    """What is shared across t: the base grid, its sign partition and δ."""

    config: ExperimentConfig
    grid: object
    partition: object
    delta: object


def prepare(cfg: ExperimentConfig, with_omega: bool = True) -> Setup:
    g = cfg.grid
    grid = build_real_grid(g.L, g.nodes_per_panel, cfg.phase.stationary_locations,
                           g.panel_width, g.node_family)
    partition = sign_partition(cfg.phase, grid)
    delta = solve_scalar_rhp(cfg.pair, partition, grid, cfg.phase, with_omega=with_omega)
    logger.info(f"准备完成: 节点 {grid.size} 个, 驻点 {cfg.phase.stationary_locations}")
    return Setup(cfg, grid, partition, delta)


def conjugated_weights(setup: Setup, t: float) -> WeightPair:
    """δ-conjugated weights on the base grid."""
    J = build_jump(setup.config.pair, setup.config.phase, t, setup.grid)
    return conjugated_factorization(J, setup.delta)


def envelope_magnitude(cfg: ExperimentConfig) -> Callable[[np.ndarray], np.ndarray]:
    """max(|p|, |q|) relative to its peak on [-L, L]."""
    pair = cfg.pair
    x = np.linspace(-cfg.grid.L, cfg.grid.L, ENVELOPE_SAMPLES)
    peak = max(float(np.max(np.maximum(np.abs(pair.p(x)), np.abs(pair.q(x))))), 1e-300)

    def magnitude(z):
        z = np.real(np.asarray(z))
        return np.maximum(np.abs(pair.p(z)), np.abs(pair.q(z))) / peak

    return magnitude


def real_grid_at(cfg: ExperimentConfig, t: float, magnitude=None, phase=None):
    """Graded real grid whose panels hold one wavelength of e^{itθ} where the weight lives."""
    g = cfg.grid
    phase = phase or cfg.phase
    magnitude = magnitude or envelope_magnitude(cfg)
    width = oscillation_width(lambda x: phase.evaluate(np.real(x), 1), t, magnitude)
    return build_real_grid(g.L, g.nodes_per_panel, cfg.phase.stationary_locations, g.panel_width,
                           g.node_family, width=width, max_nodes=g.real_max_nodes)


def real_weights(cfg: ExperimentConfig, t: float, magnitude=None,
                 with_omega: bool = False) -> WeightPair:
    """δ-conjugated weights on a t-aware real grid, δ solved on that grid."""
    grid = real_grid_at(cfg, t, magnitude)
    delta = solve_scalar_rhp(cfg.pair, sign_partition(cfg.phase, grid), grid, cfg.phase,
                             with_omega=with_omega)
    return conjugated_factorization(build_jump(cfg.pair, cfg.phase, t, grid), delta)


def lens_weights_at(setup: Setup, t: float) -> WeightPair:
    g = setup.config.grid
    cfg = setup.config
    lens = build_lens_for(cfg.pair, cfg.phase, t, g.nodes_per_panel, g.panel_width,
                          g.lens_max_nodes)
    return lens_weights(setup.delta, t, lens)


def weights_at(setup: Setup, t: float) -> WeightPair:
    """Weights at t on the contour chosen by run.contour (auto, real or lens)."""
    cfg = setup.config
    if cfg.contour != 'lens':
        try:
            return real_weights(cfg, t)
        except ContourError as e:
            if cfg.contour == 'real':
                raise
            logger.info(f"t={t:g}: 实轴网格不可行 ({e})，改用透镜围道")
    return lens_weights_at(setup, t)


def refined_weights(setup: Setup, w: WeightPair) -> WeightPair:
    """The same problem with every panel bisected."""
    if w.contour.kind == 'lens':
        return lens_weights(setup.delta, w.t, w.contour.refined())
    return canonical_factorization(build_jump(w.pair, w.phase, w.t, w.contour.refined()))


def solve_at(setup: Setup, t: float) -> RhpSolution:
    cfg = setup.config
    return solve_mu(weights_at(setup, t), method=cfg.method, seed=cfg.seed)


def abelian_potential(cfg: ExperimentConfig, t: float) -> complex:
    """u = -(1/2πi)∫ p e^{-itθ} over [-L, L] by adaptive quadrature (q ≡ 0)."""
    L = cfg.grid.L
    p, theta = cfg.pair.p, cfg.phase

    def integrand(x):
        return complex(p(x) * np.exp(-1j * t * float(theta.evaluate(x))))

    breaks = [s for s in theta.stationary_locations if -L < s < L]
    value, _ = integrate.quad(integrand, -L, L, points=breaks or None, complex_func=True,
                              epsabs=1e-14, epsrel=1e-12, limit=2000)
    return complex(-value / (2j * math.pi))


def numeric_record(t: float, sol: RhpSolution) -> Dict[str, object]:
    d = sol.diagnostics
    return {
        't': float(t), 'u_numeric': sol.u, 'v_numeric': sol.v,
        'jump_residual': d['jump_residual'], 'det_deviation': d['det_deviation'],
        'condition': d.get('condition', float('nan')), 'residual': d['residual'],
        'method': d['method'], 'nodes': d['nodes'], 'iterations': d['iterations'],
        'seconds': d['seconds'], 'contour': sol.contour.kind, 'route': d['route'],
    }


def asymptotic_terms(setup: Setup) -> List[AsymptoticTerm]:
    cfg = setup.config
    return build_terms(cfg.phase, cfg.pair, setup.delta, source=cfg.constant_source,
                       nodes_per_ray=cfg.grid.gamma_nodes_per_ray)


def separation_gap(setup: Setup, t: float, u_full: complex) -> float:
    """|u - Σ_j u_j| with u_j from the weights localized at λ_j alone.

    Each localized problem gets a real grid resolved only around its own λ_j.
    """
    cfg = setup.config
    radius = cfg.grid.localize_radius
    base = envelope_magnitude(cfg)
    total = 0j
    for j, lam in enumerate(cfg.phase.stationary_locations):
        def magnitude(x, lam=lam):
            x = np.real(np.atleast_1d(x))
            return base(x) * cutoff(x, [lam], radius)

        w = real_weights(cfg, t, magnitude)
        total += solve_mu(localize(w, radius, [j]), method=cfg.method, condition=False).u
    return float(abs(u_full - total))


def convergence_gap(setup: Setup, sol: RhpSolution) -> float:
    """max(|Δu|, |Δv|) after bisecting every panel."""
    w = sol.requested if sol.requested is not None else sol.weights
    fine = solve_mu(refined_weights(setup, w), method=setup.config.method, condition=False)
    gap = max(abs(fine.u - sol.u), abs(fine.v - sol.v))
    logger.debug(f"t={w.t:g}: 加密后 |Δu| = {gap:.3e} (节点 {w.size} -> {fine.weights.size})")
    return float(gap)


def evaluate_t(setup: Setup, t: float, terms: Optional[List[AsymptoticTerm]] = None,
               separation: bool = False, convergence: bool = False) -> Dict[str, object]:
    """Numeric solve at t, the asymptotic sum when terms are given, and optional extras."""
    cfg = setup.config
    sol = solve_at(setup, t)
    record = numeric_record(t, sol)
    if terms is not None:
        asym = sum_contributions(terms, t)
        record.update(u_asym=asym['u'], v_asym=asym['v'], abs_error=float(abs(sol.u - asym['u'])))
    if cfg.pair.q.is_zero:
        record['u_abelian'] = abelian_potential(cfg, t)
    if separation:
        try:
            record['separation_gap'] = separation_gap(setup, t, sol.u)
        except ContourError as e:
            logger.warning(f"t={t:g}: 跳过分离检验 ({e})")
            record['separation_gap'] = float('nan')
    if convergence and t <= cfg.convergence_t_max:
        record['convergence_gap'] = convergence_gap(setup, sol)
    logger.info(f"t={t:g}: u={sol.u:.10g} ({record['contour']}, N={record['nodes']})"
                + (f", |u - u_asym|={record['abs_error']:.3e}" if 'abs_error' in record else ''))
    return record




def _map_ts(cfg: ExperimentConfig, fn: Callable[[float], Dict[str, object]],
            report: RunReport, ts: Optional[Sequence[float]] = None) -> List[Dict[str, object]]:
    ts = list(cfg.ts if ts is None else ts)
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for record in pool.map(fn, ts):
            report.add_record(record)
    return report.records


# ----------------------------------------------------------------------
# checks

def check_abelian(cfg: ExperimentConfig, records) -> CheckResult:
    if not cfg.pair.q.is_zero:
        return skipped('abelian', 'q 不恒为 0')
    tol = cfg.tolerances['abelian']
    worst = max(abs(r['u_numeric'] - r['u_abelian']) / max(abs(r['u_abelian']), 1e-300)
                for r in records)
    return check('abelian', worst <= tol, worst, tol, '数值解与直接求积的相对差')


def check_error_order(cfg: ExperimentConfig, records) -> CheckResult:
    rows = [r for r in records if r.get('abs_error', 0) > 0]
    if len(rows) < 2:
        return skipped('error-order', '需要至少两个误差为正的 t')
    slope, _, _ = fit_slope([r['t'] for r in rows], [r['abs_error'] for r in rows])
    tol = cfg.tolerances['error_slope']
    return check('error-order', slope <= tol, slope, tol, '|u - u_asym| 的对数斜率')


def check_phase_tracking(cfg: ExperimentConfig, records, terms) -> CheckResult:
    if len(cfg.phase.stationary) != 1 or len(records) < 2 or not terms:
        return skipped('phase-tracking', '需要单个驻点与至少两个 t')
    term = terms[0]
    worst = 0.0
    for r1, r2 in zip(records[:-1], records[1:]):
        t1, t2 = r1['t'], r2['t']
        if r1['u_numeric'] == 0 or r2['u_numeric'] == 0:
            return skipped('phase-tracking', 'u 为 0')
        measured = cmath.phase(r2['u_numeric'] / r1['u_numeric'])
        predicted = -((t2 - t1) * term.theta_value + term.alpha * math.log(t2 / t1))
        gap = (measured - predicted + math.pi) % (2 * math.pi) - math.pi
        worst = max(worst, abs(gap))
    tol = cfg.tolerances['phase_tracking']
    return check('phase-tracking', worst <= tol, worst, tol, 'arg u 增量与 -(Δt θ(λ) + α Δln t) 之差')


def check_symmetry(cfg: ExperimentConfig, records, terms) -> CheckResult:
    sign = SYMMETRY_SIGN.get(cfg.pair.symmetry)
    if sign is None:
        return skipped('symmetry', f"对称类型 {cfg.pair.symmetry} 无 u/v 关系")
    tol = cfg.tolerances['symmetry']
    worst = max((abs(r['v_numeric'] - sign * np.conj(r['u_numeric'])) / max(1.0, abs(r['u_numeric']))
                 for r in records), default=0.0)
    for term in terms or ():
        worst = max(worst, abs(term.U + np.conj(term.V)) / max(1.0, abs(term.U)))
    return check('symmetry', worst <= tol, worst, tol, 'v 与 ±conj(u)、U 与 -conj(V)')


def check_separation(cfg: ExperimentConfig, records) -> CheckResult:
    if len(cfg.phase.stationary) < 2:
        return skipped('separation', '需要至少两个驻点')
    rows = [r for r in records if r.get('separation_gap', 0) > 0]
    if len(rows) < 2:
        return skipped('separation', '需要至少两个分离误差为正的 t')
    slope, _, _ = fit_slope([r['t'] for r in rows], [r['separation_gap'] for r in rows])
    tol = cfg.tolerances['separation_slope']
    return check('separation', slope <= tol, slope, tol, '|u - Σ u_j| 的对数斜率')


def check_convergence(cfg: ExperimentConfig, records) -> CheckResult:
    rows = [r for r in records if 'convergence_gap' in r]
    if not rows:
        return skipped('convergence', f"没有 t ≤ {cfg.convergence_t_max:g} 的记录")
    worst = max(r['convergence_gap'] for r in rows)
    tol = cfg.tolerances['convergence']
    return check('convergence', worst <= tol, worst, tol, '面板二分加密前后 u, v 之差')


def deformation_gaps(setup: Setup, t: float) -> List[Dict[str, float]]:
    """u from pre-model weights on ℝ against the same weights continued onto Γ.

    Both contours resolve e^{±itΘ_j} under the pre-model envelope and are
    graded geometrically toward λ_j.
    """
    cfg = setup.config
    g = cfg.grid
    n_decay = g.premodel_decay
    rows = []
    for j, point in enumerate(cfg.phase.stationary):
        model = taylor_model(cfg.phase, j)
        mono = model.monomial
        lam = point.lam

        def decay(z, lam=lam):
            return 1.0 / np.abs(1.0 + 1j * (np.asarray(z) - lam) ** n_decay)

        grid = build_real_grid(g.L, g.nodes_per_panel, cfg.phase.stationary_locations,
                               g.panel_width, g.node_family,
                               width=oscillation_width(lambda x: model.evaluate(np.real(x), 1), t, decay),
                               max_nodes=g.real_max_nodes)
        delta = solve_scalar_rhp(cfg.pair, sign_partition(cfg.phase, grid), grid, cfg.phase)
        w = conjugated_factorization(build_jump(cfg.pair, cfg.phase, t, grid), delta)
        pre = premodel_weights(localize(w, g.localize_radius, [j]), n_decay)
        u_real = solve_mu(pre, method=cfg.method, condition=False).u

        angle = g.gamma_alpha or min(default_ray_angle(mono.k), math.pi / (3 * n_decay))
        R = truncation_radius(mono.b, mono.k, angle, t)

        def ray_magnitude(z, decay=decay):
            return np.exp(-t * np.abs(np.imag(model.evaluate(z)))) * decay(z)

        gamma = build_gamma_contour(angle, R, g.gamma_nodes_per_ray, g.nodes_per_panel,
                                    origin=lam, n_decay=n_decay,
                                    width=oscillation_width(lambda z: model.evaluate(z, 1), t,
                                                            ray_magnitude))
        u_gamma = solve_mu(deform_to_gamma(pre, gamma), method=cfg.method, condition=False).u
        gap = abs(u_real - u_gamma) / max(abs(u_real), 1e-300)
        logger.info(f"驻点 {j}, t={t:g}: ℝ 与 Γ 上的 u 相对差 {gap:.3e} "
                    f"(ℝ {grid.size} 节点, Γ {gamma.size} 节点, R={R:.4g}, alpha={angle:.4f})")
        rows.append({'j': j, 't': t, 'u_real': u_real, 'u_gamma': u_gamma, 'gap': float(gap)})
    return rows


def check_deformation(setup: Setup, report: RunReport) -> CheckResult:
    ts = setup.config.check_ts
    rows = [row for t in ts for row in deformation_gaps(setup, t)]
    report.details['deformation'] = rows
    worst = max(r['gap'] for r in rows) if rows else 0.0
    tol = setup.config.tolerances['deformation']
    return check('deformation', worst <= tol, worst, tol,
                 f"t={[float(t) for t in ts]} 时 ℝ 与 Γ 的相对差")


def check_conditioning(cfg: ExperimentConfig, records) -> CheckResult:
    rows = [r for r in records if np.isfinite(r.get('condition', float('nan')))]
    if len(rows) < 2:
        return skipped('conditioning', '需要至少两个条件数')
    factor = cfg.tolerances['conditioning_factor']
    baseline = min(rows, key=lambda r: r['t'])['condition']
    growth = max(r['condition'] for r in rows) / baseline
    return check('conditioning', growth <= factor, growth, factor, '条件数相对最小 t 的增长')


# ----------------------------------------------------------------------
# commands

def cmd_solve(cfg: ExperimentConfig, report: RunReport) -> RunReport:
    setup = prepare(cfg, with_omega=False)
    records = _map_ts(cfg, lambda t: evaluate_t(setup, t), report)
    if cfg.pair.q.is_zero:
        report.add_check(check_abelian(cfg, records))
    return report


def point_table(setup: Setup, terms: Sequence[AsymptoticTerm]) -> List[Dict[str, object]]:
    """Per-point ν, ε, α, ω by both routes and the model constants."""
    cfg = setup.config
    rows = []
    for term in terms:
        row = {'j': term.j, 'lambda': term.lam, 'k': term.k, 'eps': term.eps, 'nu': term.nu,
               'alpha': term.alpha, 'omega_limit': term.omega,
               'omega_integral': omega_integral(term.j, cfg.pair, setup.partition, cfg.phase),
               'U': term.U, 'V': term.V, 'p': term.p, 'q': term.q, 'source': term.source,
               'case': setup.delta.record(term.j).case}
        if term.k == 1 and term.q != 0 and term.p != 0:
            theta2 = 2.0 * taylor_model(cfg.phase, term.j).monomial.b
            readings = reconcile_first_order_readings(term.nu, term.eps, theta2, term.p, term.q,
                                                      max(cfg.ts))
            row['first_order_reading'] = readings['consistent']
            row['first_order_U'] = readings['readings']['t_free']
        rows.append(row)
    return rows


def cmd_asym(cfg: ExperimentConfig, report: RunReport) -> RunReport:
    setup = prepare(cfg)
    terms = asymptotic_terms(setup)
    points = point_table(setup, terms)
    report.details['points'] = points
    for t in cfg.ts:
        asym = sum_contributions(terms, t)
        report.add_record({'t': float(t), 'u_asym': asym['u'], 'v_asym': asym['v']})
    tol = cfg.tolerances['omega']
    gap = max((abs(p['omega_limit'] - p['omega_integral']) for p in points), default=0.0)
    report.add_check(check('omega-routes', gap <= tol, gap, tol, 'ω 极限法与积分法之差'))
    worst = max((abs(term.U + np.conj(term.V)) for term in terms), default=0.0)
    report.add_check(check('model-symmetry', worst <= SYMMETRY_TOL, worst, SYMMETRY_TOL,
                           'U 与 -conj(V)'))
    return report


def cmd_verify(cfg: ExperimentConfig, report: RunReport) -> RunReport:
    setup = prepare(cfg)
    terms = asymptotic_terms(setup)
    report.details['points'] = point_table(setup, terms)
    separation = 'separation' in cfg.stages and len(cfg.phase.stationary) >= 2
    convergence = 'convergence' in cfg.stages
    records = _map_ts(cfg, lambda t: evaluate_t(setup, t, terms, separation, convergence), report)

    for stage in cfg.stages:
        if stage == 'abelian':
            report.add_check(check_abelian(cfg, records))
        elif stage == 'error-order':
            report.add_check(check_error_order(cfg, records))
        elif stage == 'phase-tracking':
            report.add_check(check_phase_tracking(cfg, records, terms))
        elif stage == 'symmetry':
            report.add_check(check_symmetry(cfg, records, terms))
        elif stage == 'separation':
            report.add_check(check_separation(cfg, records))
        elif stage == 'deformation':
            report.add_check(check_deformation(setup, report))
        elif stage == 'conditioning':
            report.add_check(check_conditioning(cfg, records))
        elif stage == 'convergence':
            report.add_check(check_convergence(cfg, records))
    return report


def cmd_sweep(cfg: ExperimentConfig, report: RunReport) -> RunReport:
    setup = prepare(cfg)
    terms = asymptotic_terms(setup)
    convergence = 'convergence' in cfg.stages
    records = _map_ts(cfg, lambda t: evaluate_t(setup, t, terms, convergence=convergence), report)
    report.add_check(check_conditioning(cfg, records))
    if convergence:
        report.add_check(check_convergence(cfg, records))
    report.add_check(check_error_order(cfg, records))
    return report


def _perturbation(setup: Setup, item: Dict[str, object]):
    amplitude = float(item.get('amplitude', 1e-3))
    structure = item.get('structure', 'matching')
    if structure not in ('matching', 'mismatched'):
        raise ConfigError(f"未知扰动结构: {structure}")
    radius = float(item.get('radius', setup.config.grid.localize_radius))
    centers = setup.config.phase.stationary_locations[:1]

    def perturb(w):
        phi = amplitude * cutoff(w.contour.nodes, centers, radius)[:, None, None]
        if structure == 'matching':
            return phi * w.w_minus, phi * w.w_plus
        return phi * w.w_plus, phi * w.w_minus

    return perturb


def run_decay_item(cfg: ExperimentConfig, item: Dict[str, object],
                   setup_factory: Callable[[], Setup]):
    kind = item['kind']
    ts = item.get('ts', cfg.decay_ts)
    if kind == 'perturbation':
        setup = setup_factory()
        return perturbation_probe(lambda t: conjugated_weights(setup, t),
                                  _perturbation(setup, item), ts, method=cfg.method)
    theta = cfg.phase_for(item.get('phase'))
    p = float(item.get('p', 2.0))
    if kind == 'hardy-localization':
        return hardy_localization(theta, tuple(item['support']), int(item['k']), p, ts,
                                  backend=item.get('backend', 'fourier'),
                                  amplitude=float(item.get('amplitude', 1.0)))
    if kind == 'vanishing-multiplicity':
        return vanishing_multiplicity(theta, int(item.get('j', 0)), float(item['m']),
                                      int(item['k']), p, ts, radius=float(item.get('radius', 1.0)))
    if kind == 'linear-phase':
        support = tuple(item['support']) if item.get('support') else None
        return linear_phase(theta, ts, support=support, k=int(item.get('k', 3)), j=item.get('j'),
                            m=float(item.get('m', 0.0)), radius=float(item.get('radius', 1.0)),
                            bump_order=int(item.get('bump_order', 5)))
    return almost_orthogonality(theta, tuple(item['centers']), float(item.get('radius', 0.5)),
                                tuple(item.get('amplitudes', (1.0, 1.0))), p, ts,
                                swap=bool(item.get('swap', False)), seed=cfg.seed)


def cmd_decay(cfg: ExperimentConfig, report: RunReport) -> RunReport:
    if not cfg.decay_experiments:
        raise ConfigError("decay.experiments 为空")
    cache: Dict[str, Setup] = {}

    def setup_factory() -> Setup:
        if 'setup' not in cache:
            cache['setup'] = prepare(cfg, with_omega=False)
        return cache['setup']

    # δ is built once before the pool starts
    if any(item['kind'] == 'perturbation' for item in cfg.decay_experiments):
        setup_factory()

    def run(item):
        experiment = run_decay_item(cfg, item, setup_factory)
        summary = experiment.summary()
        if item.get('label'):
            summary['label'] = item['label']
        return experiment, summary

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for experiment, summary in pool.map(run, cfg.decay_experiments):
            report.add_experiment(summary, experiment.records())
            report.add_check(check(f"decay:{summary['label']}", experiment.passed,
                                   experiment.slope, experiment.predicted_slope,
                                   f"kind={experiment.kind}, p={experiment.p}"))
    return report


HANDLERS = {
    'solve': cmd_solve,
    'asym': cmd_asym,
    'verify': cmd_verify,
    'decay': cmd_decay,
    'sweep': cmd_sweep,
}


def run_command(command: str, cfg: ExperimentConfig) -> RunReport:
    """Run one command and write its report, including after a failure."""
    if command not in HANDLERS:
        raise ConfigError(f"未知命令: {command}")
    report = RunReport(command, config=cfg.stamp())
    try:
        HANDLERS[command](cfg, report)
    except RhpToolkitError as e:
        report.error = f"{type(e).__name__}: {e}"
        logger.error(f"命令 {command} 失败: {report.error}")
        raise
    finally:
        report.write(cfg.output_dir, cfg.formats)
    return report
