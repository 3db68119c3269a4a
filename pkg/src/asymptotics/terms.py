"""Per-point leading contributions u_j, v_j and their sum."""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..delta.reflection import ReflectionPair
from ..delta.scalar_rhp import DeltaSolution
from ..phase.phase import PhaseSpec, taylor_model
from ..utils.errors import FactorizationError
from ..utils.logger import get_logger
from .constants import alpha, explicit_U_first_order, model_constants_numeric

logger = get_logger('asymptotics')

SOURCES = ('numeric-model-constant', 'explicit-first-order')


@dataclass(frozen=True)
class AsymptoticTerm:
    """Leading contribution of stationary point j.

    u_j = U p(λ_j) t^{-1/(k+1)} exp(-i[tθ(λ_j) + α ln t - 2ω_j]); v_j mirrors it
    with q and +i. ``reading='with_t'`` divides U by an extra √t.
    """

    j: int
    lam: float
    k: int
    eps: int
    nu: float
    alpha: float
    omega: float
    theta_value: float
    p: complex
    q: complex
    U: complex
    V: complex
    source: str = 'numeric-model-constant'
    reading: str = 't_free'

    @property
    def leading_order(self) -> float:
        return 1.0 / (self.k + 1)

    @property
    def error_order(self) -> float:
        """1/(k+1) + d_j with the nominal d_j = 1/(2(k+1))."""
        return 1.5 / (self.k + 1)

    def constants(self, t: float) -> Tuple[complex, complex]:
        if self.reading == 'with_t':
            return self.U / math.sqrt(t), self.V / math.sqrt(t)
        return self.U, self.V

    def phase_factor(self, t: float) -> complex:
        return complex(np.exp(-1j * (t * self.theta_value + self.alpha * math.log(t)
                                     - 2.0 * self.omega)))


def leading_term(term: AsymptoticTerm, t: float) -> Tuple[complex, complex]:
    """(u_j(t), v_j(t))."""
    if not t > 0:
        raise FactorizationError(f"t 必须为正: {t}")
    U, V = term.constants(t)
    decay = t ** (-term.leading_order)
    e = term.phase_factor(t)
    return complex(U * term.p * decay * e), complex(V * term.q * decay / e)


def sum_contributions(terms: Sequence[AsymptoticTerm], t: float) -> Dict[str, object]:
    """Σ_j (u_j, v_j) with the predicted error order of each term."""
    u = v = 0j
    rows = []
    for term in terms:
        uj, vj = leading_term(term, t)
        u += uj
        v += vj
        rows.append({'j': term.j, 'lambda': term.lam, 'k': term.k, 'u': uj, 'v': vj,
                     'leading_order': term.leading_order, 'error_order': term.error_order,
                     'source': term.source})
    return {'t': float(t), 'u': u, 'v': v, 'terms': rows}


def build_term(j: int, phase: PhaseSpec, pair: ReflectionPair, delta: DeltaSolution,
               source: str = 'numeric-model-constant', reading: str = 't_free',
               nodes_per_ray: int = 128) -> AsymptoticTerm:
    """AsymptoticTerm for stationary point j with ω_j from the δ solve."""
    if source not in SOURCES:
        raise FactorizationError(f"未知常数来源: {source}")
    record = delta.record(j)
    mono = taylor_model(phase, j).monomial
    point = phase.point(j)
    p = complex(pair.p(point.lam))
    q = complex(pair.q(point.lam))
    pq = float(np.real(p * q))
    a = alpha(record.eps, record.nu, mono.k)
    if not np.isfinite(record.omega):
        raise FactorizationError(f"驻点 {j} 的 ω 尚未计算")

    if source == 'explicit-first-order':
        if mono.k != 1:
            raise FactorizationError(f"显式一阶常数只适用于 k=1: k={mono.k}")
        theta2 = 2.0 * mono.b
        U = explicit_U_first_order(record.nu, record.eps, theta2, p, q, 1.0)
        V = -np.conj(U)
    else:
        constants = model_constants_numeric(pq, mono.k, mono.b, nodes_per_ray=nodes_per_ray)
        U, V = constants.U, constants.V

    term = AsymptoticTerm(j, float(point.lam), int(mono.k), int(record.eps), float(record.nu),
                          float(a), float(record.omega), float(point.value), p, q, complex(U),
                          complex(V), source, reading)
    logger.debug(f"驻点 {j}: λ={point.lam:.6g}, k={mono.k}, α={a:.6g}, U={complex(U):.8g}")
    return term


def build_terms(phase: PhaseSpec, pair: ReflectionPair, delta: DeltaSolution,
                source: str = 'numeric-model-constant', **kwargs) -> List[AsymptoticTerm]:
    return [build_term(j, phase, pair, delta, source=source, **kwargs)
            for j in range(len(phase.stationary))]
