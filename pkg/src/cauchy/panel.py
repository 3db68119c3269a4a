"""Panel-method Cauchy operator.

For a panel a → b with reference rule (σ_k, ω_k) the interpolant P of the
nodal values has the exact Cauchy integral

    ∫ P(σ)/(σ-τ) dσ = Σ_j ω_j (f_j - P(τ))/(σ_j - τ) + P(τ) Log((1-τ)/(-1-τ)),

τ = (z - c)/H. Targets are handled in three tiers by Bernstein radius:
closed form when ρ < 1.3, upsampled Gauss–Legendre when ρ < 10^(16/n),
and the native rule beyond that.
"""

import math
from functools import lru_cache
from typing import Optional

import numpy as np

from ..utils.errors import CauchyError
from ..utils.logger import get_logger

logger = get_logger('cauchy')

NEAR_RHO = 1.3
TWO_PI_I = 2j * math.pi


def bernstein_radius(tau: np.ndarray) -> np.ndarray:
    tau = np.asarray(tau, dtype=complex)
    w = np.abs(tau + np.sqrt(tau - 1) * np.sqrt(tau + 1))
    # 负实轴上带 -0j 的 τ 会落到另一分支，取 ρ ≥ 1 的那一个
    with np.errstate(divide='ignore'):
        return np.maximum(w, 1.0 / w)


def _log_ratio(tau: np.ndarray) -> np.ndarray:
    return np.log((1 - tau) / (-1 - tau))


@lru_cache(maxsize=None)
def _upsampling(n: int, family: str):
    from ..contour.panels import reference_rule
    m = max(4 * n, 64)
    x, w = np.polynomial.legendre.leggauss(m)
    interp = reference_rule(n, family).interpolation_matrix(x.astype(complex))
    return x, w, interp


class CauchyOperator:
    """Boundary-value and off-contour Cauchy integrals on a panel contour.

    C₊ and C₋ share the principal-value matrix: C± = PV/(2πi) ± I/2.
    """

    method = 'panel-closed-form'

    def __init__(self, contour):
        if not hasattr(contour, 'panels') or not hasattr(contour, 'rule'):
            raise CauchyError(f"不支持的围道类型: {type(contour).__name__}")
        self.contour = contour
        self.rule = contour.rule
        self.far_rho = 10.0 ** (16.0 / self.rule.order)
        self._pv = self._assemble_pv()
        self._pv.setflags(write=False)
        logger.debug(f"Cauchy 矩阵已组装: N={contour.size}, 面板 {len(contour.panels)} 个")

    # ------------------------------------------------------------------
    # assembly

    def _panel_rows(self, panel, tau: np.ndarray) -> np.ndarray:
        """∫ ℓ_k(σ)/(σ-τ) dσ for targets τ off the panel, shape (len(tau), n)."""
        rule = self.rule
        sigma, omega = rule.nodes, rule.weights
        rows = np.empty((tau.shape[0], rule.order), dtype=complex)
        rho = bernstein_radius(tau)

        near = rho < NEAR_RHO
        if np.any(near):
            t = tau[near]
            kern = omega[None, :] / (sigma[None, :] - t[:, None])
            ell = rule.interpolation_matrix(t)
            rows[near] = kern - ell * kern.sum(axis=1, keepdims=True) + ell * _log_ratio(t)[:, None]

        mid = (~near) & (rho < self.far_rho)
        if np.any(mid):
            x, w, interp = _upsampling(rule.order, rule.family)
            t = tau[mid]
            rows[mid] = (w[None, :] / (x[None, :] - t[:, None])) @ interp

        far = ~(near | (rho < self.far_rho))
        if np.any(far):
            t = tau[far]
            rows[far] = omega[None, :] / (sigma[None, :] - t[:, None])
        return rows

    def _self_rows(self) -> np.ndarray:
        """Principal-value rows for targets on their own panel."""
        rule = self.rule
        sigma, omega, diff = rule.nodes, rule.weights, rule.diff
        n = rule.order
        gap = sigma[None, :] - sigma[:, None]
        np.fill_diagonal(gap, 1.0)
        rows = omega[None, :] / gap + omega[:, None] * diff
        off = omega[None, :] / gap
        np.fill_diagonal(off, 0.0)
        rows[np.arange(n), np.arange(n)] = (-off.sum(axis=1) + omega * np.diag(diff)
                                            + np.log((1 - sigma) / (1 + sigma)))
        return rows.astype(complex)

    def _assemble_pv(self) -> np.ndarray:
        contour = self.contour
        z = contour.points
        size = contour.size
        pv = np.empty((size, size), dtype=complex)
        self_rows = self._self_rows()
        for panel in contour.panels:
            cols = slice(panel.start, panel.stop)
            tau = (z - panel.center) / panel.half
            own = np.zeros(size, dtype=bool)
            own[cols] = True
            pv[~own, cols] = self._panel_rows(panel, tau[~own])
            pv[cols, cols] = self_rows
        return pv / TWO_PI_I

    # ------------------------------------------------------------------
    # boundary values

    @property
    def size(self) -> int:
        return self.contour.size

    def matrix(self, side: int) -> np.ndarray:
        """Dense C₊ (side=+1) or C₋ (side=-1)."""
        return self._pv + 0.5 * side * np.eye(self.size)

    def _apply(self, values: np.ndarray, side: int) -> np.ndarray:
        values = np.asarray(values)
        if values.shape[0] != self.size:
            raise CauchyError(f"场长度 {values.shape[0]} 与围道节点数 {self.size} 不一致")
        return np.tensordot(self._pv, values, axes=(1, 0)) + 0.5 * side * values

    def plus(self, values: np.ndarray) -> np.ndarray:
        return self._apply(values, +1)

    def minus(self, values: np.ndarray) -> np.ndarray:
        return self._apply(values, -1)

    def adjoint(self, values: np.ndarray, side: int) -> np.ndarray:
        """Conjugate transpose of C₊ or C₋ in the unweighted inner product."""
        values = np.asarray(values)
        return np.tensordot(self._pv.conj().T, values, axes=(1, 0)) + 0.5 * side * values

    def adjoint_plus(self, values: np.ndarray) -> np.ndarray:
        return self.adjoint(values, +1)

    def adjoint_minus(self, values: np.ndarray) -> np.ndarray:
        return self.adjoint(values, -1)

    def hilbert(self, values: np.ndarray) -> np.ndarray:
        """H = -i(C₊ + C₋) = (1/π) PV∫ f(s)/(x-s) ds."""
        return -1j * (self.plus(values) + self.minus(values))

    # ------------------------------------------------------------------
    # off-contour values

    def eval_rows(self, z, near_ok: bool = False) -> np.ndarray:
        """Rows r with (Cf)(z) = Σ_k r_k f_k for each target z."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        dist = self.contour.distances(z)
        if near_ok:
            limit = 1e-14 * np.maximum(1.0, np.abs(z))
        else:
            nearest = np.argmin(np.abs(self.contour.points[None, :] - z[:, None]), axis=1)
            limit = self.contour.local_spacing()[nearest]
        bad = np.nonzero(dist <= limit)[0]
        if bad.size:
            i = int(bad[0])
            logger.error(f"目标点 {z[i]} 距围道 {dist[i]:.3e} ≤ 局部节点间距 {limit[i]:.3e}")
            raise CauchyError(f"目标点 {z[i]} 离围道太近 (距离 {dist[i]:.3e})")
        rows = np.empty((z.shape[0], self.size), dtype=complex)
        for panel in self.contour.panels:
            tau = (z - panel.center) / panel.half
            rows[:, panel.start:panel.stop] = self._panel_rows(panel, tau)
        return rows / TWO_PI_I

    def evaluate(self, values: np.ndarray, z, near_ok: bool = False) -> np.ndarray:
        """(1/2πi)∫ f(s)/(s-z) ds at one or many points z."""
        rows = self.eval_rows(z, near_ok=near_ok)
        out = np.tensordot(rows, np.asarray(values), axes=(1, 0))
        return out[0] if np.ndim(z) == 0 else out

    # ------------------------------------------------------------------
    # boundary values between nodes

    def interpolate(self, values: np.ndarray, panel_idx: np.ndarray, taus: np.ndarray) -> np.ndarray:
        """Panel interpolant of nodal values at reference points τ of the given panels."""
        values = np.asarray(values)
        panel_idx = np.asarray(panel_idx, dtype=int)
        ell = self.rule.interpolation_matrix(np.asarray(taus, dtype=complex))
        n = self.rule.order
        cols = panel_idx[:, None] * n + np.arange(n)[None, :]
        gathered = values[cols]
        return np.einsum('kn,kn...->k...', ell, gathered)

    def boundary_rows(self, panel_idx: np.ndarray, taus: np.ndarray, side: int) -> np.ndarray:
        """Rows r with (C±f)(z) = Σ_k r_k f_k at the points τ of the given panels.

        τ must lie strictly inside (-1, 1); the own panel uses the principal value
        of the interpolant, the others the ordinary panel rows.
        """
        panel_idx = np.asarray(panel_idx, dtype=int)
        taus = np.asarray(taus, dtype=float)
        if np.any(np.abs(taus) >= 1):
            raise CauchyError("边界检验点必须位于面板内部")
        panels = self.contour.panels
        z = np.array([panels[i].center + panels[i].half * t for i, t in zip(panel_idx, taus)],
                     dtype=complex)
        rule = self.rule
        sigma, omega, n = rule.nodes, rule.weights, rule.order
        rows = np.empty((z.shape[0], self.size), dtype=complex)
        for j, panel in enumerate(panels):
            own = panel_idx == j
            others = ~own
            if np.any(others):
                tau = (z[others] - panel.center) / panel.half
                rows[others, panel.start:panel.stop] = self._panel_rows(panel, tau)
            if np.any(own):
                t = taus[own].astype(complex)
                kern = omega[None, :] / (sigma[None, :] - t[:, None])
                ell = rule.interpolation_matrix(t)
                pv = (kern - ell * kern.sum(axis=1, keepdims=True)
                      + ell * np.log((1 - t) / (1 + t))[:, None])
                rows[own, panel.start:panel.stop] = pv
        rows /= TWO_PI_I
        ell = rule.interpolation_matrix(taus.astype(complex))
        for k, i in enumerate(panel_idx):
            rows[k, i * n:(i + 1) * n] += 0.5 * side * ell[k]
        return rows

    def boundary_values(self, values: np.ndarray, panel_idx: np.ndarray, taus: np.ndarray,
                        side: int) -> np.ndarray:
        """C₊ (side=+1) or C₋ (side=-1) of nodal values at off-node panel points."""
        rows = self.boundary_rows(panel_idx, taus, side)
        return np.tensordot(rows, np.asarray(values), axes=(1, 0))


@lru_cache(maxsize=4)
def operator_for(contour) -> CauchyOperator:
    """Shared operator per contour object."""
    return CauchyOperator(contour)


def side_matrices(contour, cauchy: Optional[CauchyOperator] = None):
    cauchy = cauchy or operator_for(contour)
    return cauchy.matrix(+1), cauchy.matrix(-1)
