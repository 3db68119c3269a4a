#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
跳跃矩阵与权重分解测试
"""

import math
import unittest

import numpy as np

# 添加src目录到Python路径
import sys
from pathlib import Path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from src.contour import build_gamma_contour, build_real_grid, mat2
from src.delta import Envelope, ReflectionPair, solve_scalar_rhp
from src.factorization import (
    LocalModel, build_jump, canonical_factorization, conjugated_factorization, cutoff,
    build_lens_for, check_lens_poles, core_radii, deform_to_gamma, factorization_residual,
    gamma_weights, interval_regions, is_strictly_triangular, lens_angle, lens_weights, local_model,
    localize, model_weights, phase_reduce, premodel_weights, smoothstep, zero_weights
)
from src.phase import mkdv_phase, nls_phase, sign_partition
from src.solver import solve_mu
from src.utils.errors import ContourError, FactorizationError


def setup_case(theta, amplitude=0.4, L=8.0):
    grid = build_real_grid(L, 16, theta.stationary_locations, panel_width=0.5)
    part = sign_partition(theta, grid)
    pair = ReflectionPair.defocusing(Envelope.gaussian(amplitude))
    delta = solve_scalar_rhp(pair, part, grid, theta)
    return grid, pair, delta


class TestJumpMatrix(unittest.TestCase):
    """测试跳跃矩阵与两种分解"""

    @classmethod
    def setUpClass(cls):
        """NLS 散焦情形，t = 5"""
        cls.theta = nls_phase()
        cls.grid, cls.pair, cls.delta = setup_case(cls.theta)
        cls.J = build_jump(cls.pair, cls.theta, 5.0, cls.grid)

    def test_unit_determinant(self):
        """测试 det J = 1"""
        self.assertLess(self.J.det_deviation(), 1e-14)

    def test_non_positive_time(self):
        """测试 t ≤ 0 被拒绝"""
        with self.assertRaises(FactorizationError):
            build_jump(self.pair, self.theta, 0.0, self.grid)

    def test_canonical(self):
        """测试标准分解重现 J"""
        w = canonical_factorization(self.J)
        self.assertEqual(w.tag, 'canonical')
        self.assertFalse(w.phase_weight)
        self.assertTrue(is_strictly_triangular(w))
        self.assertLess(factorization_residual(w), 1e-13)
        np.testing.assert_array_equal(w.w_minus[:, 1, 0], 0.0)
        np.testing.assert_array_equal(w.w_plus[:, 0, 1], 0.0)

    def test_conjugated(self):
        """测试共轭分解：D₋ 上三角方向互换"""
        w = conjugated_factorization(self.J, self.delta)
        self.assertTrue(w.phase_weight)
        self.assertTrue(is_strictly_triangular(w))
        self.assertLess(factorization_residual(w), 1e-10)
        minus = self.delta.partition.minus
        np.testing.assert_array_equal(w.w_minus[minus, 0, 1], 0.0)
        np.testing.assert_array_equal(w.w_minus[~minus, 1, 0], 0.0)

    def test_conjugated_modulus(self):
        """测试 D₋ 上 |w⁺| = |p|"""
        w = conjugated_factorization(self.J, self.delta)
        minus = self.delta.partition.minus
        x = self.grid.nodes[minus]
        np.testing.assert_allclose(np.abs(w.w_plus[minus, 0, 1]), np.abs(self.pair.p(x)), atol=1e-8)

    def test_conjugated_grid_mismatch(self):
        """测试 δ 与跳跃矩阵网格不一致"""
        other = build_real_grid(6.0, 16, [0.0])
        J = build_jump(self.pair, self.theta, 5.0, other)
        with self.assertRaises(FactorizationError):
            conjugated_factorization(J, self.delta)

    def test_zero_weights(self):
        """测试零权重重现单位跳跃"""
        w = zero_weights(self.grid)
        self.assertEqual(w.sup_norm(), 0.0)
        self.assertEqual(factorization_residual(w), 0.0)
        with self.assertRaises(FactorizationError):
            type(w)(self.grid, w.w_minus[:3], w.w_plus, 'custom')
        with self.assertRaises(FactorizationError):
            type(w)(self.grid, w.w_minus, w.w_plus, 'unknown')


class TestLocalization(unittest.TestCase):
    """测试截断与相位约化"""

    def test_smoothstep(self):
        """测试平滑阶跃的端点与中点"""
        np.testing.assert_allclose(smoothstep(np.array([-1.0, 0.0, 0.5, 1.0, 2.0])),
                                   [0.0, 0.0, 0.5, 1.0, 1.0], atol=1e-15)

    def test_cutoff(self):
        """测试截断函数"""
        x = np.array([0.0, 0.2, 0.75, 1.0, 3.0])
        phi = cutoff(x, [0.0], 1.0)
        np.testing.assert_allclose(phi[[0, 1]], 1.0)
        self.assertTrue(0.0 < phi[2] < 1.0)
        np.testing.assert_allclose(phi[[3, 4]], 0.0)
        np.testing.assert_array_equal(cutoff(x, [], 1.0), 0.0)

    def test_localize_nls(self):
        """测试局部化权重的支撑"""
        theta = nls_phase()
        grid, pair, delta = setup_case(theta)
        w = conjugated_factorization(build_jump(pair, theta, 5.0, grid), delta)
        local = localize(w, 0.5)
        self.assertEqual(local.tag, 'localized')
        self.assertEqual(local.j, 0)
        far = np.abs(grid.nodes) >= 0.5
        near = np.abs(grid.nodes) <= 0.25
        np.testing.assert_array_equal(local.total[far], 0.0)
        np.testing.assert_allclose(local.total[near], w.total[near])
        self.assertLess(factorization_residual(local), 1e-13)
        with self.assertRaises(FactorizationError):
            localize(canonical_factorization(build_jump(pair, theta, 5.0, grid)), 0.5)
        with self.assertRaises(FactorizationError):
            localize(w, 0.0)

    def test_localize_overlap(self):
        """测试截断半径覆盖两个驻点时报错"""
        theta = mkdv_phase(1.0)
        grid, pair, delta = setup_case(theta, amplitude=0.3)
        w = conjugated_factorization(build_jump(pair, theta, 5.0, grid), delta)
        with self.assertRaises(FactorizationError):
            localize(w, 1.5)
        single = localize(w, 0.5, [1])
        self.assertEqual(single.j, 1)
        left = grid.nodes < 0
        np.testing.assert_array_equal(single.total[left], 0.0)

    def test_phase_reduce(self):
        """测试 Taylor 约化保持分解残差"""
        theta = mkdv_phase(1.0)
        grid, pair, delta = setup_case(theta, amplitude=0.3)
        w = conjugated_factorization(build_jump(pair, theta, 5.0, grid), delta)
        reduced = phase_reduce(localize(w, 0.5, [1]), 1)
        self.assertEqual(reduced.tag, 'phase-reduced')
        self.assertIsNotNone(reduced.phase.monomial)
        self.assertLess(factorization_residual(reduced), 1e-10)
        # 单项式相位的约化不改变权重
        nls = nls_phase()
        g2, p2, d2 = setup_case(nls)
        local = localize(conjugated_factorization(build_jump(p2, nls, 5.0, g2), d2), 0.5)
        np.testing.assert_allclose(phase_reduce(local, 0).total, local.total, atol=1e-13)
        with self.assertRaises(FactorizationError):
            phase_reduce(zero_weights(grid), 0)


class TestModelWeights(unittest.TestCase):
    """测试模型、预模型权重与 Γ 形变"""

    @classmethod
    def setUpClass(cls):
        """NLS 散焦情形，t = 10"""
        cls.theta = nls_phase()
        cls.grid, cls.pair, cls.delta = setup_case(cls.theta)
        cls.omega = cls.delta.record(0).omega
        w = conjugated_factorization(build_jump(cls.pair, cls.theta, 10.0, cls.grid), cls.delta)
        cls.local = localize(w, 0.5, [0])

    def test_local_model_case(self):
        """测试模型的符号区域与端点情形"""
        model = local_model(self.theta, 0, self.pair, self.omega, 10.0)
        self.assertEqual(model.case, 'right-endpoint')
        self.assertEqual(model.eps, 1)
        self.assertAlmostEqual(model.nu, self.pair.nu(0.0), places=14)
        cubic = LocalModel(0.0, 2, 0.0, 1.0, 0.4, -0.4, 0.0, 1.0)
        self.assertEqual(cubic.case, 'exterior')
        self.assertEqual(LocalModel(0.0, 2, 0.0, -1.0, 0.4, -0.4, 0.0, 1.0).case, 'interior')
        self.assertEqual(LocalModel(0.0, 1, 0.0, -1.0, 0.4, -0.4, 0.0, 1.0).case, 'left-endpoint')

    def test_invalid_model(self):
        """测试 1 + p0 q0 ≤ 0 与 b = 0"""
        with self.assertRaises(FactorizationError):
            LocalModel(0.0, 1, 0.0, 1.0, 1.5, -1.5, 0.0, 1.0)
        with self.assertRaises(FactorizationError):
            LocalModel(0.0, 1, 0.0, 0.0, 0.4, -0.4, 0.0, 1.0)

    def test_model_reproduces_model_jump(self):
        """测试模型权重重现 δ_j 共轭后的模型跳跃"""
        w = model_weights(0, 10.0, self.grid, self.omega, self.theta, self.pair)
        self.assertEqual(w.tag, 'model')
        self.assertTrue(is_strictly_triangular(w))
        self.assertLess(factorization_residual(w), 1e-10)

    def test_premodel(self):
        """测试预模型权重"""
        pre = premodel_weights(self.local, 8)
        self.assertEqual(pre.tag, 'pre-model')
        self.assertEqual(pre.model.n_decay, 8)
        # 远离驻点时包络按 |x|^{-8} 衰减
        far = np.abs(self.grid.nodes) > 7.0
        self.assertLess(float(mat2.frobenius_abs(pre.total[far]).max()), 1e-6)
        with self.assertRaises(FactorizationError):
            premodel_weights(self.local, 0)
        with self.assertRaises(FactorizationError):
            premodel_weights(zero_weights(self.grid), 8)

    def test_deform_to_gamma(self):
        """测试预模型权重延拓到 Γ：水平射线为空，斜射线指数衰减"""
        pre = premodel_weights(self.local, 8)
        gamma = build_gamma_contour(math.pi / 30, 4.0, 64, 16, origin=0.0, n_decay=8)
        w = deform_to_gamma(pre, gamma)
        self.assertEqual(w.tag, 'gamma-deformed')
        self.assertTrue(is_strictly_triangular(w))
        r = gamma.radius()
        for ray in gamma.rays:
            block = mat2.frobenius_abs(w.total[ray.slice])
            if ray.name in ('G0', 'G3'):
                np.testing.assert_array_equal(block, 0.0)
            else:
                self.assertGreater(block.max(), 0.0)
                radius = r[ray.slice]
                self.assertLess(block[radius > 3.0].max(), block[radius < 0.5].max())

    def test_solution_ignores_empty_rays(self):
        """测试去掉不带权重的 Γ₀、Γ₃ 后解不变"""
        pre = premodel_weights(self.local, 8)
        gamma = build_gamma_contour(math.pi / 30, 4.0, 64, 16, origin=0.0, n_decay=8)
        full = solve_mu(deform_to_gamma(pre, gamma), condition=False)
        sub = gamma.subset(('G1', 'G2', 'G4', 'G5'))
        part = solve_mu(gamma_weights(pre.model, sub, j=0, pair=self.pair), condition=False)
        self.assertAlmostEqual(part.u, full.u, delta=1e-12 * max(1.0, abs(full.u)))
        self.assertAlmostEqual(part.v, full.v, delta=1e-12 * max(1.0, abs(full.v)))
        np.testing.assert_allclose(full.mu[sub.embedding(gamma)], part.mu, atol=1e-10)

    def test_deform_rejections(self):
        """测试非模型权重与原点不匹配"""
        gamma = build_gamma_contour(math.pi / 30, 4.0, 64, 16, origin=1.0, n_decay=8)
        with self.assertRaises(FactorizationError):
            deform_to_gamma(self.local, gamma)
        with self.assertRaises(FactorizationError):
            deform_to_gamma(premodel_weights(self.local, 8), gamma)


class TestLensWeights(unittest.TestCase):
    """测试透镜形变后的权重"""

    @classmethod
    def setUpClass(cls):
        """NLS 散焦情形，t = 4"""
        cls.theta = nls_phase()
        cls.grid, cls.pair, cls.delta = setup_case(cls.theta)
        cls.lens = build_lens_for(cls.pair, cls.theta, 4.0)
        cls.w = lens_weights(cls.delta, 4.0, cls.lens)

    def test_angle_and_regions(self):
        """测试透镜角度与 θ' 的符号区间"""
        self.assertAlmostEqual(lens_angle(self.theta), math.pi / 6)
        self.assertEqual(interval_regions(self.theta), (-1, 1))
        self.assertEqual(interval_regions(mkdv_phase()), (1, -1, 1))
        radii = core_radii(mkdv_phase(), 100.0)
        self.assertEqual(len(radii), 2)
        self.assertTrue(all(0 < r <= 0.5 for r in radii))
        self.assertGreater(core_radii(self.theta, 1.0)[0], core_radii(self.theta, 100.0)[0])

    def test_weights(self):
        """测试各分支上的权重：透镜上单边三角、有界，核心上为标准分解"""
        self.assertEqual(self.w.tag, 'lens-deformed')
        self.assertEqual(self.w.size, self.lens.size)
        self.assertTrue(np.all(np.isfinite(self.w.w_minus)))
        self.assertTrue(np.all(np.isfinite(self.w.w_plus)))
        for piece in self.lens.pieces:
            if piece.kind != 'lens':
                continue
            plus = mat2.frobenius_abs(self.w.w_plus[piece.slice])
            minus = mat2.frobenius_abs(self.w.w_minus[piece.slice])
            if piece.side > 0:
                np.testing.assert_array_equal(minus, 0.0)
            else:
                np.testing.assert_array_equal(plus, 0.0)
            self.assertLess(max(plus.max(), minus.max()), 2.0)
        core = self.lens.piece('S0').slice
        np.testing.assert_allclose(self.w.w_minus[core][:, 1, 0], 0.0)
        np.testing.assert_allclose(self.w.w_plus[core][:, 0, 1], 0.0)

    def test_lens_solution(self):
        """测试透镜上的解：det μ ≈ 1，跳跃残差小"""
        sol = solve_mu(self.w, condition=False)
        self.assertEqual(sol.diagnostics['route'], 'direct')
        self.assertLess(sol.diagnostics['det_deviation'], 1e-8)
        self.assertLess(sol.diagnostics['jump_residual'], 1e-7)
        self.assertAlmostEqual(sol.v, np.conj(sol.u), delta=1e-9)

    def test_rejections(self):
        """测试非法 t、非透镜围道与 1+pq 的零点"""
        with self.assertRaises(FactorizationError):
            lens_weights(self.delta, 0.0, self.lens)
        with self.assertRaises(ContourError):
            lens_weights(self.delta, 4.0, self.grid)
        self.assertEqual(check_lens_poles(self.pair, np.zeros(0, dtype=complex)), float('inf'))
        self.assertGreaterEqual(check_lens_poles(self.pair, np.array([0.5 + 0.1j])), 0.05)
        near_pole = ReflectionPair.defocusing(Envelope.gaussian(0.99))
        with self.assertRaises(FactorizationError):
            check_lens_poles(near_pole, np.array([0.1 + 0.05j]))


if __name__ == '__main__':
    unittest.main()
