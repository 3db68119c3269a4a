#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Cauchy 变换模块测试
"""

import math
import unittest

import numpy as np
from scipy import integrate
from scipy.special import dawsn, wofz

# 添加src目录到Python路径
import sys
from pathlib import Path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from src.cauchy import (
    FourierCauchy, UniformGrid, backend_for, bernstein_radius, cauchy_eval, cauchy_minus,
    cauchy_plus, coefficient_at_infinity, hilbert, lp_norm, operator_for
)
from src.contour import MatrixField, build_gamma_contour, build_real_grid, mat2
from src.utils.errors import CauchyError


def gaussian_field(grid):
    return MatrixField(grid, mat2.identity(grid.size) * np.exp(-grid.nodes ** 2)[:, None, None])


class TestPanelCauchy(unittest.TestCase):
    """测试面板法 Cauchy 算子"""

    @classmethod
    def setUpClass(cls):
        """构建共享网格"""
        cls.grid = build_real_grid(10.0, 16, [0.0], panel_width=0.5)
        cls.op = operator_for(cls.grid)
        cls.f = np.exp(-cls.grid.nodes ** 2)

    def test_plemelj_jump(self):
        """测试 C₊ - C₋ = I"""
        np.testing.assert_allclose(self.op.plus(self.f) - self.op.minus(self.f), self.f, atol=1e-14)

    def test_gaussian_boundary_value(self):
        """测试高斯函数的边界值 C₊f = w(x)/2"""
        np.testing.assert_allclose(self.op.plus(self.f), 0.5 * wofz(self.grid.nodes), atol=1e-8)

    def test_off_contour_evaluation(self):
        """测试上半平面的求值"""
        z = np.array([0.3 + 0.7j, -1.2 + 0.2j])
        np.testing.assert_allclose(self.op.evaluate(self.f, z), 0.5 * wofz(z), atol=1e-10)
        scalar = self.op.evaluate(self.f, 0.3 + 0.7j)
        self.assertAlmostEqual(complex(scalar), complex(0.5 * wofz(0.3 + 0.7j)), places=10)

    def test_near_contour_refused(self):
        """测试离围道太近的点被拒绝"""
        with self.assertRaises(CauchyError):
            self.op.evaluate(self.f, 0.3 + 1e-6j)
        value = self.op.evaluate(self.f, 0.3 + 1e-6j, near_ok=True)
        self.assertTrue(np.isfinite(value))

    def test_bernstein_radius_branch(self):
        """测试负实轴两侧的 τ 给出同一个 ρ ≥ 1"""
        tau = np.array([complex(-2.0, -0.0), complex(-2.0, 0.0), 2.0 + 0j])
        np.testing.assert_allclose(bernstein_radius(tau), 2.0 + math.sqrt(3.0), rtol=1e-14)
        self.assertTrue(np.all(bernstein_radius(np.array([0.5 + 0.5j, -0.5 - 0.5j])) >= 1.0))

    def test_collinear_target(self):
        """测试与实轴共线、位于网格外的目标点"""
        z = np.array([complex(-12.0, -0.0), complex(12.0, 0.0)])
        values = self.op.evaluate(self.f, z)
        self.assertTrue(np.all(np.isfinite(values)))
        for target, value in zip(z.real, values):
            ref, _ = integrate.quad(lambda s: math.exp(-s * s) / (s - target), -10.0, 10.0,
                                    epsabs=1e-14, limit=200)
            self.assertAlmostEqual(complex(value), ref / (2j * math.pi), places=10)

    def test_boundary_values_between_nodes(self):
        """测试面板内部非节点处的边界值 C₊f = w(x)/2"""
        idx, tau, z = self.grid.check_points()
        self.assertGreater(idx.size, 0)
        plus = self.op.boundary_values(self.f, idx, tau, +1)
        minus = self.op.boundary_values(self.f, idx, tau, -1)
        np.testing.assert_allclose(plus, 0.5 * wofz(z.real), atol=1e-8)
        np.testing.assert_allclose(plus - minus, np.exp(-z.real ** 2), atol=1e-12)

    def test_interpolate(self):
        """测试面板插值"""
        idx, tau, z = self.grid.check_points()
        values = self.op.interpolate(self.f, idx, tau)
        np.testing.assert_allclose(values, np.exp(-z.real ** 2), atol=1e-12)
        matrices = self.op.interpolate(mat2.identity(self.grid.size) * self.f[:, None, None], idx, tau)
        self.assertEqual(matrices.shape, (idx.size, 2, 2))

    def test_boundary_rows_reject_endpoints(self):
        """测试检验点不能落在面板端点"""
        with self.assertRaises(CauchyError):
            self.op.boundary_rows(np.array([0]), np.array([1.0]), +1)

    def test_hilbert_transform(self):
        """测试高斯函数的 Hilbert 变换 (2/√π) Dawson(x)"""
        field = MatrixField(self.grid, mat2.identity(self.grid.size) * self.f[:, None, None])
        h = hilbert(field).values[:, 0, 0]
        np.testing.assert_allclose(h, 2.0 / math.sqrt(math.pi) * dawsn(self.grid.nodes), atol=1e-8)

    def test_adjoint(self):
        """测试伴随算子满足 <C f, g> = <f, C* g>"""
        rng = np.random.default_rng(1)
        n = self.grid.size
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        self.assertAlmostEqual(np.vdot(self.op.plus(f), g), np.vdot(f, self.op.adjoint_plus(g)), places=9)
        self.assertAlmostEqual(np.vdot(self.op.minus(f), g), np.vdot(f, self.op.adjoint_minus(g)), places=9)

    def test_matrix_field_wrappers(self):
        """测试矩阵场封装与无穷远系数"""
        field = gaussian_field(self.grid)
        plus = cauchy_plus(field)
        minus = cauchy_minus(field)
        np.testing.assert_allclose(plus.values - minus.values, field.values, atol=1e-14)
        coef = coefficient_at_infinity(field)
        np.testing.assert_allclose(coef, -math.sqrt(math.pi) / (2j * math.pi) * np.eye(2), atol=1e-12)
        values = cauchy_eval(field, [0.5 + 1.0j])
        self.assertEqual(values.shape, (1, 2, 2))

    def test_operator_contour_mismatch(self):
        """测试算子与矩阵场不在同一围道"""
        other = build_real_grid(5.0, 16, [])
        with self.assertRaises(CauchyError):
            cauchy_plus(gaussian_field(self.grid), operator=operator_for(other))
        with self.assertRaises(CauchyError):
            self.op.plus(np.zeros(3))

    def test_hilbert_requires_real_line(self):
        """测试 Hilbert 变换只在实轴上定义"""
        gamma = build_gamma_contour(math.pi / 12, 3.0, 16, 16)
        with self.assertRaises(CauchyError):
            hilbert(MatrixField.zeros(gamma))

    def test_ray_contour_jump(self):
        """测试射线围道上的跳跃关系"""
        gamma = build_gamma_contour(math.pi / 12, 3.0, 32, 16)
        op = backend_for(gamma)
        f = np.exp(-np.abs(gamma.points) ** 2)
        np.testing.assert_allclose(op.plus(f) - op.minus(f), f, atol=1e-14)


class TestFourierCauchy(unittest.TestCase):
    """测试 Fourier 乘子投影"""

    def setUp(self):
        """测试前准备"""
        self.grid = UniformGrid(0.0, 2 * math.pi / 64, 64)
        self.op = FourierCauchy(self.grid)
        self.x = self.grid.points

    def test_positive_frequency(self):
        """测试正频率只进入 C₊"""
        f = np.exp(3j * self.x)
        np.testing.assert_allclose(self.op.plus(f), f, atol=1e-12)
        np.testing.assert_allclose(self.op.minus(f), 0.0, atol=1e-12)

    def test_negative_frequency(self):
        """测试负频率只进入 C₋"""
        f = np.exp(-2j * self.x)
        np.testing.assert_allclose(self.op.plus(f), 0.0, atol=1e-12)
        np.testing.assert_allclose(self.op.minus(f), -f, atol=1e-12)

    def test_mean_mode_split(self):
        """测试零频率均分"""
        f = np.ones(self.grid.size)
        np.testing.assert_allclose(self.op.plus(f), 0.5, atol=1e-12)
        np.testing.assert_allclose(self.op.minus(f), -0.5, atol=1e-12)

    def test_matrix_valued(self):
        """测试矩阵场按节点投影"""
        f = mat2.upper(np.exp(1j * self.x))
        out = self.op.plus(f)
        self.assertEqual(out.shape, (64, 2, 2))
        np.testing.assert_allclose(out, f, atol=1e-12)

    def test_backend_selection(self):
        """测试后端选择"""
        self.assertIsInstance(backend_for(self.grid), FourierCauchy)
        with self.assertRaises(CauchyError):
            backend_for(object())
        with self.assertRaises(CauchyError):
            FourierCauchy(build_real_grid(2.0, 8, []))

    def test_lp_norm(self):
        """测试离散 Lp 范数"""
        ones = np.ones(self.grid.size)
        self.assertAlmostEqual(lp_norm(ones, self.grid.dx, 2.0), math.sqrt(2 * math.pi))
        self.assertAlmostEqual(lp_norm(3 * ones, self.grid.dx, np.inf), 3.0)
        field = mat2.upper(ones * 2.0)
        self.assertAlmostEqual(lp_norm(field, self.grid.dx, 1.0), 4 * math.pi)


if __name__ == '__main__':
    unittest.main()
