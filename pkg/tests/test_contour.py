#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
围道模块测试
"""

import math
import unittest

import numpy as np

# 添加src目录到Python路径
import sys
from pathlib import Path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from src.contour import (
    MatrixField, build_gamma_contour, build_lens_contour, build_real_grid, classify_sector,
    hexagon_vertices, reference_rule, split_segment
)
from src.contour import mat2
from src.contour.panels import GRADING_RATIO, grading_cuts
from src.utils.errors import ContourError, SingularMatrixError


class TestMat2(unittest.TestCase):
    """测试 2×2 矩阵代数"""

    def test_inverse_and_det(self):
        """测试闭式逆矩阵"""
        a = np.array([[[2, 1], [1, 1]], [[1, 2j], [0, 3]]], dtype=complex)
        inv = mat2.inverse(a)
        np.testing.assert_allclose(np.matmul(a, inv), mat2.identity(2), atol=1e-14)
        np.testing.assert_allclose(mat2.det(a), [1.0, 3.0])

    def test_singular_raises(self):
        """测试奇异矩阵"""
        with self.assertRaises(SingularMatrixError):
            mat2.inverse(np.array([[1, 2], [2, 4]], dtype=complex))

    def test_triangular_builders(self):
        """测试上、下三角场与 d^σ3"""
        up = mat2.upper([1.0, 2.0])
        low = mat2.lower([3.0])
        self.assertEqual(up.shape, (2, 2, 2))
        self.assertEqual(up[1, 0, 1], 2.0)
        self.assertEqual(low[0, 1, 0], 3.0)
        np.testing.assert_allclose(np.matmul(up, up), 0.0)
        d = mat2.diag_power(np.array([2.0]), -1)
        np.testing.assert_allclose(d[0], np.diag([0.5, 2.0]))

    def test_frobenius_and_off_diagonal(self):
        """测试 Frobenius 模与非对角部分"""
        a = np.array([[3, 4j], [0, 0]], dtype=complex)
        self.assertAlmostEqual(float(mat2.frobenius_abs(a)), 5.0)
        np.testing.assert_allclose(mat2.off_diagonal(a), [[0, 4j], [0, 0]])


class TestReferenceRule(unittest.TestCase):
    """测试参考面板求积"""

    def test_weights_integrate_polynomials(self):
        """测试两个节点族都精确积分低次多项式"""
        for family in ('chebyshev', 'legendre'):
            rule = reference_rule(16, family)
            self.assertAlmostEqual(rule.weights.sum(), 2.0, places=13)
            self.assertAlmostEqual(float(rule.weights @ rule.nodes ** 2), 2.0 / 3.0, places=13)
            self.assertTrue(np.all(np.diff(rule.nodes) > 0))

    def test_unknown_family(self):
        """测试未知节点族"""
        with self.assertRaises(ContourError):
            reference_rule(8, 'trapezoid')

    def test_interpolation_reproduces_polynomials(self):
        """测试重心插值"""
        rule = reference_rule(12)
        targets = np.array([-0.93, 0.1 + 0.2j, 0.77])
        rows = rule.interpolation_matrix(targets)
        f = lambda x: x ** 5 - 2 * x + 1
        np.testing.assert_allclose(rows @ f(rule.nodes), f(targets), atol=1e-12)

    def test_differentiation_matrix(self):
        """测试微分矩阵"""
        rule = reference_rule(10, 'legendre')
        x = rule.nodes
        np.testing.assert_allclose(rule.diff @ x ** 3, 3 * x ** 2, atol=1e-11)


class TestRealGrid(unittest.TestCase):
    """测试实轴网格"""

    def setUp(self):
        """测试前准备"""
        self.grid = build_real_grid(10.0, 16, [0.0], panel_width=0.5)

    def test_weights_and_order(self):
        """测试节点严格递增、权重为正且总和为 2L"""
        self.assertTrue(np.all(np.diff(self.grid.nodes) > 0))
        self.assertTrue(np.all(self.grid.weights > 0))
        self.assertAlmostEqual(self.grid.weights.sum(), 20.0, places=12)
        self.assertEqual(self.grid.size % 16, 0)

    def test_stationary_point_is_breakpoint(self):
        """测试驻点为断点且不是节点"""
        self.assertIn(0.0, self.grid.breakpoints)
        self.assertGreater(np.min(np.abs(self.grid.nodes)), 0.0)

    def test_grading_toward_stationary_point(self):
        """测试驻点两侧的几何加密"""
        touching = [p.length for p in self.grid.panels if min(abs(p.a), abs(p.b)) < 1e-15]
        self.assertEqual(len(touching), 2)
        for length in touching:
            self.assertAlmostEqual(length, 0.5 * GRADING_RATIO ** -21, delta=1e-14)
        left = sorted((p for p in self.grid.panels if -0.4 < p.a.real < -1e-6),
                      key=lambda p: p.a.real)
        ratios = [a.length / b.length for a, b in zip(left[:-1], left[1:])]
        self.assertGreater(len(ratios), 5)
        np.testing.assert_allclose(ratios, GRADING_RATIO, rtol=1e-6)
        self.assertLessEqual(max(p.length for p in self.grid.panels), 0.5 + 1e-12)

    def test_grading_cuts(self):
        """测试几何加密的切点"""
        cuts = grading_cuts(1.0)
        self.assertEqual(cuts.size, 22)
        self.assertLessEqual(cuts[0], 1e-10)
        self.assertEqual(cuts[-1], 1.0)
        np.testing.assert_allclose(cuts[1:] / cuts[:-1], GRADING_RATIO)

    def test_split_segment_width(self):
        """测试按局部宽度切分线段"""
        equal = split_segment(0.0, 1.0, 0.5)
        self.assertEqual(len(equal), 2)
        narrow = split_segment(0.0, 1.0, 0.5, width=lambda z: np.where(np.real(z) < 0.5, 0.1, 1.0))
        lengths = [abs(b - a) for a, b in narrow]
        self.assertAlmostEqual(sum(lengths), 1.0, places=14)
        self.assertLessEqual(max(lengths[:4]), 0.1 + 1e-12)
        self.assertLessEqual(max(lengths), 0.5 + 1e-12)
        both = split_segment(0.0, 2.0, 1.0, grade_start=True, grade_end=True)
        self.assertEqual(len(both), 2 * 22)
        with self.assertRaises(ContourError):
            split_segment(1.0, 1.0, 0.5)
        with self.assertRaises(ContourError):
            split_segment(0.0, 1.0, 0.5, width=lambda z: np.zeros(np.shape(z)))

    def test_oscillation_width_grid(self):
        """测试按振荡宽度加密的网格更细，超过上限时报错"""
        def width(x):
            return np.full(np.shape(x), 0.05)

        fine = build_real_grid(10.0, 16, [0.0], panel_width=0.5, width=width)
        self.assertGreater(fine.size, self.grid.size)
        self.assertLessEqual(max(p.length for p in fine.panels), 1.25 * 0.05)
        with self.assertRaises(ContourError):
            build_real_grid(10.0, 16, [0.0], panel_width=0.5, width=width, max_nodes=1000)

    def test_refined(self):
        """测试二分加密后节点数翻倍、积分不变"""
        fine = self.grid.refined()
        self.assertEqual(fine.size, 2 * self.grid.size)
        self.assertEqual(len(fine.panels), 2 * len(self.grid.panels))
        self.assertAlmostEqual(fine.weights.sum(), 20.0, places=12)

    def test_check_points_avoid_singular_panels(self):
        """测试检验点不落在靠近驻点的面板内"""
        idx, tau, z = self.grid.check_points()
        self.assertEqual(idx.size, tau.size)
        self.assertTrue(np.all(np.abs(tau) < 1))
        lengths = np.array([self.grid.panels[i].length for i in idx])
        self.assertTrue(np.all(np.abs(z) >= lengths * (1 - 1e-9)))

    def test_gaussian_quadrature(self):
        """测试高斯函数积分"""
        value = self.grid.integrate(np.exp(-self.grid.nodes ** 2))
        self.assertAlmostEqual(float(np.real(value)), math.sqrt(math.pi), places=12)

    def test_invalid_inputs(self):
        """测试非法输入"""
        with self.assertRaises(ContourError):
            build_real_grid(-1.0, 16, [])
        with self.assertRaises(ContourError):
            build_real_grid(5.0, 4, [])
        with self.assertRaises(ContourError):
            build_real_grid(5.0, 16, [6.0])
        with self.assertRaises(ContourError):
            build_real_grid(5.0, 16, [], node_family='simpson')

    def test_matrix_field_validation(self):
        """测试矩阵场的形状与有限性检查"""
        field = MatrixField.identity(self.grid)
        self.assertEqual(len(field), self.grid.size)
        self.assertFalse(field.values.flags.writeable)
        with self.assertRaises(ContourError):
            MatrixField(self.grid, np.zeros((3, 2, 2)))
        bad = mat2.zeros(self.grid.size)
        bad[0, 0, 0] = np.nan
        with self.assertRaises(ContourError):
            MatrixField(self.grid, bad)


class TestGammaContour(unittest.TestCase):
    """测试六射线围道 Γ"""

    def setUp(self):
        """测试前准备"""
        self.alpha = math.pi / 12
        self.gamma = build_gamma_contour(self.alpha, 5.0, 32, 16, origin=1.0, n_decay=4)

    def test_size_and_rays(self):
        """测试节点数与射线名称"""
        # 两个 R/2 面板，内侧一个再几何加密为 22 个
        self.assertEqual(self.gamma.size, 6 * 23 * 16)
        self.assertEqual(self.gamma.ray_names, ('G0', 'G1', 'G2', 'G3', 'G4', 'G5'))
        self.assertTrue(self.gamma.is_complete)
        np.testing.assert_allclose(self.gamma.radius().max(), 5.0, atol=0.1)

    def test_orientation(self):
        """测试各射线的走向：ds 之和等于终点减起点"""
        for ray in self.gamma.rays:
            total = self.gamma.ds[ray.slice].sum()
            expected = 5.0 * ray.direction if ray.orientation == 'outward' else -5.0 * ray.direction
            np.testing.assert_allclose(total, expected, atol=1e-12)

    def test_subset_and_embedding(self):
        """测试射线子集及其嵌入索引"""
        sub = self.gamma.subset(('G1', 'G4'))
        self.assertFalse(sub.is_complete)
        self.assertEqual(sub.size, 2 * 23 * 16)
        idx = sub.embedding(self.gamma)
        np.testing.assert_allclose(self.gamma.points[idx], sub.points)

    def test_refined_and_width(self):
        """测试射线加密与按宽度切分"""
        fine = self.gamma.refined()
        self.assertEqual(fine.size, 2 * self.gamma.size)
        self.assertTrue(fine.is_complete)
        narrow = build_gamma_contour(self.alpha, 5.0, 32, 16, origin=1.0, n_decay=4,
                                     width=lambda z: np.full(np.shape(z), 0.25))
        self.assertGreater(narrow.size, self.gamma.size)
        for ray in narrow.rays:
            self.assertLessEqual(max(np.diff(ray.breaks)), 1.25 * 0.25)

    def test_classify_sector(self):
        """测试扇区标签与符号"""
        origin = 1.0
        self.assertEqual(classify_sector(origin + np.exp(0.5j * self.alpha), self.gamma), ('O01', 1))
        self.assertEqual(classify_sector(origin + 1j, self.gamma), ('O12', -1))
        self.assertEqual(classify_sector(origin - 1j, self.gamma), ('O45', 1))
        with self.assertRaises(ContourError):
            classify_sector(origin + 2.0, self.gamma)

    def test_invalid_parameters(self):
        """测试非法角度与节点数"""
        with self.assertRaises(ContourError):
            build_gamma_contour(math.pi / 3, 5.0, 32, 16)
        with self.assertRaises(ContourError):
            build_gamma_contour(math.pi / 6, 5.0, 32, 16, n_decay=8)
        with self.assertRaises(ContourError):
            build_gamma_contour(self.alpha, 5.0, 30, 16)


class TestLensContour(unittest.TestCase):
    """测试透镜围道"""

    def setUp(self):
        """两个驻点的透镜"""
        self.alpha = math.pi / 8
        self.lens = build_lens_contour([-1.0, 1.0], self.alpha, [0.2, 0.2], (3.0, 3.0), 16, 0.5)

    def test_piece_names(self):
        """测试分支名称与类型"""
        names = self.lens.piece_names
        self.assertEqual(names[:6], ('U0', 'D0', 'U1', 'D1', 'U2', 'D2'))
        self.assertIn('B0.1', names)
        self.assertIn('B1.6', names)
        self.assertEqual(self.lens.piece('S1').kind, 'core')
        self.assertEqual(len(names), 6 + 2 * 7)
        with self.assertRaises(ContourError):
            self.lens.piece('G0')

    def test_orientation(self):
        """测试透镜分支向左、核心向右、六边形逆时针"""
        ds = self.lens.ds
        for piece in self.lens.pieces:
            total = ds[piece.slice].sum()
            if piece.kind == 'lens':
                self.assertLess(total.real, 0.0, piece.name)
            elif piece.kind == 'core':
                self.assertAlmostEqual(complex(total), 0.4, places=12)
        for j, lam in enumerate((-1.0, 1.0)):
            sl = slice(self.lens.piece(f"B{j}.1").start, self.lens.piece(f"B{j}.6").stop)
            z, dz = self.lens.points[sl], ds[sl]
            self.assertAlmostEqual(abs(dz.sum()), 0.0, places=12)
            area = 0.5 * float(np.imag(np.sum(np.conj(z - lam) * dz)))
            v = np.array(hexagon_vertices(lam, 0.2, self.alpha)) - lam
            shoelace = 0.5 * float(np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag))
            self.assertGreater(area, 0.0)
            self.assertAlmostEqual(area, shoelace, places=10)

    def test_middle_lens_apex(self):
        """测试两驻点之间的透镜分支经过顶点"""
        upper = self.lens.piece('U1')
        self.assertEqual(upper.interval, 1)
        apex = upper.segments[0][0]
        for a, b in upper.segments:
            apex = a if a.imag > apex.imag else apex
        self.assertAlmostEqual(apex, complex(0.0, math.tan(self.alpha)), places=12)

    def test_hexagon_vertices(self):
        """测试六边形顶点"""
        v = hexagon_vertices(1.0, 0.5, self.alpha)
        self.assertEqual(len(v), 6)
        self.assertAlmostEqual(v[0], 1.5)
        self.assertAlmostEqual(v[3], 0.5)
        np.testing.assert_allclose(np.abs(np.array(v) - 1.0), 0.5)

    def test_refined(self):
        """测试二分加密"""
        fine = self.lens.refined()
        self.assertEqual(fine.size, 2 * self.lens.size)
        self.assertEqual(fine.piece_names, self.lens.piece_names)

    def test_singular_points(self):
        """测试奇异顶点为各六边形顶点，检验点避开它们"""
        self.assertEqual(len(self.lens.singular_points), 12)
        idx, tau, z = self.lens.check_points()
        self.assertGreater(idx.size, 0)
        vertices = np.array(self.lens.singular_points)
        gaps = np.min(np.abs(z[:, None] - vertices[None, :]), axis=1)
        self.assertTrue(np.all(gaps > 0))

    def test_invalid_parameters(self):
        """测试非法驻点、角度、半径与节点上限"""
        with self.assertRaises(ContourError):
            build_lens_contour([], self.alpha, [], (3.0, 3.0))
        with self.assertRaises(ContourError):
            build_lens_contour([1.0, -1.0], self.alpha, [0.2, 0.2], (3.0, 3.0))
        with self.assertRaises(ContourError):
            build_lens_contour([0.0], math.pi / 4, [0.2], (3.0, 3.0))
        with self.assertRaises(ContourError):
            build_lens_contour([-1.0, 1.0], self.alpha, [0.6, 0.6], (3.0, 3.0))
        with self.assertRaises(ContourError):
            build_lens_contour([0.0], self.alpha, [0.2], (0.1, 3.0))
        with self.assertRaises(ContourError):
            build_lens_contour([0.0], self.alpha, [0.2], (3.0, 3.0), max_nodes=100)


if __name__ == '__main__':
    unittest.main()
