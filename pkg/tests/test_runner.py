#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
实验配置、报告与命令流水线测试
"""

import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

# 添加src目录到Python路径
import sys
from pathlib import Path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from src.runner import (
    CheckResult, ExperimentConfig, RunReport, abelian_potential, parse_t_list, run_command,
    table_columns
)
from src.runner import pipeline
from src.runner.report import check, skipped
from src.utils.errors import ConfigError, ContourError, SolveError
from src.utils.file_utils import load_json, load_table


def small_degenerate(**overrides):
    """q ≡ 0 的小规模配置"""
    doc = {
        'reflection': {'amplitude': 0.4, 'symmetry': 'degenerate'},
        'grid': {'L': 4.0},
        'run': {'t': [1.0, 2.0], 'stages': ['abelian'], 'tolerances': {'abelian': 1e-6}},
    }
    doc.update(overrides)
    return doc


def small_defocusing(**run):
    """NLS 散焦、小 t 的配置；实轴网格可行"""
    block = {'t': [2.0, 4.0], 'stages': ['symmetry', 'conditioning', 'convergence']}
    block.update(run)
    return {
        'reflection': {'amplitude': 0.4, 'symmetry': 'defocusing'},
        'grid': {'L': 8.0},
        'run': block,
    }


class TestExperimentConfig(unittest.TestCase):
    """测试配置校验与命令行覆盖"""

    def test_defaults(self):
        """测试空文档即默认配置"""
        cfg = ExperimentConfig.from_dict({})
        self.assertEqual(cfg.phase.name, 'nls')
        self.assertEqual(len(cfg.phase.stationary_locations), 1)
        self.assertAlmostEqual(cfg.phase.stationary_locations[0], 0.0)
        self.assertEqual(cfg.pair.symmetry, 'defocusing')
        self.assertEqual(cfg.ts, (50.0, 100.0, 200.0, 400.0, 800.0))
        self.assertEqual(cfg.check_ts, (2.0, 4.0))
        self.assertEqual(cfg.threads, 1)
        self.assertEqual(cfg.formats, ('json', 'csv'))

    def test_unknown_key_rejected(self):
        """测试未知键"""
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'solver': {'tol': 1e-9}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'grid': {'nodes': 32}})

    def test_invalid_values(self):
        """测试空 t 列表、非正 L、未知阶段与预设"""
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'run': {'t': []}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'grid': {'L': 0.0}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'run': {'stages': ['spectral']}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({}, preset='kdv')
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'reflection': {'symmetry': 'twisted'}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'run': {'threads': 0}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'decay': {'experiments': [{'kind': 'spectral'}]}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'run': {'contour': 'spiral'}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'run': {'stages': ['deformation'], 'check_t': []}})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'grid': {'real_max_nodes': 4}})

    def test_stationary_point_outside_window(self):
        """测试驻点落在 [-L, L] 之外"""
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'phase': {'lambda0': 5.0}, 'grid': {'L': 4.0}})

    def test_overrides(self):
        """测试命令行覆盖优先于文件"""
        cfg = ExperimentConfig.from_dict({'run': {'t_range': {'start': 2.0, 'ratio': 2.0, 'count': 3}}},
                                         preset='mkdv', ts=(1.0, 3.0), threads=4, output_dir='elsewhere')
        self.assertEqual(cfg.phase.name, 'mkdv')
        self.assertEqual(len(cfg.phase.stationary), 2)
        self.assertEqual(cfg.ts, (1.0, 3.0))
        self.assertEqual(cfg.threads, 4)
        self.assertEqual(cfg.output_dir, 'elsewhere')

    def test_t_range(self):
        """测试几何 t 序列"""
        cfg = ExperimentConfig.from_dict({'run': {'t_range': {'start': 2.0, 'ratio': 3.0, 'count': 3}}})
        self.assertEqual(cfg.ts, (2.0, 6.0, 18.0))

    def test_parse_t_list(self):
        """测试逗号分隔的 t 列表"""
        self.assertEqual(parse_t_list('4,8, 16'), (4.0, 8.0, 16.0))
        self.assertEqual(parse_t_list(','), ())
        with self.assertRaises(ConfigError):
            parse_t_list('4,eight')

    def test_stamp(self):
        """测试环境记录"""
        cfg = ExperimentConfig.from_dict(small_degenerate())
        stamp = cfg.stamp()
        self.assertEqual(stamp['symmetry'], 'degenerate')
        self.assertEqual(stamp['grid']['L'], 4.0)


class TestReport(unittest.TestCase):
    """测试运行报告"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_table_columns(self):
        """测试固定列顺序与复数列拆分"""
        columns = table_columns([{'t': 1.0, 'u_numeric': 1j, 'residual': 0.0, 'zeta': 1}])
        self.assertEqual(columns, ['t', 'u_numeric_re', 'u_numeric_im', 'residual', 'zeta'])
        self.assertEqual(table_columns([]), [])

    def test_check_results(self):
        """测试检查结果状态"""
        self.assertFalse(check('x', True, 0.1, 1.0).failed)
        self.assertTrue(check('x', False, 2.0, 1.0).failed)
        result = skipped('y', '无数据')
        self.assertIsInstance(result, CheckResult)
        self.assertEqual(result.to_dict()['status'], 'skipped')

    def test_write(self):
        """测试 report.json 与 table.csv"""
        report = RunReport('solve', config={'seed': 0})
        report.add_record({'t': 2.0, 'u_numeric': 0.5 - 0.25j, 'residual': 1e-15})
        report.add_record({'t': 1.0, 'u_numeric': 1.0 + 0j, 'residual': 1e-15})
        report.add_check(check('abelian', True, 1e-12, 1e-9))
        written = report.write(self.temp_dir)

        data = load_json(written['json'])
        self.assertTrue(data['passed'])
        self.assertEqual(data['records'][0]['t'], 1.0)
        self.assertEqual(data['records'][1]['u_numeric'], {'re': 0.5, 'im': -0.25})
        self.assertIn('numpy', data['environment'])
        self.assertEqual(data['environment']['seed'], 0)

        frame = load_table(written['csv'])
        self.assertEqual(list(frame.columns), ['t', 'u_numeric_re', 'u_numeric_im', 'residual'])
        self.assertEqual(frame['u_numeric_im'].tolist(), [0.0, -0.25])

    def test_write_decay_tables(self):
        """测试衰减实验的逐实验 CSV"""
        report = RunReport('decay')
        report.add_experiment({'label': 'a', 'kind': 'linear-phase'},
                              [{'t': 16.0, 'value': 0.1, 'prediction': 0.1}])
        report.add_check(check('decay:a', False, -0.2, -0.5))
        report.write(self.temp_dir, formats=('csv',))
        self.assertFalse(os.path.exists(os.path.join(self.temp_dir, 'report.json')))
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, 'decay_00_linear-phase.csv')))
        frame = load_table(os.path.join(self.temp_dir, 'table.csv'))
        self.assertEqual(frame['experiment'].tolist(), ['a'])
        self.assertFalse(report.passed)


class TestPipeline(unittest.TestCase):
    """测试命令流水线"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_solve_degenerate(self):
        """测试 q ≡ 0 时 solve 与直接求积一致"""
        cfg = ExperimentConfig.from_dict(small_degenerate(), output_dir=self.temp_dir)
        report = run_command('solve', cfg)
        self.assertEqual([r['t'] for r in report.records], [1.0, 2.0])
        self.assertEqual(report.records[0]['v_numeric'], 0j)
        abelian = [c for c in report.checks if c.name == 'abelian']
        self.assertEqual(len(abelian), 1)
        self.assertLess(abelian[0].value, 1e-6)
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, 'report.json')))
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, 'table.csv')))

    def test_abelian_potential_decays(self):
        """测试直接求积的 u 随 t 衰减"""
        cfg = ExperimentConfig.from_dict(small_degenerate())
        u1 = abelian_potential(cfg, 4.0)
        u2 = abelian_potential(cfg, 16.0)
        self.assertAlmostEqual(abs(u2) / abs(u1), 0.5, delta=0.02)
        self.assertTrue(np.isfinite(u1))

    def test_unknown_command(self):
        """测试未知命令"""
        cfg = ExperimentConfig.from_dict(small_degenerate(), output_dir=self.temp_dir)
        with self.assertRaises(ConfigError):
            run_command('plot', cfg)

    def test_report_written_on_failure(self):
        """测试命令失败时仍写出报告"""
        cfg = ExperimentConfig.from_dict(small_degenerate(), output_dir=self.temp_dir)

        def broken(cfg, report):
            raise SolveError("GMRES 未收敛")

        with patch.dict(pipeline.HANDLERS, {'solve': broken}):
            with self.assertRaises(SolveError):
                run_command('solve', cfg)
        data = load_json(os.path.join(self.temp_dir, 'report.json'))
        self.assertFalse(data['passed'])
        self.assertIn('GMRES', data['error'])

    def test_decay_requires_experiments(self):
        """测试衰减实验列表为空"""
        cfg = ExperimentConfig.from_dict(small_degenerate(decay={'experiments': []}),
                                         output_dir=self.temp_dir)
        with self.assertRaises(ConfigError):
            run_command('decay', cfg)



class TestChecks(unittest.TestCase):
    """测试由记录得出的检查"""

    def test_conditioning_baseline_is_smallest_t(self):
        """测试条件数增长以最小 t 处的条件数为基准"""
        cfg = ExperimentConfig.from_dict({})
        records = [{'t': 4.0, 'condition': 2.0}, {'t': 1.0, 'condition': 4.0},
                   {'t': 2.0, 'condition': 5.0}]
        result = pipeline.check_conditioning(cfg, records)
        self.assertAlmostEqual(result.value, 1.25)
        self.assertFalse(result.failed)

    def test_conditioning_growth_fails(self):
        """测试条件数增长超过阈值"""
        cfg = ExperimentConfig.from_dict({})
        records = [{'t': 1.0, 'condition': 1.0}, {'t': 8.0, 'condition': 50.0},
                   {'t': 16.0, 'condition': float('nan')}]
        self.assertTrue(pipeline.check_conditioning(cfg, records).failed)
        self.assertEqual(pipeline.check_conditioning(cfg, records[:1]).status, 'skipped')

    def test_convergence(self):
        """测试加密差检查"""
        cfg = ExperimentConfig.from_dict({})
        self.assertEqual(pipeline.check_convergence(cfg, [{'t': 400.0}]).status, 'skipped')
        result = pipeline.check_convergence(cfg, [{'t': 50.0, 'convergence_gap': 1e-12},
                                                  {'t': 100.0, 'convergence_gap': 3e-9}])
        self.assertTrue(result.failed)
        self.assertAlmostEqual(result.value, 3e-9)


class TestContourChoice(unittest.TestCase):
    """测试逐 t 的围道选择"""

    @classmethod
    def setUpClass(cls):
        cls.cfg = ExperimentConfig.from_dict(small_defocusing())
        cls.setup = pipeline.prepare(cls.cfg, with_omega=False)

    def test_real_grid_scales_with_t(self):
        """测试实轴网格随 t 加密"""
        coarse = pipeline.real_grid_at(self.cfg, 1.0)
        fine = pipeline.real_grid_at(self.cfg, 4.0)
        self.assertGreater(fine.size, coarse.size)
        self.assertLessEqual(fine.size, self.cfg.grid.real_max_nodes)

    def test_auto_prefers_real_grid(self):
        """测试实轴网格可行时使用实轴"""
        w = pipeline.weights_at(self.setup, 2.0)
        self.assertEqual(w.contour.kind, 'real')
        self.assertEqual(w.tag, 'conjugated')

    def test_auto_falls_back_to_lens(self):
        """测试实轴网格超过上限时改用透镜"""
        capped = ExperimentConfig.from_dict({**small_defocusing(), 'grid': {'L': 8.0, 'real_max_nodes': 200}})
        setup = pipeline.Setup(capped, self.setup.grid, self.setup.partition, self.setup.delta)
        w = pipeline.weights_at(setup, 2.0)
        self.assertEqual(w.contour.kind, 'lens')
        self.assertEqual(w.tag, 'lens-deformed')

    def test_real_only_raises_when_over_budget(self):
        """测试 contour=real 时超过上限报错"""
        doc = small_defocusing(contour='real')
        doc['grid'] = {'L': 8.0, 'real_max_nodes': 200}
        capped = ExperimentConfig.from_dict(doc)
        setup = pipeline.Setup(capped, self.setup.grid, self.setup.partition, self.setup.delta)
        with self.assertRaises(ContourError):
            pipeline.weights_at(setup, 2.0)

    def test_lens_and_real_routes_agree(self):
        """测试实轴与透镜上恢复的 u 一致"""
        real = pipeline.solve_mu(pipeline.weights_at(self.setup, 4.0), condition=False)
        lens = pipeline.solve_mu(pipeline.lens_weights_at(self.setup, 4.0), condition=False)
        self.assertLess(abs(real.u - lens.u), 1e-7 * max(1.0, abs(real.u)))
        self.assertLess(abs(real.v - lens.v), 1e-7 * max(1.0, abs(real.v)))
        self.assertLess(lens.diagnostics['det_deviation'], 1e-8)

    def test_deformation_gap(self):
        """测试预模型权重在 ℝ 与 Γ 上给出相同的 u"""
        for t in (2.0, 4.0):
            rows = pipeline.deformation_gaps(self.setup, t)
            self.assertEqual([row['j'] for row in rows], [0])
            self.assertLessEqual(rows[0]['gap'], 1e-6)
            self.assertGreater(abs(rows[0]['u_real']), 0.0)

    def test_refined_weights(self):
        """测试加密后节点数翻倍、u 不变"""
        w = pipeline.weights_at(self.setup, 2.0)
        fine = pipeline.refined_weights(self.setup, w)
        self.assertEqual(fine.size, 2 * w.size)
        sol = pipeline.solve_mu(w, condition=False)
        self.assertLess(pipeline.convergence_gap(self.setup, sol), 1e-9)


class TestCommands(unittest.TestCase):
    """测试各命令的完整运行"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def checks_of(self, report):
        return {c.name: c for c in report.checks}

    def test_verify(self):
        """测试 verify：对称、加密收敛与 ℝ/Γ 形变不变性"""
        doc = small_defocusing(stages=['symmetry', 'conditioning', 'convergence', 'deformation'],
                               check_t=[2.0])
        cfg = ExperimentConfig.from_dict(doc, output_dir=self.temp_dir)
        report = run_command('verify', cfg)
        for record in report.records:
            self.assertTrue(np.isfinite(record['u_numeric']))
            self.assertTrue(np.isfinite(record['u_asym']))
            self.assertEqual(record['contour'], 'real')
            self.assertEqual(record['route'], 'deconjugated')
            self.assertLess(record['det_deviation'], 1e-8)
            self.assertLess(record['jump_residual'], 1e-8)
        checks = self.checks_of(report)
        for name in ('symmetry', 'conditioning', 'convergence', 'deformation'):
            self.assertFalse(checks[name].failed, name)
        self.assertLessEqual(checks['deformation'].value, 1e-6)
        self.assertEqual([row['t'] for row in report.details['deformation']], [2.0])
        self.assertTrue(report.passed)

    def test_asym(self):
        """测试 asym：两种 ω 与模型常数对称"""
        cfg = ExperimentConfig.from_dict(small_defocusing(t=[50.0, 100.0]), output_dir=self.temp_dir)
        report = run_command('asym', cfg)
        checks = self.checks_of(report)
        self.assertFalse(checks['omega-routes'].failed)
        self.assertFalse(checks['model-symmetry'].failed)
        for record in report.records:
            self.assertTrue(np.isfinite(record['u_asym']))
        point = report.details['points'][0]
        self.assertTrue(np.isfinite(point['U']))
        self.assertGreater(abs(point['U']), 0.0)

    def test_sweep(self):
        """测试 sweep：条件数、误差阶与加密检查都给出结论"""
        cfg = ExperimentConfig.from_dict(small_defocusing(), output_dir=self.temp_dir)
        report = run_command('sweep', cfg)
        checks = self.checks_of(report)
        self.assertIn('conditioning', checks)
        self.assertIn('error-order', checks)
        self.assertFalse(checks['convergence'].failed)
        self.assertEqual([r['t'] for r in report.records], [2.0, 4.0])
        for record in report.records:
            self.assertTrue(np.isfinite(record['abs_error']))
            self.assertTrue(np.isfinite(record['condition']))

    def test_decay(self):
        """测试 decay：每个实验都有记录与通过的斜率检查"""
        experiments = [
            {'kind': 'linear-phase', 'support': [1.0, 2.0], 'k': 3},
            {'kind': 'hardy-localization', 'support': [1.0, 2.0], 'k': 2, 'p': 2,
             'label': 'hardy'},
        ]
        doc = small_degenerate(decay={'ts': [16.0, 32.0, 64.0, 128.0, 256.0],
                                      'experiments': experiments})
        cfg = ExperimentConfig.from_dict(doc, output_dir=self.temp_dir)
        report = run_command('decay', cfg)
        self.assertEqual(len(report.experiments), 2)
        self.assertEqual(len(report.checks), 2)
        self.assertTrue(all(not c.failed for c in report.checks))
        self.assertIn('decay:hardy', self.checks_of(report))
        self.assertTrue(os.path.exists(os.path.join(self.temp_dir, 'decay_00_linear-phase.csv')))

    def test_abelian_on_lens(self):
        """测试 q ≡ 0 时透镜上的 u 与直接求积一致"""
        doc = small_degenerate()
        doc['run'] = {'t': [20.0], 'stages': ['abelian'], 'contour': 'lens',
                      'tolerances': {'abelian': 1e-6}}
        cfg = ExperimentConfig.from_dict(doc, output_dir=self.temp_dir)
        report = run_command('solve', cfg)
        self.assertEqual(report.records[0]['contour'], 'lens')
        self.assertFalse(self.checks_of(report)['abelian'].failed)


if __name__ == '__main__':
    unittest.main()
