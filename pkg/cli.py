#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
统一CLI接口

提供命令行接口来运行振荡 Riemann-Hilbert 问题的各个实验：
- solve: 数值求解 u(t), v(t)
- asym: 长时间渐近式与各驻点常数
- verify: 数值解与渐近式对比及验收检查
- decay: 衰减实验（Hardy 局部化、消失重数、线性相位、近正交、扰动）
- sweep: 按几何 t 序列扫描并记录条件数

退出码: 0 成功, 1 验收未通过, 2 配置无效, 3 求解失败
"""

import argparse
import sys
from pathlib import Path

# 添加src目录到Python路径
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from src.runner import COMMANDS, ExperimentConfig, parse_t_list, run_command
from src.utils.config_utils import get_config_value, init_config
from src.utils.errors import ConfigError, RhpToolkitError
from src.utils.logger import create_daily_log_file, enable_file_logging, get_logger, set_default_level

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVE = 3


def setup_environment(args):
    """加载配置、应用命令行覆盖并设置日志"""
    document = init_config(args.config)
    ts = parse_t_list(args.t) if args.t else None
    cfg = ExperimentConfig.from_dict(document, preset=args.preset, ts=ts, threads=args.threads,
                                     output_dir=args.out)

    set_default_level('DEBUG' if args.verbose else cfg.log_level)
    if get_config_value(cfg.raw, 'logging.file_enabled', False):
        enable_file_logging(create_daily_log_file(),
                            get_config_value(cfg.raw, 'logging.log_dir', 'logs'))
    return cfg


def run_experiment(cfg, command):
    """运行一个命令并返回是否全部检查通过"""
    logger = get_logger('cli')
    logger.info(f"启动命令 {command}: 输出目录 {cfg.output_dir}")
    report = run_command(command, cfg)

    for result in report.checks:
        if result.failed:
            logger.warning(f"未通过: {result.name} (值 {result.value}, 阈值 {result.threshold})")
    passed = sum(1 for c in report.checks if c.status == 'pass')
    failed = sum(1 for c in report.checks if c.failed)
    logger.info(f"命令 {command} 完成: {len(report.records)} 条记录, "
                f"检查通过 {passed}, 未通过 {failed}")
    return report.passed


def create_parser():
    """创建命令行参数解析器"""
    parser = argparse.ArgumentParser(
        prog='orhp',
        description="振荡 Riemann-Hilbert 问题工具箱 - 数值求解、渐近式与衰减实验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例用法:
  %(prog)s solve --config config/experiments/nls_defocusing.json
  %(prog)s verify --config config/experiments/nls_defocusing.json --t 8,16,32,64
  %(prog)s asym --config config/experiments/mkdv_two_points.json --preset mkdv
  %(prog)s decay --config config/experiments/decay_suite.json --threads 4
  %(prog)s sweep --config config/experiments/nls_defocusing.json --out output/sweep
        """
    )

    # 所有子命令共用的参数
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config', '-c',
        type=str,
        required=True,
        help='实验配置文件路径 (YAML 或 JSON)'
    )
    common.add_argument(
        '--out', '-o',
        type=str,
        help='输出目录 (覆盖 output.dir)'
    )
    common.add_argument(
        '--threads',
        type=int,
        help='并行线程数 (覆盖 run.threads)'
    )
    common.add_argument(
        '--preset',
        type=str,
        help='相位预设 nls 或 mkdv (覆盖 phase.preset)'
    )
    common.add_argument(
        '--t',
        type=str,
        help='逗号分隔的 t 列表，例如 4,8,16 (覆盖 run.t)'
    )
    common.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='启用详细输出'
    )

    # 创建子命令
    subparsers = parser.add_subparsers(
        dest='command',
        help='可用命令',
        metavar='COMMAND'
    )
    helps = {
        'solve': '数值求解 Beals-Coifman 方程并恢复 u, v',
        'asym': '计算 ν, ε, α, ω、模型常数与渐近主项',
        'verify': '对比数值解与渐近式并运行验收检查',
        'decay': '运行衰减实验并拟合对数斜率',
        'sweep': '按 t 序列扫描并记录条件数',
    }
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], help=helps[name])

    return parser


def main(argv=None):
    """主函数"""
    parser = create_parser()
    args = parser.parse_args(argv)

    # 如果没有指定命令，显示帮助
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    logger = get_logger('cli')
    try:
        cfg = setup_environment(args)
        success = run_experiment(cfg, args.command)
        return EXIT_OK if success else EXIT_CHECKS_FAILED

    except ConfigError as e:
        logger.error(f"配置无效: {e}")
        return EXIT_CONFIG
    except RhpToolkitError as e:
        logger.error(f"求解失败: {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_SOLVE
    except KeyboardInterrupt:
        print("\n用户中断执行")
        return EXIT_CHECKS_FAILED
    except Exception as e:
        logger.error(f"执行失败: {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_CHECKS_FAILED


if __name__ == '__main__':
    sys.exit(main())
