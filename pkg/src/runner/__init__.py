"""Runner Module

Provides the experiment pipelines behind the command line with support for:
- Validated experiment configuration with CLI overrides
- Per-t contour choice: t-aware real grid or the lens
- solve / asym / verify / decay / sweep commands over a thread pool
- Acceptance checks and run reports (report.json, table.csv)
"""

from .config import CONTOURS, ExperimentConfig, GridPlan, STAGES, parse_t_list
from .pipeline import (
    COMMANDS, Setup, abelian_potential, cmd_asym, cmd_decay, cmd_solve, cmd_sweep, cmd_verify,
    convergence_gap, deformation_gaps, evaluate_t, prepare, real_weights, refined_weights,
    run_command, separation_gap, solve_at, weights_at,
)
from .report import CheckResult, RunReport, environment_stamp, table_columns

__all__ = [
    'CONTOURS', 'ExperimentConfig', 'GridPlan', 'STAGES', 'parse_t_list',
    'COMMANDS', 'Setup', 'abelian_potential', 'cmd_asym', 'cmd_decay', 'cmd_solve', 'cmd_sweep',
    'cmd_verify', 'convergence_gap', 'deformation_gaps', 'evaluate_t', 'prepare', 'real_weights',
    'refined_weights', 'run_command', 'separation_gap', 'solve_at', 'weights_at',
    'CheckResult', 'RunReport', 'environment_stamp', 'table_columns',
]
