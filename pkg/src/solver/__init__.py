"""Beals-Coifman Solver Module

Provides the singular integral equation solve with support for:
- Dense LU for moderate contours and restarted matrix-free GMRES beyond
- Reconstruction of M off the contour and of both boundary values
- Jump and equation residuals, det μ and a weighted condition estimate
- Recovery of u, v from the coefficient at infinity
"""

from .beals_coifman import (
    RhpSolution, apply_cw, solve_mu, solve_residual, boundary_values, jump_residual,
    reconstruct_M, recover_potentials, mu_far_field, estimate_condition,
)

__all__ = [
    'RhpSolution', 'apply_cw', 'solve_mu', 'solve_residual', 'boundary_values',
    'jump_residual', 'reconstruct_M', 'recover_potentials', 'mu_far_field',
    'estimate_condition',
]
