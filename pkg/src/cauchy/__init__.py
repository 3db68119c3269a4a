"""Cauchy Transform Module

Provides Cauchy projections with support for:
- Panel closed-form boundary values C₊, C₋ on real grids and ray contours
- Off-contour evaluation with near-contour refusal
- Fourier-multiplier projections on uniform periodic grids
- Hilbert transform and the coefficient at infinity
"""

from .panel import CauchyOperator, operator_for, bernstein_radius
from .fourier import FourierCauchy, UniformGrid, lp_norm
from .operators import (
    backend_for, cauchy_plus, cauchy_minus, cauchy_eval, hilbert, coefficient_at_infinity,
)

__all__ = [
    'CauchyOperator', 'operator_for', 'bernstein_radius',
    'FourierCauchy', 'UniformGrid', 'lp_norm',
    'backend_for', 'cauchy_plus', 'cauchy_minus', 'cauchy_eval', 'hilbert',
    'coefficient_at_infinity',
]
