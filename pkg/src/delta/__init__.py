"""Scalar Delta Module

Provides the scalar conjugating problem with support for:
- Closed-form Gaussian reflection envelopes with exact derivatives
- δ± boundary values and off-line evaluation through the panel Cauchy operator
- β_j case functions, the local models δ_j and their boundary values
- ω_j by vertical-limit extrapolation and by the log-kernel integral
"""

from .reflection import Envelope, ReflectionPair, pair_from_config, SYMMETRIES
from .scalar_rhp import (
    DeltaSolution, PointRecord, solve_scalar_rhp, beta_j, beta_boundary,
    delta_model, delta_model_boundary, omega_limit, omega_integral, delta_bound_constant,
)

__all__ = [
    'Envelope', 'ReflectionPair', 'pair_from_config', 'SYMMETRIES',
    'DeltaSolution', 'PointRecord', 'solve_scalar_rhp', 'beta_j', 'beta_boundary',
    'delta_model', 'delta_model_boundary', 'omega_limit', 'omega_integral',
    'delta_bound_constant',
]
