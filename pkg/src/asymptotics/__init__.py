"""Asymptotics Module

Provides the leading long-time contributions with support for:
- α_j and the closed first-order constant with its pq → 0 limit
- arg Γ on the imaginary axis with a product-formula cross-check
- Timeless model constants from a Beals-Coifman solve on Γ
- Per-point leading terms and their sum with error-order annotations
"""

from .constants import (
    ModelConstants, SYMMETRY_TOL, alpha, arg_gamma_imaginary, arg_gamma_imaginary_product, default_ray_angle,
    explicit_U_first_order, model_constants_numeric, reconcile_first_order_readings,
    reference_amplitudes, truncation_radius,
)
from .terms import AsymptoticTerm, SOURCES, build_term, build_terms, leading_term, sum_contributions

__all__ = [
    'ModelConstants', 'SYMMETRY_TOL', 'alpha', 'arg_gamma_imaginary', 'arg_gamma_imaginary_product',
    'default_ray_angle',
    'explicit_U_first_order', 'model_constants_numeric', 'reconcile_first_order_readings',
    'reference_amplitudes', 'truncation_radius',
    'AsymptoticTerm', 'SOURCES', 'build_term', 'build_terms', 'leading_term', 'sum_contributions',
]
