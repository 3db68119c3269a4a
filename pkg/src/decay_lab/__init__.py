"""Decay Lab Module

Provides empirical decay-rate experiments with support for:
- Geometric t-grids and log-log slope fits with an optional ln ln t regressor
- Hardy-space localization and vanishing-multiplicity estimates of C₋(f e^{itθ})
- Linear stationary-phase integrals
- Almost orthogonality of Beals-Coifman operators with disjoint supports
- Perturbation probes with the itemised bound
"""

from .experiments import (
    DecayExperiment, KINDS, DEFAULT_TS, validate_t_grid, geometric_ts, fit_slope,
    order_k_bump, power_profile, hardy_localization, vanishing_multiplicity, linear_phase,
    phase_weight_pair, composition_norm, almost_orthogonality, weight_norm, hardy_norm,
    perturbation_bound, perturbation_probe,
)

__all__ = [
    'DecayExperiment', 'KINDS', 'DEFAULT_TS', 'validate_t_grid', 'geometric_ts', 'fit_slope',
    'order_k_bump', 'power_profile', 'hardy_localization', 'vanishing_multiplicity',
    'linear_phase', 'phase_weight_pair', 'composition_norm', 'almost_orthogonality',
    'weight_norm', 'hardy_norm', 'perturbation_bound', 'perturbation_probe',
]
