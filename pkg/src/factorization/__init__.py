"""Jump Factorization Module

Provides jump matrices and weight factorizations with support for:
- The oscillatory jump matrix and its canonical factorization
- δ-conjugated weights with the phase-weight relation
- Smooth localization and Taylor phase reduction
- Model and pre-model weights and their continuation onto Γ
- The lens-deformed problem for large t
- Residual and triangularity checks
"""

from .jump import (
    JumpMatrix, WeightPair, TAGS, build_jump, canonical_factorization,
    conjugated_factorization, localize, phase_reduce, cutoff, smoothstep,
    factorization_residual, is_strictly_triangular, zero_weights,
)
from .model import (
    LocalModel, local_model, model_weights, premodel_weights, deform_to_gamma, gamma_weights,
)
from .lens import (
    build_lens_for, check_lens_poles, core_radii, interval_regions, lens_angle, lens_radius,
    lens_weights, lens_width,
)

__all__ = [
    'JumpMatrix', 'WeightPair', 'TAGS', 'build_jump', 'canonical_factorization',
    'conjugated_factorization', 'localize', 'phase_reduce', 'cutoff', 'smoothstep',
    'factorization_residual', 'is_strictly_triangular', 'zero_weights',
    'LocalModel', 'local_model', 'model_weights', 'premodel_weights', 'deform_to_gamma',
    'gamma_weights',
    'build_lens_for', 'check_lens_poles', 'core_radii', 'interval_regions', 'lens_angle',
    'lens_radius', 'lens_weights', 'lens_width',
]
