"""Phase Module

Provides real phase functions with support for:
- Polynomial and piecewise-polynomial phases with derivative access
- Stationary-point classification (order, top derivative, signature)
- D₊/D₋ sign partitions and endpoint classification
- Taylor monomial models and the NLS/mKdV presets
"""

from .phase import (
    PhaseSpec, PhasePiece, StationaryPoint, MonomialData, SignPartition,
    classify, sign_partition, taylor_model, MULTIPLICITY_TOL,
)
from .presets import nls_phase, mkdv_phase, phase_from_config, PRESETS

__all__ = [
    'PhaseSpec', 'PhasePiece', 'StationaryPoint', 'MonomialData', 'SignPartition',
    'classify', 'sign_partition', 'taylor_model', 'MULTIPLICITY_TOL',
    'nls_phase', 'mkdv_phase', 'phase_from_config', 'PRESETS',
]
