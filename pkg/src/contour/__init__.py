"""Contour Module

Provides quadrature-ready contours with support for:
- Graded Chebyshev/Legendre panels on the truncated real line
- The six-ray contour Γ with orientation, sector classifier and ray subsets
- The steepest-descent lens with a small core around every stationary point
- Vectorised 2×2 complex matrix algebra and matrix fields
"""

from . import mat2
from .mat2 import MatrixField
from .panels import Panel, ReferenceRule, oscillation_width, reference_rule, split_segment
from .grid import RealGrid, build_real_grid
from .gamma import OrientedContour, Ray, build_gamma_contour, classify_sector, ray_angles
from .lens import LensContour, LensPiece, build_lens_contour, hexagon_vertices

__all__ = [
    'mat2', 'MatrixField',
    'Panel', 'ReferenceRule', 'oscillation_width', 'reference_rule', 'split_segment',
    'RealGrid', 'build_real_grid',
    'OrientedContour', 'Ray', 'build_gamma_contour', 'classify_sector', 'ray_angles',
    'LensContour', 'LensPiece', 'build_lens_contour', 'hexagon_vertices',
]
