"""Cauchy transforms of matrix fields."""

import math

import numpy as np

from ..contour.mat2 import MatrixField
from ..utils.errors import CauchyError
from .fourier import FourierCauchy, UniformGrid
from .panel import CauchyOperator, operator_for


def backend_for(contour):
    """Panel operator for panel contours, Fourier multiplier for uniform grids."""
    if isinstance(contour, UniformGrid):
        return FourierCauchy(contour)
    if hasattr(contour, 'panels'):
        return operator_for(contour)
    raise CauchyError(f"不支持的围道类型: {type(contour).__name__}")


def _backend(f: MatrixField, operator):
    if operator is not None:
        if operator.contour is not f.contour:
            raise CauchyError("算子与矩阵场不在同一围道上")
        return operator
    return backend_for(f.contour)


def cauchy_plus(f: MatrixField, operator=None) -> MatrixField:
    """Boundary values from the + side (left of the orientation)."""
    op = _backend(f, operator)
    return MatrixField(f.contour, op.plus(f.values))


def cauchy_minus(f: MatrixField, operator=None) -> MatrixField:
    op = _backend(f, operator)
    return MatrixField(f.contour, op.minus(f.values))


def cauchy_eval(f: MatrixField, z, operator: CauchyOperator = None, near_ok: bool = False) -> np.ndarray:
    """(1/2πi)∫ f(s)/(s-z) ds for z off the contour.

    Refuses points within one local node spacing of the contour unless
    ``near_ok`` is set, in which case only points on the contour are refused.
    """
    op = _backend(f, operator)
    if not isinstance(op, CauchyOperator):
        raise CauchyError("离开围道的求值只支持面板围道")
    return op.evaluate(f.values, z, near_ok=near_ok)


def hilbert(f: MatrixField, operator=None) -> MatrixField:
    """Classical Hilbert transform -i(C₊ + C₋) on the real line; H(Hf) = -f."""
    if getattr(f.contour, 'kind', None) not in ('real', 'uniform'):
        raise CauchyError("Hilbert 变换只定义在实轴上")
    op = _backend(f, operator)
    return MatrixField(f.contour, op.hilbert(f.values))


def coefficient_at_infinity(f: MatrixField) -> np.ndarray:
    """-(1/2πi)∫ f(s) ds, the 1/z coefficient of Cf at infinity."""
    return -f.contour.integrate(f.values) / (2j * math.pi)
