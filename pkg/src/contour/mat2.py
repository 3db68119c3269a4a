"""Vectorised 2×2 complex matrix algebra.

Single matrices have shape (2, 2); fields of matrices have shape (n, 2, 2).
Every function accepts both.
"""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..utils.errors import ContourError, SingularMatrixError

SINGULAR_TOL = 1e-14

SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def identity(n: Optional[int] = None) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    if n is None:
        return eye
    return np.broadcast_to(eye, (n, 2, 2)).copy()


def zeros(n: Optional[int] = None) -> np.ndarray:
    return np.zeros((2, 2) if n is None else (n, 2, 2), dtype=complex)


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.matmul(a, b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a) + np.asarray(b)


def det(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def inverse(a: np.ndarray) -> np.ndarray:
    """Closed-form 2×2 inverse; raises when any |det| ≤ 1e-14."""
    a = np.asarray(a, dtype=complex)
    d = det(a)
    if np.any(np.abs(d) <= SINGULAR_TOL):
        raise SingularMatrixError(f"矩阵奇异: min|det| = {np.min(np.abs(d)):.3e}")
    out = np.empty_like(a)
    out[..., 0, 0] = a[..., 1, 1]
    out[..., 1, 1] = a[..., 0, 0]
    out[..., 0, 1] = -a[..., 0, 1]
    out[..., 1, 0] = -a[..., 1, 0]
    return out / d[..., None, None]


def off_diagonal(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out[..., 0, 0] = 0.0
    out[..., 1, 1] = 0.0
    return out


def frobenius_abs(a: np.ndarray) -> np.ndarray:
    """|M| = (tr M*M)^{1/2}."""
    return np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2, axis=(-2, -1)))


def upper(entry: np.ndarray) -> np.ndarray:
    """Strictly upper-triangular field with the given 12 entry."""
    entry = np.atleast_1d(np.asarray(entry, dtype=complex))
    out = zeros(entry.shape[0])
    out[:, 0, 1] = entry
    return out


def lower(entry: np.ndarray) -> np.ndarray:
    """Strictly lower-triangular field with the given 21 entry."""
    entry = np.atleast_1d(np.asarray(entry, dtype=complex))
    out = zeros(entry.shape[0])
    out[:, 1, 0] = entry
    return out


def diag_power(d: np.ndarray, sign: int = 1) -> np.ndarray:
    """d^{sign·σ3} for a scalar field d."""
    d = np.atleast_1d(np.asarray(d, dtype=complex))
    out = zeros(d.shape[0])
    out[:, 0, 0] = d ** sign
    out[:, 1, 1] = d ** (-sign)
    return out


def _read_only(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=complex, copy=True)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class MatrixField:
    """Per-node 2×2 values attached to a contour."""

    contour: Any
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 3 or values.shape[1:] != (2, 2):
            raise ContourError(f"矩阵场形状错误: {values.shape}")
        if values.shape[0] != self.contour.size:
            raise ContourError(
                f"矩阵场长度 {values.shape[0]} 与围道节点数 {self.contour.size} 不一致")
        if not np.all(np.isfinite(values)):
            raise ContourError("矩阵场包含非有限值")
        object.__setattr__(self, 'values', _read_only(values))

    def __len__(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, contour) -> 'MatrixField':
        return cls(contour, zeros(contour.size))

    @classmethod
    def identity(cls, contour) -> 'MatrixField':
        return cls(contour, identity(contour.size))

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.values[:, i, j]

    def sup_norm(self) -> float:
        return float(np.max(frobenius_abs(self.values), initial=0.0))
