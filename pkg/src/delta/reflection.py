"""Reflection coefficients as closed-form Gaussian envelopes."""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from ..utils.errors import FactorizationError
from ..utils.logger import get_logger

logger = get_logger('delta')

SYMMETRIES = ('degenerate', 'defocusing', 'focusing')


@dataclass(frozen=True)
class Envelope:
    """f(x) = c · P(x) · exp(-a (x - x0)²) with a ≥ 0 and x0 real.

    The family is closed under differentiation, so derivatives of any order
    are exact.
    """

    c: complex
    poly: Polynomial = field(default_factory=lambda: Polynomial([1.0]))
    a: float = 1.0
    x0: float = 0.0

    @classmethod
    def gaussian(cls, amplitude: complex, width: float = 1.0, center: float = 0.0) -> 'Envelope':
        return cls(complex(amplitude), Polynomial([1.0]), 1.0 / float(width) ** 2, float(center))

    @classmethod
    def zero(cls) -> 'Envelope':
        return cls(0j)

    @property
    def is_zero(self) -> bool:
        return self.c == 0 or not np.any(self.poly.coef)

    def __call__(self, x):
        x = np.asarray(x)
        return self.c * self.poly(x) * np.exp(-self.a * (x - self.x0) ** 2)

    def derivative(self, order: int = 1) -> 'Envelope':
        poly = self.poly
        shift = Polynomial([-self.x0, 1.0])
        for _ in range(order):
            poly = poly.deriv() - 2.0 * self.a * shift * poly
        return Envelope(self.c, poly, self.a, self.x0)

    def conj(self) -> 'Envelope':
        """The envelope equal to conj(f(x)) on the real line."""
        return Envelope(np.conj(self.c), Polynomial(np.conj(self.poly.coef)), self.a, self.x0)

    def scaled(self, factor: complex) -> 'Envelope':
        return Envelope(self.c * factor, self.poly, self.a, self.x0)


@dataclass(frozen=True)
class ReflectionPair:
    """The reflection coefficients p, q with 1 + pq > 0 on the real line."""

    p: Envelope
    q: Envelope
    symmetry: str = 'custom'

    @classmethod
    def degenerate(cls, p: Envelope) -> 'ReflectionPair':
        return cls(p, Envelope.zero(), 'degenerate')

    @classmethod
    def defocusing(cls, p: Envelope) -> 'ReflectionPair':
        """q = -conj(p)."""
        return cls(p, p.conj().scaled(-1.0), 'defocusing')

    @classmethod
    def focusing(cls, p: Envelope) -> 'ReflectionPair':
        """q = conj(p)."""
        return cls(p, p.conj(), 'focusing')

    @classmethod
    def from_symmetry(cls, p: Envelope, symmetry: str) -> 'ReflectionPair':
        if symmetry not in SYMMETRIES:
            raise FactorizationError(f"未知对称类型: {symmetry}")
        return getattr(cls, symmetry)(p)

    @property
    def is_trivial(self) -> bool:
        return self.q.is_zero or self.p.is_zero

    def product(self, x):
        return self.p(x) * self.q(x)

    def d_product(self, x):
        return self.p.derivative()(x) * self.q(x) + self.p(x) * self.q.derivative()(x)

    def one_plus_pq(self, x) -> np.ndarray:
        """1 + p q as a real array; raises if it is not real positive."""
        value = 1.0 + self.product(x)
        if np.any(np.abs(np.imag(value)) > 1e-12):
            raise FactorizationError("p q 在实轴上不是实数")
        value = np.real(value)
        if np.any(value <= 0):
            bad = np.atleast_1d(x)[np.atleast_1d(value) <= 0]
            logger.error(f"1+pq ≤ 0 于 {bad[:3]}")
            raise FactorizationError(f"1+pq ≤ 0 于 {bad.size} 个节点")
        return value

    def log_one_plus_pq(self, x) -> np.ndarray:
        return np.log(self.one_plus_pq(x))

    def d_log_one_plus_pq(self, x) -> np.ndarray:
        """(pq)'/(1 + pq), exact."""
        return np.real(self.d_product(x)) / self.one_plus_pq(x)

    def nu(self, lam: float) -> float:
        """ν = -ln(1 + p q)/(2π) at a real point."""
        return float(-np.log(self.one_plus_pq(lam)) / (2.0 * math.pi))

    def check_positive(self, x: Sequence[float]) -> None:
        self.one_plus_pq(np.asarray(x))


def pair_from_config(block: dict) -> ReflectionPair:
    """Reflection pair from the ``reflection`` config block."""
    preset = block.get('preset', 'gaussian')
    if preset != 'gaussian':
        raise FactorizationError(f"未知包络预设: {preset}")
    phase = float(block.get('phase', 0.0))
    amplitude = float(block.get('amplitude', 0.4)) * complex(np.exp(1j * phase))
    p = Envelope.gaussian(amplitude, block.get('width', 1.0), block.get('center', 0.0))
    return ReflectionPair.from_symmetry(p, block.get('symmetry', 'defocusing'))
