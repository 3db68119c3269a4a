"""Real polynomial phases, their stationary points and sign partitions."""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from ..utils.errors import PhaseError
from ..utils.logger import get_logger

logger = get_logger('phase')

# |θ^(m)(λ)| < MULTIPLICITY_TOL · scale 视为导数为零
MULTIPLICITY_TOL = 1e-9
ROOT_CLUSTER_TOL = 1e-5
REAL_ROOT_TOL = 1e-6


@dataclass(frozen=True)
class StationaryPoint:
    lam: float
    k: int
    top: float
    eps: int
    value: float


@dataclass(frozen=True)
class PhasePiece:
    lo: float
    hi: float
    poly: Polynomial


@dataclass(frozen=True)
class MonomialData:
    """Θ(x) = a + b (x - lam)^(k+1)."""

    lam: float
    k: int
    a: float
    b: float


@dataclass(frozen=True)
class PhaseSpec:
    """θ as one polynomial or as contiguous polynomial pieces.

    Coefficients are in ascending powers. ``stationary`` is empty until
    :func:`classify` has run.
    """

    pieces: Tuple[PhasePiece, ...]
    stationary: Tuple[StationaryPoint, ...] = ()
    threshold: float = MULTIPLICITY_TOL
    name: str = 'custom'
    monomial: Optional[MonomialData] = field(default=None, compare=False)

    @classmethod
    def polynomial(cls, coefficients: Sequence[float], name: str = 'custom') -> 'PhaseSpec':
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.ndim != 1 or not np.all(np.isfinite(coefficients)):
            raise PhaseError(f"相位系数无效: {coefficients}")
        poly = Polynomial(coefficients).trim()
        return cls((PhasePiece(-math.inf, math.inf, poly),), name=name)

    @classmethod
    def piecewise(cls, pieces: Sequence[Tuple[float, float, Sequence[float]]],
                  name: str = 'piecewise') -> 'PhaseSpec':
        """Pieces (lo, hi, coefficients) covering the line left to right; θ must be continuous."""
        built = [PhasePiece(float(lo), float(hi), Polynomial(np.asarray(c, dtype=float)))
                 for lo, hi, c in pieces]
        if not built:
            raise PhaseError("分段相位至少需要一段")
        if built[0].lo != -math.inf or built[-1].hi != math.inf:
            raise PhaseError("分段相位必须覆盖整条实轴")
        for left, right in zip(built[:-1], built[1:]):
            if left.hi != right.lo:
                raise PhaseError(f"分段不连续: {left.hi} != {right.lo}")
            x = left.hi
            gap = abs(left.poly(x) - right.poly(x))
            if gap > 1e-9 * max(1.0, abs(left.poly(x))):
                raise PhaseError(f"相位在 {x} 处不连续: 跳跃 {gap:.3e}")
        return cls(tuple(built), name=name)

    @property
    def degree(self) -> int:
        return max(p.poly.degree() for p in self.pieces)

    @property
    def is_polynomial(self) -> bool:
        return len(self.pieces) == 1

    def _piece_index(self, x: np.ndarray) -> np.ndarray:
        his = np.array([p.hi for p in self.pieces[:-1]])
        return np.searchsorted(his, x, side='right')

    def evaluate(self, x, derivative: int = 0):
        """θ^(derivative) at real x, or at complex x for a single polynomial."""
        if self.is_polynomial:
            poly = self.pieces[0].poly.deriv(derivative) if derivative else self.pieces[0].poly
            return poly(x)
        x_arr = np.asarray(x)
        if np.iscomplexobj(x_arr) and np.any(np.imag(x_arr) != 0):
            raise PhaseError("分段相位不能在复平面上求值")
        x_arr = np.real(x_arr).astype(float)
        idx = self._piece_index(x_arr)
        out = np.zeros_like(x_arr, dtype=float)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                poly = piece.poly.deriv(derivative) if derivative else piece.poly
                out[mask] = poly(x_arr[mask])
        return out if out.ndim else float(out)

    def __call__(self, x):
        return self.evaluate(x)

    def derivative(self, x, order: int = 1):
        return self.evaluate(x, order)

    def scale(self, lam: float) -> float:
        coefs = np.concatenate([np.abs(p.poly.coef) for p in self.pieces])
        return float(coefs.max()) * max(1.0, abs(lam)) ** self.degree

    def point(self, j: int) -> StationaryPoint:
        if not self.stationary:
            raise PhaseError("相位尚未分类")
        if not 0 <= j < len(self.stationary):
            raise PhaseError(f"驻点编号越界: {j}")
        return self.stationary[j]

    @property
    def stationary_locations(self) -> List[float]:
        return [s.lam for s in self.stationary]


def _piece_roots(piece: PhasePiece) -> List[float]:
    d1 = piece.poly.deriv()
    if d1.degree() < 1 or not np.any(d1.coef):
        return []
    roots = d1.roots()
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    real = sorted(float(r.real) for r in roots if abs(r.imag) <= REAL_ROOT_TOL * scale)
    clusters: List[List[float]] = []
    for r in real:
        if clusters and abs(r - clusters[-1][-1]) <= ROOT_CLUSTER_TOL * max(1.0, abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])
    return [float(np.mean(c)) for c in clusters if piece.lo <= np.mean(c) < piece.hi]


def classify(theta: PhaseSpec, threshold: float = MULTIPLICITY_TOL) -> PhaseSpec:
    """Find the real stationary points of θ with order, top derivative and signature."""
    if theta.degree < 2:
        raise PhaseError(f"相位次数必须 ≥ 2: {theta.degree}")

    records = []
    for piece in theta.pieces:
        if piece.poly.degree() < 1:
            continue
        for lam in _piece_roots(piece):
            scale = theta.scale(lam)
            k = 1
            while abs(piece.poly.deriv(k + 1)(lam)) < threshold * scale:
                k += 1
                if k + 1 > piece.poly.degree():
                    logger.error(f"驻点 {lam} 处所有导数都低于阈值")
                    raise PhaseError(f"无法确定驻点 {lam} 的阶数")
            # 用 θ^(k) 的单根做 Newton 修正
            dk, dk1 = piece.poly.deriv(k), piece.poly.deriv(k + 1)
            for _ in range(3):
                lam = lam - dk(lam) / dk1(lam)
            top = float(dk1(lam))
            eps = 0 if k % 2 == 0 else int(np.sign(top))
            records.append(StationaryPoint(float(lam), k, top, eps, float(piece.poly(lam))))

    records.sort(key=lambda s: s.lam)
    logger.debug("驻点: " + ", ".join(f"λ={s.lam:.6g} (k={s.k}, ε={s.eps})" for s in records))
    return replace(theta, stationary=tuple(records), threshold=threshold)


ENDPOINT_CASES = ('interior', 'exterior', 'left-endpoint', 'right-endpoint')


@dataclass(frozen=True, eq=False)
class SignPartition:
    """D₊ = {θ' > 0} and D₋ = {θ' < 0} on a grid, with endpoint data."""

    plus: np.ndarray
    minus: np.ndarray
    endpoint: Tuple[str, ...]
    minus_intervals: Tuple[Tuple[float, float], ...]
    L: float

    def case(self, j: int) -> str:
        return self.endpoint[j]


def _sign_between(theta: PhaseSpec, a: float, b: float) -> int:
    return int(np.sign(theta.evaluate(0.5 * (a + b), 1)))


def sign_partition(theta: PhaseSpec, grid) -> SignPartition:
    """Per-node D± masks, endpoint classification and the D₋ intervals inside [-L, L]."""
    if not theta.stationary and theta.degree >= 2:
        theta = classify(theta)
    slope = np.asarray(theta.evaluate(grid.points.real, 1), dtype=float)
    minus = slope < 0
    plus = ~minus
    for arr in (plus, minus):
        arr.setflags(write=False)

    L = float(grid.L)
    cuts = [-L] + [s.lam for s in theta.stationary if -L < s.lam < L] + [L]
    cuts += [p.hi for p in theta.pieces[:-1] if -L < p.hi < L]
    cuts = sorted(set(cuts))
    intervals: List[List[float]] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if _sign_between(theta, a, b) < 0:
            if intervals and intervals[-1][1] == a:
                intervals[-1][1] = b
            else:
                intervals.append([a, b])

    cases = []
    for s in theta.stationary:
        h = 1e-6 * max(1.0, abs(s.lam))
        neighbours = sorted(c for c in cuts if abs(c - s.lam) > h)
        left_cut = max([c for c in neighbours if c < s.lam], default=s.lam - 1.0)
        right_cut = min([c for c in neighbours if c > s.lam], default=s.lam + 1.0)
        left = _sign_between(theta, left_cut, s.lam) < 0
        right = _sign_between(theta, s.lam, right_cut) < 0
        if left and right:
            cases.append('interior')
        elif left:
            cases.append('right-endpoint')
        elif right:
            cases.append('left-endpoint')
        else:
            cases.append('exterior')

    return SignPartition(plus, minus, tuple(cases), tuple(tuple(iv) for iv in intervals), L)


def taylor_model(theta: PhaseSpec, j: int) -> PhaseSpec:
    """Θ_j(x) = θ(λ_j) + θ^(k_j+1)(λ_j)/(k_j+1)! · (x - λ_j)^(k_j+1)."""
    s = theta.point(j)
    a = s.value
    b = s.top / math.factorial(s.k + 1)
    poly = b * Polynomial([-s.lam, 1.0]) ** (s.k + 1) + a
    model = PhaseSpec.polynomial(poly.coef, name=f"{theta.name}-taylor-{j}")
    model = replace(model, stationary=(replace(s),), threshold=theta.threshold,
                    monomial=MonomialData(s.lam, s.k, a, b))
    return model
