"""Points of bounded height on the split quadric y0*y1 = y2*y3.

Nondegenerate points (no zero coordinate) are produced from the
parametrisation y = (t0 t2, t1 t3, t0 t3, t1 t2) with gcd(t0, t1) =
gcd(t2, t3) = 1 and t0, t2 > 0.  Each projective point has exactly one such
parameter, so no deduplication is needed on that side.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .arithmetic import SpfTable, is_perfect_square, squarefree_core
from .errors import DomainError
from .solubility import DiagonalForm

MAX_HEIGHT = 2**62


class PointClass(enum.Enum):
    NONDEGENERATE = "nondegenerate"
    DEGENERATE = "degenerate"


def _canonical(y) -> tuple[int, ...]:
    g = math.gcd(*y)
    if g == 0:
        raise DomainError("zero vector is not a projective point")
    y = tuple(c // g for c in y)
    first = next(c for c in y if c)
    return y if first > 0 else tuple(-c for c in y)


@dataclass(frozen=True)
class SurfacePoint:
    y: tuple[int, int, int, int]

    def __post_init__(self):
        y = self.y
        if len(y) != 4:
            raise DomainError(f"need 4 coordinates, got {y}")
        if y[0] * y[1] != y[2] * y[3]:
            raise DomainError(f"{y} is not on y0*y1 = y2*y3")
        if math.gcd(*y) != 1:
            raise DomainError(f"{y} is not primitive")
        if next(c for c in y if c) < 0:
            raise DomainError(f"{y} is not the canonical representative")

    @classmethod
    def from_vector(cls, y) -> "SurfacePoint":
        """Scale any nonzero integer vector on the quadric to canonical form."""
        return cls(_canonical(tuple(int(c) for c in y)))

    @property
    def point_class(self) -> PointClass:
        if all(self.y):
            return PointClass.NONDEGENERATE
        return PointClass.DEGENERATE

    @property
    def is_degenerate(self) -> bool:
        return not all(self.y)


@dataclass(frozen=True)
class TParam:
    t: tuple[int, int, int, int]

    def __post_init__(self):
        t0, t1, t2, t3 = self.t
        if not (t0 and t1 and t2 and t3):
            raise DomainError(f"parameters must be nonzero: {self.t}")
        if math.gcd(t0, t1) != 1 or math.gcd(t2, t3) != 1:
            raise DomainError(f"gcd(t0,t1) and gcd(t2,t3) must be 1: {self.t}")
        if t0 < 0 or t2 < 0:
            raise DomainError(f"gauge requires t0 > 0 and t2 > 0: {self.t}")

    @classmethod
    def normalized(cls, t) -> "TParam":
        """Move an arbitrary coprime-pair parameter into the t0, t2 > 0 gauge."""
        t0, t1, t2, t3 = (int(c) for c in t)
        if t0 < 0:
            t0, t1 = -t0, -t1
        if t2 < 0:
            t2, t3 = -t2, -t3
        return cls((t0, t1, t2, t3))


def height(point: SurfacePoint) -> int:
    m = max(abs(c) for c in point.y)
    return m * m


def param_to_point(t: TParam) -> SurfacePoint:
    t0, t1, t2, t3 = t.t
    return SurfacePoint((t0 * t2, t1 * t3, t0 * t3, t1 * t2))


def point_to_param(point: SurfacePoint) -> TParam:
    if point.is_degenerate:
        raise DomainError(f"{point.y} is degenerate; no parameter exists")
    y0, y1, y2, y3 = point.y
    t0 = math.gcd(y0, y2)
    t2, t3 = y0 // t0, y2 // t0
    t1 = y1 // t3
    # y0 > 0 on canonical points, so t2 = y0 / t0 is already positive.
    return TParam((t0, t1, t2, t3))


def _primitive_pairs(s: int) -> Iterator[tuple[int, int]]:
    """Canonical primitive (a, b) with max(|a|, |b|) <= s and both nonzero."""
    for a in range(1, s + 1):
        for b in range(-s, s + 1):
            if b and math.gcd(a, b) == 1:
                yield a, b


# Zero positions for each degenerate pattern and the two coordinates that stay free.
DEGENERATE_PATTERNS = (((0, 2), (1, 3)), ((0, 3), (1, 2)),
                       ((1, 2), (0, 3)), ((1, 3), (0, 2)))
AXES = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def enumerate_degenerate(B: int) -> Iterator[SurfacePoint]:
    s = math.isqrt(B)
    if s < 1:
        return
    for _, (i, j) in DEGENERATE_PATTERNS:
        for a, b in _primitive_pairs(s):
            y = [0, 0, 0, 0]
            y[i], y[j] = a, b
            yield SurfacePoint(tuple(y))
    for y in AXES:
        yield SurfacePoint(y)


def iter_params(B: int, t0_range: tuple[int, int] | None = None) -> Iterator[TParam]:
    """Gauge-fixed parameters of the nondegenerate points of height <= B.

    ``t0_range`` is an inclusive interval used to partition the work.
    """
    s = math.isqrt(B)
    lo, hi = t0_range if t0_range else (1, s)
    lo, hi = max(lo, 1), min(hi, s)
    for t0 in range(lo, hi + 1):
        bound23 = s // t0
        for t2 in range(1, bound23 + 1):
            for t3 in range(-bound23, bound23 + 1):
                if t3 == 0 or math.gcd(t2, t3) != 1:
                    continue
                bound1 = s // max(t2, abs(t3))
                for t1 in range(-bound1, bound1 + 1):
                    if t1 and math.gcd(t0, t1) == 1:
                        yield TParam((t0, t1, t2, t3))


def enumerate_points(B: int, t0_range: tuple[int, int] | None = None,
                     degenerate: bool = True) -> Iterator[tuple[SurfacePoint, PointClass]]:
    """Every canonical point of height <= B exactly once.

    With ``t0_range`` only that slice of the nondegenerate points is produced;
    degenerate points form their own partition controlled by ``degenerate``.
    """
    if B < 1 or B > MAX_HEIGHT:
        raise DomainError(f"height bound {B} outside [1, 2^62]")
    for t in iter_params(B, t0_range):
        yield param_to_point(t), PointClass.NONDEGENERATE
    if degenerate:
        for pt in enumerate_degenerate(B):
            yield pt, PointClass.DEGENERATE


def brute_force_points(B: int) -> set[tuple[int, int, int, int]]:
    """Independent scan of all integer quadruples in the box [-sqrt B, sqrt B]^4.

    y3 is solved from the other three coordinates; returns canonical primitive
    solutions.  Memory grows like (2 sqrt B + 1)^3, so keep B <= ~2*10^4.
    """
    s = math.isqrt(B)
    r = np.arange(-s, s + 1, dtype=np.int64)
    y0, y1, y2 = np.meshgrid(r, r, r, indexing="ij")
    y0, y1, y2 = y0.ravel(), y1.ravel(), y2.ravel()
    prod = y0 * y1
    out = []

    nz = y2 != 0
    q = np.zeros_like(prod)
    q[nz] = prod[nz] // y2[nz]
    ok = nz & (q * y2 == prod) & (np.abs(q) <= s)
    out.append(np.stack([y0[ok], y1[ok], y2[ok], q[ok]], axis=1))

    zero = (~nz) & (prod == 0)
    base = np.stack([y0[zero], y1[zero], y2[zero]], axis=1)
    for y3 in r:
        out.append(np.column_stack([base, np.full(len(base), y3)]))

    pts = np.concatenate(out)
    g = np.gcd.reduce(np.abs(pts), axis=1)
    pts = pts[g == 1]
    first = np.where(pts[:, 0] != 0, pts[:, 0],
                     np.where(pts[:, 1] != 0, pts[:, 1],
                              np.where(pts[:, 2] != 0, pts[:, 2], pts[:, 3])))
    pts = pts[first > 0]
    return {tuple(int(c) for c in row) for row in pts}


def reduced_fiber_form(t: TParam, table: SpfTable | None = None) -> DiagonalForm:
    u0, u1, u2, u3 = (squarefree_core(c, table).core for c in t.t)
    return DiagonalForm((u0 * u2, u1 * u3, u0 * u3, u1 * u2))


def raw_fiber_form(t: TParam) -> DiagonalForm:
    t0, t1, t2, t3 = t.t
    return DiagonalForm((t0 * t2, t1 * t3, t0 * t3, t1 * t2))


def fiber_form(point: SurfacePoint) -> DiagonalForm:
    if point.is_degenerate:
        raise DomainError(f"fiber over degenerate point {point.y} is not a rank-4 form")
    return DiagonalForm(point.y)


def thin_set_member(point: SurfacePoint) -> bool:
    if point.is_degenerate:
        raise DomainError("thin-set test is defined on nondegenerate points")
    y0, _, y2, y3 = point.y
    return is_perfect_square(-y0 * y2) or is_perfect_square(-y0 * y3)


def anti_diagonal_member(point: SurfacePoint) -> bool:
    y0, y1, y2, y3 = point.y
    return y0 + y2 == 0 and y1 + y3 == 0
