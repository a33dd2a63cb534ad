"""Planar primitives shared by the displacement solvers.

Points are plain named tuples so they stay cheap inside the layout loop.
Angles are radians everywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi

COINCIDENT_EPS = 1e-12
TANGENCY_REL_EPS = 1e-9
ROOT_RESIDUAL_REL = 1e-9
ROOT_CLUSTER_REL = 1e-7


class DegenerateInputError(ValueError):
    """Raised when input points coincide or are otherwise degenerate."""


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def scaled(self, s: float) -> "Point":
        return Point(self.x * s, self.y * s)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other) -> float:
        return math.hypot(self.x - other[0], self.y - other[1])


def as_point(obj) -> Point:
    return obj if isinstance(obj, Point) else Point(float(obj[0]), float(obj[1]))


def cross(o, a, b) -> float:
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def angle_at(vertex, a, b) -> float:
    """Unsigned angle a-vertex-b in [0, pi]."""
    ux, uy = a[0] - vertex[0], a[1] - vertex[1]
    vx, vy = b[0] - vertex[0], b[1] - vertex[1]
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


# ----------------------------------------------------------------------
# Similarity transforms
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityTransform:
    """``T(p) = scale * R(rotation) p + translation`` (orientation preserving)."""

    rotation: float = 0.0
    scale: float = 1.0
    translation: Point = Point(0.0, 0.0)
    _cos: float = field(init=False, repr=False, compare=False)
    _sin: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be positive and finite, got {self.scale}")
        object.__setattr__(self, "translation", as_point(self.translation))
        object.__setattr__(self, "_cos", math.cos(self.rotation))
        object.__setattr__(self, "_sin", math.sin(self.rotation))

    def __call__(self, p) -> Point:
        c, s, k = self._cos, self._sin, self.scale
        x, y = p[0], p[1]
        return Point(k * (c * x - s * y) + self.translation.x,
                     k * (s * x + c * y) + self.translation.y)

    def apply_vector(self, v) -> Point:
        c, s, k = self._cos, self._sin, self.scale
        return Point(k * (c * v[0] - s * v[1]), k * (s * v[0] + c * v[1]))

    def inverse(self) -> "SimilarityTransform":
        inv_scale = 1.0 / self.scale
        c, s = self._cos, self._sin
        tx, ty = self.translation
        # R(-t) (-T) / k
        return SimilarityTransform(
            rotation=-self.rotation,
            scale=inv_scale,
            translation=Point(-(c * tx + s * ty) * inv_scale, -(-s * tx + c * ty) * inv_scale),
        )

    def compose(self, other: "SimilarityTransform") -> "SimilarityTransform":
        """Return ``self o other`` (apply ``other`` first)."""
        t = self(other.translation)
        return SimilarityTransform(self.rotation + other.rotation, self.scale * other.scale, t)


def canonical_two_point_frame(a, b) -> SimilarityTransform:
    """Similarity sending ``a`` to (0, -1) and ``b`` to (0, 1)."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    length = math.hypot(dx, dy)
    if length <= COINCIDENT_EPS:
        raise DegenerateInputError("canonical frame needs two distinct points")
    rotation = math.pi / 2.0 - math.atan2(dy, dx)
    scale = 2.0 / length
    mid = Point(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
    partial = SimilarityTransform(rotation, scale)
    return SimilarityTransform(rotation, scale, partial(mid).scaled(-1.0))


# ----------------------------------------------------------------------
# Angles
# ----------------------------------------------------------------------


def angular_gaps(q, neighbors: Sequence) -> list[float]:
    """Gaps between angularly consecutive directions from ``q``; they sum to 2*pi."""
    if not neighbors:
        raise ValueError("at least one neighbor is required")
    qx, qy = q[0], q[1]
    dirs = []
    for n in neighbors:
        dx, dy = n[0] - qx, n[1] - qy
        if math.hypot(dx, dy) <= COINCIDENT_EPS:
            raise DegenerateInputError(f"neighbor {tuple(n)} coincides with {tuple(q)}")
        dirs.append(math.atan2(dy, dx))
    if len(dirs) == 1:
        return [TWO_PI]
    dirs.sort()
    gaps = [dirs[i + 1] - dirs[i] for i in range(len(dirs) - 1)]
    gaps.append(TWO_PI - (dirs[-1] - dirs[0]))
    return gaps


def min_incident_angle(q, neighbors: Sequence) -> float:
    """Smallest angle between consecutive edges from ``q`` to ``neighbors``.

    A single neighbor gives 2*pi. Raises :class:`DegenerateInputError` if a
    neighbor sits on ``q``.
    """
    return min(angular_gaps(q, neighbors))


# ----------------------------------------------------------------------
# Segment / disk clipping
# ----------------------------------------------------------------------


class IntersectionKind(str, Enum):
    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"


class DiskSegmentIntersection(NamedTuple):
    kind: IntersectionKind
    endpoints: tuple[Point, ...]


def segment_disk_intersection(a, b, center, r: float) -> DiskSegmentIntersection:
    """Portion of the closed segment ``[a, b]`` inside the closed disk ``(center, r)``.

    A line within ``1e-9 * r`` of tangency is treated as touching at the foot
    of the perpendicular.
    """
    a, b, center = as_point(a), as_point(b), as_point(center)
    d = b - a
    dd = d.x * d.x + d.y * d.y
    if math.sqrt(dd) <= COINCIDENT_EPS:
        raise DegenerateInputError("segment endpoints coincide")
    w = a - center
    t_foot = -(w.x * d.x + w.y * d.y) / dd
    foot = a + d.scaled(t_foot)
    h = foot.dist(center)
    tol = TANGENCY_REL_EPS * r
    empty = DiskSegmentIntersection(IntersectionKind.EMPTY, ())
    if h > r + tol:
        return empty
    if abs(h - r) <= tol:
        if 0.0 <= t_foot <= 1.0:
            return DiskSegmentIntersection(IntersectionKind.POINT, (foot,))
        return empty
    half = math.sqrt(max(r * r - h * h, 0.0) / dd)
    t0, t1 = max(t_foot - half, 0.0), min(t_foot + half, 1.0)
    if t0 > t1:
        return empty
    p0 = a + d.scaled(t0)
    if t0 == t1:
        return DiskSegmentIntersection(IntersectionKind.POINT, (p0,))
    return DiskSegmentIntersection(IntersectionKind.SEGMENT, (p0, a + d.scaled(t1)))


# ----------------------------------------------------------------------
# Polynomials
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients; trailing zeros are trimmed."""

    coefficients: tuple[float, ...]

    def __init__(self, coefficients: Sequence[float]):
        coeffs = [float(c) for c in coefficients]
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs) or (0.0,))

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0.0:
            return -1
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if len(self.coefficients) <= 1:
            return Polynomial([0.0])
        return Polynomial([i * c for i, c in enumerate(self.coefficients) if i > 0])

    def max_abs_coefficient(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def residual_bound(self, x: float) -> float:
        return ROOT_RESIDUAL_REL * self.max_abs_coefficient() * max(1.0, abs(x)) ** self.degree

    def cauchy_bound(self) -> float:
        lead = self.coefficients[-1]
        return 1.0 + max(abs(c / lead) for c in self.coefficients[:-1]) if self.degree > 0 else 0.0


def _newton_polish(p: Polynomial, dp: Polynomial, x: float) -> float:
    slope = dp(x)
    if slope == 0.0:
        return x
    step = p(x) / slope
    x_new = x - step
    return x_new if abs(p(x_new)) <= abs(p(x)) else x


def _quadratic_roots(p: Polynomial) -> list[float]:
    c, b, a = p.coefficients
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        vertex = -b / (2.0 * a)
        return [vertex] if abs(p(vertex)) <= p.residual_bound(vertex) else []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return [0.0]
    return [q / a, c / q]


def _bracketed_roots(p: Polynomial, lo: float, hi: float) -> list[float]:
    """Roots of a degree 3-4 polynomial via monotone pieces between critical points."""
    dp = p.derivative()
    crit = real_roots(dp, (lo, hi))
    marks = [lo] + [c for c in crit if lo < c < hi] + [hi]
    roots: list[float] = []
    values = [p(m) for m in marks]
    for m, v in zip(marks, values):
        if abs(v) <= p.residual_bound(m):
            roots.append(m)
    span = max(hi - lo, 1e-300)
    for (u, fu), (w, fw) in zip(zip(marks, values), zip(marks[1:], values[1:])):
        if fu == 0.0 or fw == 0.0 or (fu > 0.0) == (fw > 0.0):
            continue
        x = brentq(p, u, w, xtol=1e-15 * span, rtol=1e-15, maxiter=200)
        roots.append(_newton_polish(p, dp, x))
    return roots


def _companion_roots(p: Polynomial) -> list[float]:
    dp = p.derivative()
    out = []
    for z in np.roots(list(reversed(p.coefficients))):
        if abs(z.imag) <= 1e-7 * max(1.0, abs(z)):
            x = float(z.real)
            for _ in range(3):
                x = _newton_polish(p, dp, x)
            out.append(x)
    return out


def real_roots(p: Polynomial, interval: tuple[float, float] | None = None) -> list[float]:
    """Real roots of ``p`` inside the closed ``interval`` (all real roots if ``None``).

    Degree <= 2 is closed form, degrees 3-4 bracket each monotone piece between
    critical points (so double roots are found as touching critical points),
    higher degrees fall back to companion-matrix eigenvalues. Roots closer than
    ``1e-7 * (hi - lo)`` are reported once.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    deg = p.degree
    if deg == 0:
        return []
    if interval is None:
        bound = p.cauchy_bound()
        lo, hi = -bound, bound
    else:
        lo, hi = float(interval[0]), float(interval[1])
        if lo > hi:
            raise ValueError("empty interval")
    if deg == 1:
        cands = [-p.coefficients[0] / p.coefficients[1]]
    elif deg == 2:
        cands = _quadratic_roots(p)
    elif deg <= 4:
        cands = _bracketed_roots(p, lo, hi)
    else:
        cands = _companion_roots(p)
    if deg == 2:
        dp = p.derivative()
        cands = [_newton_polish(p, dp, x) for x in cands]
    inside = sorted(x for x in cands if lo <= x <= hi and abs(p(x)) <= p.residual_bound(x))
    return _cluster(p, inside, ROOT_CLUSTER_REL * (hi - lo))


def _cluster(p: Polynomial, xs: list[float], gap: float) -> list[float]:
    out: list[float] = []
    for x in xs:
        if out and x - out[-1] <= gap:
            if abs(p(x)) < abs(p(out[-1])):
                out[-1] = x
            continue
        out.append(x)
    return out
