"""Optimal displacement of one vertex (the Max-Min-Angle problem).

Given a vertex at ``p``, its neighbours and a radius ``r``, find ``p*`` with
``|p p*| <= r`` maximising the smallest angle between incident edges.
Degrees up to three are solved from closed-form constructions and a quartic;
higher degrees use a square grid of step ``delta_ratio * r`` around ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .geometry import (
    COINCIDENT_EPS,
    DegenerateInputError,
    IntersectionKind,
    Point,
    Polynomial,
    SimilarityTransform,
    angle_at,
    as_point,
    canonical_two_point_frame,
    cross,
    min_incident_angle,
    real_roots,
    segment_disk_intersection,
)

TIE_EPS = 1e-12
CASE_I_REL = 1e-9
CIRCLE_REL = 1e-7
EQ4_REL = 1e-6
DEDUPE_REL = 1e-9


class MMAError(RuntimeError):
    """Numerical failure inside a solver that should be impossible for valid input."""


class Method(str, Enum):
    UNCHANGED = "unchanged"
    RATIO_POINT = "ratio_point"
    CLIPPED_RATIO = "clipped_ratio"
    TANGENT_CIRCLE = "tangent_circle"
    FERMAT = "fermat"
    PAIRWISE_MAX_ANGLE = "pairwise_max_angle"
    EQUAL_PAIR_QUARTIC = "equal_pair_quartic"
    GRID = "grid"
    ORACLE = "oracle"


@dataclass(frozen=True)
class DisplacementQuery:
    p: Point
    neighbors: tuple[Point, ...]
    r: float

    def __post_init__(self):
        object.__setattr__(self, "p", as_point(self.p))
        object.__setattr__(self, "neighbors", tuple(as_point(n) for n in self.neighbors))
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise ValueError(f"radius must be positive and finite, got {self.r}")
        for q in (self.p, *self.neighbors):
            if not (math.isfinite(q.x) and math.isfinite(q.y)):
                raise ValueError(f"non-finite point {q}")


@dataclass(frozen=True)
class DisplacementResult:
    p_star: Point
    min_angle: float
    method: Method
    degenerate: bool = False


@dataclass(frozen=True)
class GridParams:
    delta_ratio: float = 1.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.delta_ratio <= 1.0:
            raise ValueError("delta_ratio must lie in (0, 1]")


@dataclass(frozen=True)
class TangentCircleSolution:
    """Circle through A=(0,-1), B=(0,1) touching circle Z, in the canonical frame."""

    o: Point
    r_prime: float
    p_star_canonical: Point


@dataclass(frozen=True)
class EqualPairReduction:
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]
    d: tuple[float, ...]
    e: tuple[float, ...]
    case: str
    scale_applied: float


# ----------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------


def _score(q: Point, neighbors: Sequence[Point]) -> float:
    try:
        return min_incident_angle(q, neighbors)
    except DegenerateInputError:
        return -math.inf


def _clamp_to_disk(p: Point, q: Point, r: float) -> Point:
    d = q.dist(p)
    if d <= r:
        return q
    return p + (q - p).scaled(r / d)


def _pick_best(p: Point, scored: Iterable[tuple[Point, float, Method]]):
    """Argmax of the angle; ties within 1e-12 go to the point nearest ``p``, then lexicographic."""
    scored = list(scored)
    best = max(s for _, s, _ in scored)
    if best == -math.inf:
        return None
    tied = [item for item in scored if item[1] >= best - TIE_EPS]
    return min(tied, key=lambda it: (it[0].dist(p), it[0].x, it[0].y))


def merge_neighbors(neighbors: Sequence[Point]) -> list[Point]:
    out: list[Point] = []
    for n in neighbors:
        if all(n.dist(m) > COINCIDENT_EPS for m in out):
            out.append(n)
    return out


def _unchanged(p: Point, neighbors: Sequence[Point], degenerate: bool = False) -> DisplacementResult:
    score = _score(p, neighbors) if neighbors else math.tau
    if score == -math.inf:
        return DisplacementResult(p, 0.0, Method.UNCHANGED, True)
    return DisplacementResult(p, score, Method.UNCHANGED, degenerate)


def _finish(p: Point, neighbors: Sequence[Point], q: Point, method: Method, r: float) -> DisplacementResult:
    q = _clamp_to_disk(p, q, r)
    score = _score(q, neighbors)
    if score == -math.inf:
        return _unchanged(p, neighbors, degenerate=True)
    return DisplacementResult(q, score, method)


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------


def solve(query: DisplacementQuery, grid: GridParams = GridParams()) -> DisplacementResult:
    """Solve one MMA instance, dispatching on the number of distinct neighbours."""
    p, r = query.p, query.r
    neighbors = merge_neighbors(query.neighbors)
    k = len(neighbors)
    if k <= 1:
        return _unchanged(p, neighbors)
    if k == 2:
        return solve_degree2(p, neighbors[0], neighbors[1], r)
    if k == 3:
        return solve_degree3(p, neighbors[0], neighbors[1], neighbors[2], r)
    return solve_grid(p, neighbors, r, grid)


# ----------------------------------------------------------------------
# degree 2
# ----------------------------------------------------------------------


def ratio_point(p: Point, a: Point, b: Point) -> Point:
    """Point Q on AB with |AQ|/|BQ| = |AP|/|BP|."""
    ap, bp = a.dist(p), b.dist(p)
    t = ap / (ap + bp)
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def _segment_candidate(p: Point, a: Point, b: Point, r: float):
    """Degree-2 answer when AB meets the disk; ``None`` when it misses."""
    inter = segment_disk_intersection(a, b, p, r)
    if inter.kind is IntersectionKind.EMPTY:
        return None
    q = ratio_point(p, a, b)
    if q.dist(p) <= r:
        cand, method = q, Method.RATIO_POINT
    else:
        cand = min(inter.endpoints, key=lambda e: (e.dist(q), e.x, e.y))
        method = Method.CLIPPED_RATIO
    if min(cand.dist(a), cand.dist(b)) <= COINCIDENT_EPS and inter.kind is IntersectionKind.SEGMENT:
        # Q landed on a neighbour (p sits on it); back off to the middle of the clipped piece.
        e0, e1 = inter.endpoints
        cand = Point(0.5 * (e0.x + e1.x), 0.5 * (e0.y + e1.y))
    return cand, method


def solve_degree2(p, a, b, r: float) -> DisplacementResult:
    p, a, b = as_point(p), as_point(a), as_point(b)
    neighbors = [a, b]
    if a.dist(b) <= COINCIDENT_EPS:
        return _unchanged(p, [a], degenerate=True)
    seg = _segment_candidate(p, a, b, r)
    if seg is not None:
        return _finish(p, neighbors, seg[0], seg[1], r)
    _, p_star = max_angle_point(p, a, b, r)
    return _finish(p, neighbors, p_star, Method.TANGENT_CIRCLE, r)


def _tangent_candidates(pc: Point, rc: float) -> list[tuple[Point, float, Point]]:
    """Circles through (0,-1), (0,1) tangent to circle(pc, rc).

    Returns ``(O, r', P*)`` with signed ``r'``: positive roots touch Z from
    outside, negative ones enclose it.
    """
    px, py = pc
    k = px * px + py * py - rc * rc - 1.0
    out = []
    if abs(px) <= COINCIDENT_EPS * max(1.0, pc.norm()):
        # P on the line AB: the linear relation for x vanishes, r' is explicit.
        rp = k / (2.0 * rc)
        half = math.sqrt(max(rp * rp - 1.0, 0.0))
        xs = [(half, rp), (-half, rp)]
    else:
        # 2 Px x = K - 2 r r', substituted into x^2 + 1 = r'^2
        quad = Polynomial([k * k + 4.0 * px * px, -4.0 * k * rc, 4.0 * rc * rc - 4.0 * px * px])
        xs = [((k - 2.0 * rc * rp) / (2.0 * px), rp) for rp in real_roots(quad)]
    for x, rp in xs:
        denom = rc + rp
        if abs(denom) <= COINCIDENT_EPS:
            continue
        o = Point(x, 0.0)
        p_star = pc + (o - pc).scaled(rc / denom)
        out.append((o, rp, p_star))
    return out


def max_angle_point(p, a, b, r: float) -> tuple[TangentCircleSolution, Point]:
    """Point on circle(p, r) maximising the angle a-p*-b (segment ab misses the disk)."""
    p, a, b = as_point(p), as_point(a), as_point(b)
    frame = canonical_two_point_frame(a, b)
    pc, rc = frame(p), r * frame.scale
    ca, cb = Point(0.0, -1.0), Point(0.0, 1.0)
    cands = _tangent_candidates(pc, rc)
    if not cands:
        raise MMAError(f"no tangent circle for p={p}, a={a}, b={b}, r={r}")
    o, rp, p_star_c = max(cands, key=lambda c: angle_at(c[2], ca, cb))
    p_star = _clamp_to_disk(p, frame.inverse()(p_star_c), r)
    return TangentCircleSolution(o, abs(rp), p_star_c), p_star


def tangent_points(p: Point, a: Point, b: Point, r: float) -> list[Point]:
    """Every tangency point of the circles through a and b touching circle(p, r)."""
    frame = canonical_two_point_frame(a, b)
    inv = frame.inverse()
    return [_clamp_to_disk(p, inv(c[2]), r) for c in _tangent_candidates(frame(p), r * frame.scale)]


# ----------------------------------------------------------------------
# Fermat point
# ----------------------------------------------------------------------


def fermat_point(a, b, c) -> tuple[Point, str]:
    """Fermat (Torricelli) point of triangle abc.

    Returns ``(F, "isogonic")`` when every triangle angle is below 120 degrees,
    otherwise ``(vertex, "vertex")`` for the vertex carrying the wide angle.
    """
    a, b, c = as_point(a), as_point(b), as_point(c)
    area2 = cross(a, b, c)
    scale = max(a.dist(b), b.dist(c), c.dist(a))
    if scale <= COINCIDENT_EPS or abs(area2) <= 1e-12 * scale * scale:
        raise DegenerateInputError("Fermat point of a collinear triangle")
    for v, u, w in ((a, b, c), (b, c, a), (c, a, b)):
        ux, uy = u.x - v.x, u.y - v.y
        wx, wy = w.x - v.x, w.y - v.y
        # angle >= 120 deg  <=>  cos <= -1/2
        if ux * wx + uy * wy <= -0.5 * math.hypot(ux, uy) * math.hypot(wx, wy):
            return v, "vertex"
    a_apex = _outward_apex(b, c, a)
    b_apex = _outward_apex(c, a, b)
    return _line_intersection(a, a_apex, b, b_apex), "isogonic"


def _outward_apex(u: Point, w: Point, opposite: Point) -> Point:
    """Apex of the equilateral triangle on uw, on the side away from ``opposite``."""
    mx, my = 0.5 * (u.x + w.x), 0.5 * (u.y + w.y)
    h = math.sqrt(3.0) / 2.0
    nx, ny = -(w.y - u.y) * h, (w.x - u.x) * h
    if (opposite.x - mx) * nx + (opposite.y - my) * ny > 0.0:
        nx, ny = -nx, -ny
    return Point(mx + nx, my + ny)


def _line_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Point:
    d1x, d1y = p2.x - p1.x, p2.y - p1.y
    d2x, d2y = q2.x - q1.x, q2.y - q1.y
    den = d1x * d2y - d1y * d2x
    if den == 0.0:
        raise DegenerateInputError("parallel lines")
    t = ((q1.x - p1.x) * d2y - (q1.y - p1.y) * d2x) / den
    return Point(p1.x + t * d1x, p1.y + t * d1y)


# ----------------------------------------------------------------------
# degree 3
# ----------------------------------------------------------------------


def solve_degree3(p, a, b, c, r: float) -> DisplacementResult:
    """Best of the Fermat point, equal-pair quartic roots, pairwise optima and ``p``."""
    p, a, b, c = as_point(p), as_point(a), as_point(b), as_point(c)
    neighbors = [a, b, c]
    cands: list[tuple[Point, Method]] = []
    try:
        f, kind = fermat_point(a, b, c)
    except DegenerateInputError:
        f, kind = None, None
    if f is not None and f.dist(p) <= r:
        if kind == "isogonic":
            # all three gaps equal 2pi/3 there, and they always sum to 2pi
            return DisplacementResult(f, _score(f, neighbors), Method.FERMAT)
        cands.append((f, Method.FERMAT))
    for u, apex, w in ((b, a, c), (a, b, c), (a, c, b)):
        cands.extend((q, Method.EQUAL_PAIR_QUARTIC) for q in solve_equal_pair(p, u, apex, w, r))
    for u, w in ((a, b), (a, c), (b, c)):
        if u.dist(w) <= COINCIDENT_EPS:
            continue
        seg = _segment_candidate(p, u, w, r)
        if seg is not None:
            cands.append(seg)
        else:
            cands.extend((q, Method.PAIRWISE_MAX_ANGLE) for q in tangent_points(p, u, w, r))
    cands.append((p, Method.UNCHANGED))

    kept: list[tuple[Point, Method]] = []
    for q, m in cands:
        q = _clamp_to_disk(p, q, r)
        if all(q.dist(k) > DEDUPE_REL * r for k, _ in kept):
            kept.append((q, m))
    best = _pick_best(p, ((q, _score(q, neighbors), m) for q, m in kept))
    if best is None:
        return _unchanged(p, neighbors, degenerate=True)
    q, score, method = best
    return DisplacementResult(q, score, method)


def _rotation_leveling(a: Point, c: Point) -> float:
    """Rotation angle making the segment ac horizontal."""
    return -math.atan2(c.y - a.y, c.x - a.x)


def equal_pair_reduction(pa: Point, pb: Point, pc: Point, r: float, case: str, scale: float) -> EqualPairReduction:
    """Coefficient cascade for |CP|(|BP|^2+|AP|^2-|AB|^2) = |AP|(|BP|^2+|CP|^2-|BC|^2), P on x^2+y^2=r^2.

    Inputs are already in the leveled frame (P at the origin, A_y == C_y).
    """
    ax, ay = pa
    bx, by = pb
    cx, cy = pc
    rr = r * r
    a1, a2, a3 = -2.0 * cx, -2.0 * cy, rr + cx * cx + cy * cy
    a4, a5, a6 = -(ax + bx), -(ay + by), bx * ax + by * ay + rr
    b1, b2, b3 = -2.0 * ax, -2.0 * ay, rr + ax * ax + ay * ay
    b4, b5, b6 = -(bx + cx), -(by + cy), bx * cx + by * cy + rr

    c1 = a1 * a4 * a4 - b1 * b4 * b4
    c2 = a2 * a5 * a5 - b2 * b5 * b5
    c3 = 2 * a1 * a4 * a6 + a3 * a4 * a4 - (2 * b1 * b4 * b6 + b3 * b4 * b4)
    c4 = 2 * a2 * a5 * a6 + a3 * a5 * a5 - (2 * b2 * b5 * b6 + b3 * b5 * b5)
    c5 = 2 * a1 * a4 * a5 + a2 * a4 * a4 - (2 * b1 * b4 * b5 + b2 * b4 * b4)
    c6 = 2 * a2 * a4 * a5 + a1 * a5 * a5 - (2 * b2 * b4 * b5 + b1 * b5 * b5)
    c7 = 2 * a3 * a4 * a6 + a1 * a6 * a6 - (2 * b3 * b4 * b6 + b1 * b6 * b6)
    c8 = 2 * a3 * a5 * a6 + a2 * a6 * a6 - (2 * b3 * b5 * b6 + b2 * b6 * b6)
    c9 = 2 * (a1 * a5 * a6 + a2 * a4 * a6 + a3 * a4 * a5 - (b1 * b5 * b6 + b2 * b4 * b6 + b3 * b4 * b5))
    c10 = a3 * a6 * a6 - b3 * b6 * b6

    d1, d2 = c1 - c6, c3 - c4
    d3, d4 = c6 * rr + c7, c4 * rr + c10
    d5, d6, d7 = c5 - c2, c9, c2 * rr + c8

    e1 = d1 * d1 + d5 * d5
    e2 = 2 * (d1 * d2 + d5 * d6)
    e3 = d2 * d2 + 2 * d1 * d3 - (d5 * d5 * rr - (d6 * d6 + 2 * d5 * d7))
    e4 = 2 * (d1 * d4 + d2 * d3) - 2 * (d5 * d6 * rr - d6 * d7)
    e5 = (d3 * d3 + 2 * d2 * d4) - ((d6 * d6 + 2 * d5 * d7) * rr - d7 * d7)
    e6 = 2 * d3 * d4 - 2 * d6 * d7 * rr
    e7 = d4 * d4 - d7 * d7 * rr
    return EqualPairReduction(
        a=(a1, a2, a3, a4, a5, a6),
        b=(b1, b2, b3, b4, b5, b6),
        c=(c1, c2, c3, c4, c5, c6, c7, c8, c9, c10),
        d=(d1, d2, d3, d4, d5, d6, d7),
        e=(e1, e2, e3, e4, e5, e6, e7),
        case=case,
        scale_applied=scale,
    )


def equal_pair_frame(p, a, apex, c, r: float):
    """Level and scale an equal-pair instance.

    Returns ``(transform, reduction, (A, B, C, r))`` where the transform maps
    the original plane into the working frame in which the quartic is solved.
    """
    p, a, apex, c = as_point(p), as_point(a), as_point(apex), as_point(c)
    rot = SimilarityTransform(_rotation_leveling(a, c), 1.0)
    level = SimilarityTransform(rot.rotation, 1.0, rot(p).scaled(-1.0))
    la, lb, lc = level(a), level(apex), level(c)
    ay = 0.5 * (la.y + lc.y)
    la, lc = Point(la.x, ay), Point(lc.x, ay)
    s2 = ay * ay - r * r
    if abs(s2) <= CASE_I_REL * r * r:
        case, k = "I", 1.0
    else:
        case = "II" if s2 > 0 else "III"
        k = 1.0 / math.sqrt(abs(s2))
    frame = SimilarityTransform(level.rotation, k, level.translation.scaled(k))
    sa, sb, sc, sr = la.scaled(k), lb.scaled(k), lc.scaled(k), r * k
    return frame, equal_pair_reduction(sa, sb, sc, sr, case, k), (sa, sb, sc, sr)


def equal_pair_quartic(red: EqualPairReduction) -> Polynomial:
    e1, e2, e3, e4, e5, _, _ = red.e
    if red.case == "I":
        return Polynomial([0.0, e4, e3, e2, e1])
    if red.case == "II":
        return Polynomial([e5 - (e3 - e1), e4 - e2, e3 - e1, e2, e1])
    return Polynomial([e5 + (e3 + e1), e4 + e2, e3 + e1, e2, e1])


def sextic(red: EqualPairReduction) -> Polynomial:
    return Polynomial(list(reversed(red.e)))


def _eq4_residual(q: Point, a: Point, b: Point, c: Point) -> float:
    ap2 = (q.x - a.x) ** 2 + (q.y - a.y) ** 2
    bp2 = (q.x - b.x) ** 2 + (q.y - b.y) ** 2
    cp2 = (q.x - c.x) ** 2 + (q.y - c.y) ** 2
    ab2 = (a.x - b.x) ** 2 + (a.y - b.y) ** 2
    bc2 = (b.x - c.x) ** 2 + (b.y - c.y) ** 2
    lhs = math.sqrt(cp2) * (bp2 + ap2 - ab2)
    rhs = math.sqrt(ap2) * (bp2 + cp2 - bc2)
    scale = math.sqrt(cp2) * (bp2 + ap2 + ab2) + math.sqrt(ap2) * (bp2 + cp2 + bc2)
    return abs(lhs - rhs) / scale if scale > 0.0 else math.inf


def _polish_on_circle(phi: float, r: float, a: Point, b: Point, c: Point) -> float:
    """Secant refinement of angle(a,q,b) = angle(b,q,c) along the circle of radius r."""

    def g(t: float) -> float:
        q = Point(r * math.cos(t), r * math.sin(t))
        return angle_at(q, a, b) - angle_at(q, b, c)

    t0, g0 = phi, g(phi)
    t1 = phi + 1e-7
    g1 = g(t1)
    for _ in range(8):
        if g1 == g0 or g0 == 0.0:
            break
        t2 = t1 - g1 * (t1 - t0) / (g1 - g0)
        t0, g0, t1, g1 = t1, g1, t2, g(t2)
        if abs(t1 - t0) < 1e-15:
            break
    best = t1 if abs(g1) <= abs(g0) else t0
    return best if abs(best - phi) < 1e-3 and abs(g(best)) <= abs(g(phi)) else phi


def solve_equal_pair(p, a, apex, c, r: float) -> list[Point]:
    """Boundary points where the two angles at ``apex`` (a-p*-apex and apex-p*-c) are equal."""
    p = as_point(p)
    try:
        frame, red, (sa, sb, sc, sr) = equal_pair_frame(p, a, apex, c, r)
    except DegenerateInputError:
        return []
    if sa.dist(sc) <= COINCIDENT_EPS:
        return []
    quartic = equal_pair_quartic(red)
    if quartic.is_zero() or quartic.degree < 1:
        return []
    d1, d2, d3, d4, d5, d6, d7 = red.d
    rr = sr * sr
    inverse = frame.inverse()
    out: list[Point] = []
    for x in real_roots(quartic, (-sr, sr)):
        num = ((d1 * x + d2) * x + d3) * x + d4
        den = (d5 * x + d6) * x + d7
        den_scale = abs(d5) * x * x + abs(d6) * abs(x) + abs(d7)
        ys = []
        if abs(den) > 1e-9 * den_scale:
            y = -num / den
            if abs(x * x + y * y - rr) <= CIRCLE_REL * rr:
                ys.append(y)
        if not ys:
            h = math.sqrt(max(rr - x * x, 0.0))
            ys = [h, -h] if h > 0.0 else [0.0]
        for y in ys:
            phi = _polish_on_circle(math.atan2(y, x), sr, sa, sb, sc)
            q = Point(sr * math.cos(phi), sr * math.sin(phi))
            if _eq4_residual(q, sa, sb, sc) > EQ4_REL:
                continue
            back = inverse(q)
            d = back.dist(p)
            if d > 0.0:
                back = p + (back - p).scaled(r / d)
            out.append(back)
    return out


# ----------------------------------------------------------------------
# degree >= 4
# ----------------------------------------------------------------------


def grid_points(p: Point, r: float, grid: GridParams) -> list[Point]:
    """Grid points p + (i, j) * delta inside the closed disk, row-major in (i, j)."""
    delta = grid.delta_ratio * r
    n = int(math.floor(1.0 / grid.delta_ratio + 1e-9))
    limit = (1.0 / grid.delta_ratio) ** 2 * (1.0 + 1e-12)
    pts = []
    for i in range(-n, n + 1):
        for j in range(-n, n + 1):
            if i * i + j * j <= limit:
                pts.append(Point(p.x + i * delta, p.y + j * delta))
    return pts


def solve_grid(p, neighbors: Sequence, r: float, grid: GridParams = GridParams()) -> DisplacementResult:
    p = as_point(p)
    neighbors = [as_point(n) for n in neighbors]
    best = _pick_best(p, ((q, _score(q, neighbors), Method.GRID) for q in grid_points(p, r, grid)))
    if best is None:
        return _unchanged(p, neighbors, degenerate=True)
    return DisplacementResult(best[0], best[1], Method.GRID)
