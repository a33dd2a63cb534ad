"""Brute-force MMA reference solver by dense sampling of the displacement disk.

Sample layout: the centre ``p`` first, then rings ``i = 1 .. disk_rings - 1``
of radius ``r * i / (disk_rings - 1)`` with ``boundary_samples`` equally spaced
angles each. The last ring is the boundary circle. The reported optimum is the
first sample (in that order) attaining the maximum, so the value is a lower
bound on the true optimum.

``pruned=True`` skips blocks of ring samples that a Lipschitz bound proves
cannot beat the running best; the result is the same argmax over the same set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point, as_point
from .mma import DisplacementQuery, DisplacementResult, Method, merge_neighbors

_CHUNK = 1 << 18


@dataclass(frozen=True)
class SamplingPlan:
    boundary_samples: int = 4096
    disk_rings: int = 64
    seed: int | None = None

    def __post_init__(self):
        if self.boundary_samples < 8:
            raise ValueError("boundary_samples must be at least 8")
        if self.disk_rings < 2:
            raise ValueError("disk_rings must be at least 2 (centre and boundary)")

    def ring_phases(self) -> np.ndarray:
        """Per-ring angular offsets; zero unless a jitter seed is given."""
        rings = self.disk_rings - 1
        if self.seed is None:
            return np.zeros(rings)
        rng = np.random.default_rng(self.seed)
        return rng.uniform(0.0, 2.0 * np.pi / self.boundary_samples, size=rings)


CI_PLAN = SamplingPlan(4096, 64)
ACCEPTANCE_PLAN = SamplingPlan(100_000, 256)


def min_gap_batch(qx: np.ndarray, qy: np.ndarray, neighbors) -> np.ndarray:
    """Vectorised smallest angular gap; samples on a neighbour score ``-inf``."""
    nb = np.asarray(neighbors, dtype=float).reshape(-1, 2)
    dx = nb[:, 0:1] - qx[None, :]
    dy = nb[:, 1:2] - qy[None, :]
    if len(nb) == 1:
        out = np.full(qx.shape, 2.0 * np.pi)
    else:
        ang = np.sort(np.arctan2(dy, dx), axis=0)
        gaps = np.diff(ang, axis=0)
        wrap = 2.0 * np.pi - (ang[-1] - ang[0])
        out = np.minimum(gaps.min(axis=0), wrap)
    coincident = (np.hypot(dx, dy) <= 1e-12).any(axis=0)
    out[coincident] = -np.inf
    return out


def _ring_points(p: Point, r: float, plan: SamplingPlan, ring: np.ndarray, idx: np.ndarray):
    """Coordinates of samples ``idx`` on rings ``ring`` (1-based ring numbers)."""
    rho = r * ring / (plan.disk_rings - 1)
    phi = 2.0 * np.pi * idx / plan.boundary_samples + plan.ring_phases()[ring - 1]
    return p.x + rho * np.cos(phi), p.y + rho * np.sin(phi)


def _evaluate(p, r, plan, neighbors, ring, idx) -> np.ndarray:
    out = np.empty(len(ring))
    for s in range(0, len(ring), _CHUNK):
        qx, qy = _ring_points(p, r, plan, ring[s:s + _CHUNK], idx[s:s + _CHUNK])
        out[s:s + _CHUNK] = min_gap_batch(qx, qy, neighbors)
    return out


def _brute_force(p, r, plan, neighbors):
    n, rings = plan.boundary_samples, plan.disk_rings - 1
    best_val = float(min_gap_batch(np.array([p.x]), np.array([p.y]), neighbors)[0])
    best_key = (0, 0)
    for ring in range(1, rings + 1):
        vals = _evaluate(p, r, plan, neighbors, np.full(n, ring), np.arange(n))
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_key = float(vals[j]), (ring, j)
    return best_val, best_key


def _lipschitz(p: Point, r: float, neighbors) -> float | None:
    """Bound on |grad| of the min-gap over the disk, or ``None`` if a neighbour is too close."""
    if len(neighbors) == 1:
        return 0.0
    clearance = min(p.dist(n) for n in neighbors) - r
    if clearance <= 1e-6 * r:
        return None
    return 2.0 / clearance


def _pruned(p, r, plan, neighbors, lip):
    n, rings = plan.boundary_samples, plan.disk_rings - 1
    dphi = 2.0 * np.pi / n
    best_val = float(min_gap_batch(np.array([p.x]), np.array([p.y]), neighbors)[0])
    best_key = (0, 0)

    def record(ring, idx, vals):
        nonlocal best_val, best_key
        if len(vals) == 0:
            return
        mx = float(vals.max())
        if mx < best_val:
            return
        hit = np.flatnonzero(vals == mx)
        key = min(zip(ring[hit].tolist(), idx[hit].tolist()))
        if mx > best_val or key < best_key:
            best_val, best_key = mx, key

    stride = 1
    while stride * 8 <= max(n // 8, 1):
        stride *= 8
    per_ring = (n + stride - 1) // stride
    g = np.repeat(np.arange(1, rings + 1), per_ring)
    s = np.tile(np.arange(0, n, stride), rings)
    length = np.minimum(stride, n - s)
    v0 = _evaluate(p, r, plan, neighbors, g, s)
    record(g, s, v0)
    # end value of a block is the start value of the next block in the same ring (wrapping)
    v1 = np.roll(v0.reshape(rings, per_ring), -1, axis=1).ravel()

    # samples s .. s+length-1 are within length/2 steps of an evaluated end
    while len(g):
        rho = r * g / rings
        bound = np.maximum(v0, v1) + lip * rho * dphi * length / 2.0
        keep = (length > 1) & (bound >= best_val - 1e-12)
        if not keep.any():
            break
        g, s, length, v0, v1 = g[keep], s[keep], length[keep], v0[keep], v1[keep]
        sub = np.maximum(1, -(-length // 8))
        cnt = -(-length // sub)
        first = np.repeat(np.cumsum(cnt) - cnt, cnt)
        m = np.arange(int(cnt.sum())) - first
        g_r, s_r, len_r, sub_r = (np.repeat(x, cnt) for x in (g, s, length, sub))
        new_s = s_r + m * sub_r
        new_len = np.minimum(sub_r, s_r + len_r - new_s)
        fresh = m > 0
        vals = _evaluate(p, r, plan, neighbors, g_r[fresh], new_s[fresh])
        record(g_r[fresh], new_s[fresh], vals)
        new_v0 = np.repeat(v0, cnt)
        new_v0[fresh] = vals
        last = np.append(m[1:] == 0, True)
        new_v1 = np.append(new_v0[1:], 0.0)
        new_v1[last] = np.repeat(v1, cnt)[last]
        g, s, length, v0, v1 = g_r, new_s, new_len, new_v0, new_v1
    return best_val, best_key


def oracle_solve(query: DisplacementQuery, plan: SamplingPlan = CI_PLAN, pruned: bool = True) -> DisplacementResult:
    """Best sampled position; its ``min_angle`` lower-bounds the true optimum."""
    p, r = query.p, query.r
    neighbors = merge_neighbors(query.neighbors)
    if len(neighbors) <= 1:
        return DisplacementResult(p, 2.0 * math.pi, Method.UNCHANGED)
    lip = _lipschitz(p, r, neighbors) if pruned else None
    if lip is None:
        val, (ring, j) = _brute_force(p, r, plan, neighbors)
    else:
        val, (ring, j) = _pruned(p, r, plan, neighbors, lip)
    if ring == 0:
        q = p
    else:
        qx, qy = _ring_points(p, r, plan, np.array([ring]), np.array([j]))
        q = Point(float(qx[0]), float(qy[0]))
    if val == -math.inf:
        return DisplacementResult(p, 0.0, Method.UNCHANGED, True)
    return DisplacementResult(q, val, Method.ORACLE)


def boundary_samples(p, r: float, plan: SamplingPlan = CI_PLAN) -> np.ndarray:
    p = as_point(p)
    n = plan.boundary_samples
    ring = plan.disk_rings - 1
    qx, qy = _ring_points(p, r, plan, np.full(n, ring), np.arange(n))
    return np.column_stack([qx, qy])


def pair_angle_batch(q: np.ndarray, a, b) -> np.ndarray:
    ux, uy = a[0] - q[:, 0], a[1] - q[:, 1]
    vx, vy = b[0] - q[:, 0], b[1] - q[:, 1]
    return np.arctan2(np.abs(ux * vy - uy * vx), ux * vx + uy * vy)


def oracle_max_pair_angle(p, a, b, r: float, plan: SamplingPlan = CI_PLAN) -> Point:
    """Boundary sample maximising the angle a-q-b."""
    q = boundary_samples(p, r, plan)
    j = int(np.argmax(pair_angle_batch(q, a, b)))
    return Point(float(q[j, 0]), float(q[j, 1]))
