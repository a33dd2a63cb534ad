"""Spring embedder with an angle-optimisation force.

Each step reads the current drawing only, then moves every vertex by

    spring_weight * c_t * F_spring   (capped at 2 * r_t)
  + angle_weight  * (P* - P)         (P* from the MMA solver with radius r_t)

with ``r_t = angle_radius_start * angle_radius_decay ** t`` and the spring
cooling factor ``c_t = angle_radius_decay ** t`` (1 when ``spring_cooling``
is off). Without cooling a spring weight above 0.5 overshoots: the
alternating stretch mode of a path is multiplied by ``1 - 4 * weight`` per
step.
"""

from __future__ import annotations

import logging
import math
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import Point
from .graph import Drawing, Graph
from .metrics import angular_resolution, edge_length_rmse
from .mma import DisplacementQuery, GridParams, solve

logger = logging.getLogger(__name__)

SPRING_MODELS = ("logarithmic", "linear")


@dataclass(frozen=True)
class LayoutConfig:
    iterations: int = 1000
    seed: int = 0
    angle_radius_start: float | None = None  # default 0.25 * default_edge_length
    angle_radius_decay: float = 0.995
    angle_weight: float = 1.0
    spring_weight: float = 0.9
    default_edge_length: float = 1.0
    spring_model: str = "logarithmic"
    spring_cooling: bool = True
    subdivide_edges: int = 0
    grid: GridParams = field(default_factory=GridParams)
    convergence_tol: float = 1e-4
    convergence_window: int = 10

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.angle_weight < 0 or self.spring_weight < 0:
            raise ValueError("force weights must be non-negative")
        if self.angle_weight == 0 and self.spring_weight == 0:
            raise ValueError("angle_weight and spring_weight cannot both be zero")
        if not 0.0 < self.angle_radius_decay <= 1.0:
            raise ValueError("angle_radius_decay must lie in (0, 1]")
        if not self.default_edge_length > 0:
            raise ValueError("default_edge_length must be positive")
        if self.angle_radius_start is not None and not self.angle_radius_start > 0:
            raise ValueError("angle_radius_start must be positive")
        if self.spring_model not in SPRING_MODELS:
            raise ValueError(f"spring_model must be one of {SPRING_MODELS}")
        if self.subdivide_edges < 0:
            raise ValueError("subdivide_edges must be >= 0")

    @property
    def radius_start(self) -> float:
        if self.angle_radius_start is None:
            return 0.25 * self.default_edge_length
        return self.angle_radius_start

    def radius_at(self, iteration: int) -> float:
        return self.radius_start * self.angle_radius_decay ** iteration

    def spring_weight_at(self, iteration: int) -> float:
        if not self.spring_cooling:
            return self.spring_weight
        return self.spring_weight * self.angle_radius_decay ** iteration

    def with_overrides(self, **kw) -> "LayoutConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    radius: float
    max_displacement: float
    angular_resolution: float
    edge_length_rmse: float


@dataclass
class LayoutResult:
    graph: Graph
    drawing: Drawing
    trace: list[TraceEntry]
    converged: bool


def initial_placement(g: Graph, seed: int, edge_length: float = 1.0) -> Drawing:
    """Uniform random positions in a square of side ``sqrt(|V|) * edge_length``."""
    rng = np.random.default_rng(seed)
    n = len(g.vertices)
    side = math.sqrt(max(n, 1)) * edge_length
    xy = rng.uniform(0.0, side, size=(n, 2))
    # coincidence has probability zero, but re-draw rather than trust it
    for i in range(n):
        while any(np.hypot(*(xy[i] - xy[j])) <= 1e-9 for j in range(i)):
            xy[i] = rng.uniform(0.0, side, size=2)
    return Drawing({v: (float(x), float(y)) for v, (x, y) in zip(g.vertices, xy)})


def _spring_magnitude(t: float, model: str) -> float:
    return math.log(t) if model == "logarithmic" else t - 1.0


def _tiebreak_direction(seed: int, v: str, u: str) -> tuple[float, float]:
    """Deterministic unit vector pointing from v away from u when the two coincide."""
    lo, hi = sorted((u, v))
    theta = 2.0 * math.pi * (zlib.crc32(f"{seed}:{lo}:{hi}".encode()) / 2**32)
    sign = 1.0 if v == lo else -1.0
    return sign * math.cos(theta), sign * math.sin(theta)


def spring_force(d: Drawing, g: Graph, v: str, cfg: LayoutConfig, lengths: dict | None = None) -> Point:
    """Sum of ``f(|uv| / l_uv) * unit(u - v)`` over neighbours ``u``."""
    p = d[v]
    fx = fy = 0.0
    for u in g.neighbors(v):
        want = _desired(g, v, u, cfg, lengths)
        q = d[u]
        dx, dy = q.x - p.x, q.y - p.y
        dist = math.hypot(dx, dy)
        if dist <= 1e-6 * want:
            ux, uy = _tiebreak_direction(cfg.seed, v, u)
            ux, uy = -ux, -uy  # force is along unit(u - v); negative magnitude pushes apart
            mag = _spring_magnitude(1e-6, cfg.spring_model)
        else:
            ux, uy = dx / dist, dy / dist
            mag = _spring_magnitude(dist / want, cfg.spring_model)
        fx += mag * ux
        fy += mag * uy
    return Point(fx, fy)


def _edge_lengths(g: Graph) -> dict[frozenset, float]:
    return {frozenset((e.u, e.v)): e.length for e in g.edges if e.length is not None}


def _desired(g: Graph, v: str, u: str, cfg: LayoutConfig, lengths: dict | None) -> float:
    if lengths is None:
        lengths = _edge_lengths(g)
    return lengths.get(frozenset((u, v)), cfg.default_edge_length)


def angle_force(d: Drawing, g: Graph, v: str, r: float, grid: GridParams = GridParams()) -> Point:
    """Displacement ``P* - P`` for vertex ``v`` with radius ``r``; zero when degenerate."""
    nbrs = g.neighbors(v)
    if len(nbrs) <= 1:
        return Point(0.0, 0.0)
    res = solve(DisplacementQuery(d[v], tuple(d[u] for u in nbrs), r), grid)
    if res.degenerate:
        return Point(0.0, 0.0)
    return res.p_star - d[v]


def step(d: Drawing, g: Graph, cfg: LayoutConfig, iteration: int, lengths: dict | None = None):
    """One simultaneous update; returns ``(new_drawing, max_displacement)``."""
    if lengths is None:
        lengths = _edge_lengths(g)
    r = cfg.radius_at(iteration)
    spring_cap = 2.0 * r
    sw = cfg.spring_weight_at(iteration)
    moves: dict[str, Point] = {}
    for v in g.vertices:
        mx = my = 0.0
        if cfg.spring_weight > 0.0:
            fx, fy = spring_force(d, g, v, cfg, lengths)
            fx, fy = sw * fx, sw * fy
            norm = math.hypot(fx, fy)
            if norm > spring_cap:
                fx, fy = fx * spring_cap / norm, fy * spring_cap / norm
            mx, my = fx, fy
        if cfg.angle_weight > 0.0:
            ax, ay = angle_force(d, g, v, r, cfg.grid)
            mx += cfg.angle_weight * ax
            my += cfg.angle_weight * ay
        moves[v] = Point(mx, my)
    new = Drawing({v: d[v] + moves[v] if v in moves else d[v] for v in d.positions})
    biggest = max((m.norm() for m in moves.values()), default=0.0)
    return new, biggest


def layout(g: Graph, cfg: LayoutConfig = LayoutConfig(), initial: Drawing | None = None) -> LayoutResult:
    """Run the embedder; stops early after ``convergence_window`` quiet iterations."""
    work = g.subdivided(cfg.subdivide_edges, cfg.default_edge_length)
    d = initial if initial is not None else initial_placement(work, cfg.seed, cfg.default_edge_length)
    d.check(work)
    lengths = _edge_lengths(work)
    trace: list[TraceEntry] = []
    quiet = 0
    converged = False
    for it in range(cfg.iterations):
        d, moved = step(d, work, cfg, it, lengths)
        trace.append(TraceEntry(it, cfg.radius_at(it), moved, angular_resolution(work, d),
                                edge_length_rmse(work, d, cfg.default_edge_length)))
        quiet = quiet + 1 if moved < cfg.convergence_tol * cfg.default_edge_length else 0
        if quiet >= cfg.convergence_window:
            converged = True
            break
    logger.debug("layout finished after %d iterations (converged=%s)", len(trace), converged)
    return LayoutResult(work, d, trace, converged)
