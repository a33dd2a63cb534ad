"""Drawing quality measures: angular resolution, edge-length error, crossings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import DegenerateInputError, min_incident_angle
from .graph import Drawing, Graph


@dataclass
class Metrics:
    angular_resolution: float
    edge_length_rmse: float
    crossings: int
    per_vertex_min_angle: dict[str, float] = field(default_factory=dict)
    degenerate: bool = False
    degenerate_crossings: int = 0

    def as_dict(self) -> dict:
        """JSON-friendly report; angles in degrees with a radian companion."""
        return {
            "angular_resolution_deg": math.degrees(self.angular_resolution),
            "angular_resolution_rad": self.angular_resolution,
            "edge_length_rmse": self.edge_length_rmse,
            "crossings": self.crossings,
            "degenerate": self.degenerate,
            "degenerate_crossings": self.degenerate_crossings,
        }


def per_vertex_angles(g: Graph, d: Drawing) -> tuple[dict[str, float], bool]:
    out: dict[str, float] = {}
    degenerate = False
    for v in g.vertices:
        nbrs = g.neighbors(v)
        if not nbrs:
            continue
        try:
            out[v] = min_incident_angle(d[v], [d[u] for u in nbrs])
        except DegenerateInputError:
            out[v] = 0.0
            degenerate = True
    return out, degenerate


def angular_resolution(g: Graph, d: Drawing) -> float:
    angles, _ = per_vertex_angles(g, d)
    return min(angles.values(), default=2.0 * math.pi)


def edge_length_rmse(g: Graph, d: Drawing, default_edge_length: float = 1.0) -> float:
    """Root mean square of the relative deviation ``(|uv| - l) / l``."""
    if not g.edges:
        return 0.0
    acc = 0.0
    for e in g.edges:
        want = default_edge_length if e.length is None else e.length
        acc += ((d[e.u].dist(d[e.v]) - want) / want) ** 2
    return math.sqrt(acc / len(g.edges))


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c) -> bool:
    """c lies within the bounding box of ab (call only when collinear)."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def classify_pair(p1, p2, q1, q2) -> str:
    """``"none"``, ``"cross"`` or ``"overlap"`` for two closed segments.

    A crossing is a proper intersection or a contact at an interior point of
    exactly one segment. Endpoint-to-endpoint contact is not a crossing;
    collinear overlap is reported separately.
    """
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 == o2 == o3 == o4 == 0:
        if max(min(p1[0], p2[0]), min(q1[0], q2[0])) < min(max(p1[0], p2[0]), max(q1[0], q2[0])) or \
           max(min(p1[1], p2[1]), min(q1[1], q2[1])) < min(max(p1[1], p2[1]), max(q1[1], q2[1])):
            return "overlap"
        return "none"
    if o1 != o2 and o3 != o4:
        # proper crossing, or one endpoint touching the other's interior
        if 0 in (o1, o2) and 0 in (o3, o4):
            return "none"  # endpoint on endpoint
        return "cross"
    if o1 == 0 and _on_segment(p1, p2, q1) and q1 not in (p1, p2):
        return "cross"
    if o2 == 0 and _on_segment(p1, p2, q2) and q2 not in (p1, p2):
        return "cross"
    if o3 == 0 and _on_segment(q1, q2, p1) and p1 not in (q1, q2):
        return "cross"
    if o4 == 0 and _on_segment(q1, q2, p2) and p2 not in (q1, q2):
        return "cross"
    return "none"


def count_crossings(g: Graph, d: Drawing) -> tuple[int, int]:
    """Crossing count over non-adjacent edge pairs, and how many of those were collinear overlaps."""
    segs = [(e.u, e.v, d[e.u], d[e.v]) for e in g.edges]
    total = overlaps = 0
    for i in range(len(segs)):
        u1, v1, a1, b1 = segs[i]
        for j in range(i + 1, len(segs)):
            u2, v2, a2, b2 = segs[j]
            if u1 in (u2, v2) or v1 in (u2, v2):
                continue
            kind = classify_pair(a1, b1, a2, b2)
            if kind == "cross":
                total += 1
            elif kind == "overlap":
                total += 1
                overlaps += 1
    return total, overlaps


def compute_metrics(g: Graph, d: Drawing, default_edge_length: float = 1.0) -> Metrics:
    d.check(g)
    angles, degenerate = per_vertex_angles(g, d)
    crossings, overlaps = count_crossings(g, d)
    return Metrics(
        angular_resolution=min(angles.values(), default=2.0 * math.pi),
        edge_length_rmse=edge_length_rmse(g, d, default_edge_length),
        crossings=crossings,
        per_vertex_min_angle=angles,
        degenerate=degenerate,
        degenerate_crossings=overlaps,
    )
