"""Graph and drawing containers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .geometry import Point, as_point


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: float | None = None


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; duplicate edges are merged, keeping the first length."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _adjacency: dict = field(init=False, repr=False, compare=False)

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable = ()):
        verts: list[str] = []
        seen_v: set[str] = set()
        for v in vertices:
            if v not in seen_v:
                seen_v.add(v)
                verts.append(v)
        merged: list[Edge] = []
        seen_e: set[frozenset] = set()
        for e in edges:
            e = e if isinstance(e, Edge) else Edge(*e)
            if e.u == e.v:
                raise GraphError(f"self-loop on vertex {e.u!r}")
            if e.length is not None and not (e.length > 0.0 and math.isfinite(e.length)):
                raise GraphError(f"edge {e.u}-{e.v} has non-positive length {e.length}")
            for x in (e.u, e.v):
                if x not in seen_v:
                    raise GraphError(f"edge endpoint {x!r} is not a vertex")
            key = frozenset((e.u, e.v))
            if key in seen_e:
                continue
            seen_e.add(key)
            merged.append(e)
        adj: dict[str, list[str]] = {v: [] for v in verts}
        for e in merged:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "edges", tuple(merged))
        object.__setattr__(self, "_adjacency", {v: tuple(n) for v, n in adj.items()})

    @classmethod
    def from_edges(cls, edges: Iterable) -> "Graph":
        edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        verts = []
        for e in edges:
            verts.extend((e.u, e.v))
        return cls(verts, edges)

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adjacency[v]

    def degree(self, v: str) -> int:
        return len(self._adjacency[v])

    def subdivided(self, s: int, default_length: float = 1.0) -> "Graph":
        """Replace every edge by a path of ``s + 1`` segments.

        Intermediate vertices are named ``u~v~i``. Each segment wants
        ``length / (s + 1)``, with ``default_length`` standing in for edges
        that carry no length of their own.
        """
        if s < 0:
            raise ValueError("subdivision count must be non-negative")
        if s == 0:
            return self
        verts = list(self.vertices)
        edges = []
        for e in self.edges:
            part = (default_length if e.length is None else e.length) / (s + 1)
            chain = [e.u] + [f"{e.u}~{e.v}~{i}" for i in range(1, s + 1)] + [e.v]
            verts.extend(chain[1:-1])
            edges.extend(Edge(x, y, part) for x, y in zip(chain, chain[1:]))
        return Graph(verts, edges)


@dataclass
class Drawing:
    positions: dict[str, Point]

    def __init__(self, positions: Mapping[str, Iterable[float]] | None = None):
        self.positions = {v: as_point(p) for v, p in (positions or {}).items()}

    def __getitem__(self, v: str) -> Point:
        return self.positions[v]

    def covers(self, g: Graph) -> bool:
        return all(v in self.positions for v in g.vertices)

    def check(self, g: Graph) -> None:
        missing = [v for v in g.vertices if v not in self.positions]
        if missing:
            raise GraphError(f"drawing has no position for {missing[:5]}")
        for v, p in self.positions.items():
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise GraphError(f"non-finite position for {v!r}")
