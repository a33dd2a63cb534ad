"""Edge-list and drawing file formats, plus built-in named graphs.

Edge list: one ``u v [length]`` per line, tokens split on spaces/tabs, ``#``
starts a comment, blank lines are ignored.

Drawing: one ``id x y`` per line, coordinates written with 17 significant
digits so a round trip is exact.
"""

from __future__ import annotations

import math
import os
import re

from .graph import Drawing, Edge, Graph, GraphError


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def parse_edge_list(text: str) -> Graph:
    verts: list[str] = []
    edges: list[Edge] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        if len(toks) not in (2, 3):
            raise ParseError(f"expected 'u v [length]', got {len(toks)} fields", lineno)
        u, v = toks[0], toks[1]
        length = None
        if len(toks) == 3:
            try:
                length = float(toks[2])
            except ValueError:
                raise ParseError(f"bad length {toks[2]!r}", lineno) from None
            if not (length > 0 and math.isfinite(length)):
                raise ParseError(f"length must be positive, got {toks[2]}", lineno)
        if u == v:
            raise ParseError(f"self-loop on {u!r}", lineno)
        verts.extend((u, v))
        edges.append(Edge(u, v, length))
    return Graph(verts, edges)


def format_edge_list(g: Graph) -> str:
    lines = []
    for e in g.edges:
        lines.append(f"{e.u} {e.v}" if e.length is None else f"{e.u} {e.v} {e.length!r}")
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    if isolated:
        # the grammar has no isolated-vertex line; keep them visible as a comment
        lines.append("# isolated: " + " ".join(isolated))
    return "\n".join(lines) + ("\n" if lines else "")


def format_drawing(d: Drawing, order=None) -> str:
    ids = list(order) if order is not None else list(d.positions)
    return "".join(f"{v} {d[v].x:.17g} {d[v].y:.17g}\n" for v in ids)


def parse_drawing(text: str) -> Drawing:
    pos = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        if len(toks) != 3:
            raise ParseError("expected 'id x y'", lineno)
        try:
            x, y = float(toks[1]), float(toks[2])
        except ValueError:
            raise ParseError(f"bad coordinate in {line.strip()!r}", lineno) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError("non-finite coordinate", lineno)
        pos[toks[0]] = (x, y)
    return Drawing(pos)


# ----------------------------------------------------------------------
# named graphs
# ----------------------------------------------------------------------


def _from_pairs(n: int, pairs) -> Graph:
    return Graph([str(i) for i in range(n)], [Edge(str(u), str(v)) for u, v in pairs])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return _from_pairs(10, outer + spokes + inner)


def heawood() -> Graph:
    """LCF notation [5, -5]^7."""
    ring = [(i, (i + 1) % 14) for i in range(14)]
    chords = [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return _from_pairs(14, ring + chords)


def herschel() -> Graph:
    adj = {0: [1, 3, 4], 1: [2, 5, 6], 2: [3, 7], 3: [8, 9], 4: [5, 9],
           5: [10], 6: [7, 10], 7: [8], 8: [10], 9: [10]}
    return _from_pairs(11, [(u, v) for u, vs in adj.items() for v in vs])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return _from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs at least 1 vertex")
    return _from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs at least 1 vertex")
    return _from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


_FIXED = {"petersen": petersen, "heawood": heawood, "herschel": herschel}
_SIZED = {"cycle": cycle, "path": path, "complete": complete}
NAMED_GRAPHS = tuple(_FIXED) + tuple(f"{k}:n" for k in _SIZED)


def named_graph(name: str) -> Graph:
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    m = re.fullmatch(r"(cycle|path|complete):(\d+)", key)
    if m:
        return _SIZED[m.group(1)](int(m.group(2)))
    raise GraphError(f"unknown graph {name!r}; expected one of {', '.join(NAMED_GRAPHS)}")


def load_graph(spec: str) -> Graph:
    """Named graph, or an edge-list file when ``spec`` is an existing path."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_edge_list(fh.read())
    return named_graph(spec)
