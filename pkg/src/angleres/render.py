"""SVG output for drawings, plus matplotlib figures for comparison reports."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .graph import Drawing, Graph


@dataclass(frozen=True)
class SvgStyle:
    width: int = 600
    height: int = 600
    margin: float = 0.05          # fraction of the larger extent added on every side
    vertex_radius: float = 0.04   # relative to the larger extent
    stroke_width: float = 0.012
    labels: bool = False
    vertex_fill: str = "#1f4e79"
    edge_stroke: str = "#333333"
    background: str | None = "#ffffff"


def _fmt(x: float) -> str:
    # fixed precision keeps the document byte-stable; -0 is normalised away
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _view_box(g: Graph, d: Drawing, margin: float):
    pts = [d[v] for v in g.vertices]
    if not pts:
        return -0.5, -0.5, 1.0, 1.0, 1.0
    xs = [p.x for p in pts]
    ys = [-p.y for p in pts]  # SVG y grows downward
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    extent = max(w, h)
    if extent <= 0.0:
        extent = 1.0
    pad = margin * extent
    return min(xs) - pad, min(ys) - pad, w + 2 * pad, h + 2 * pad, extent


def render_svg(g: Graph, d: Drawing, style: SvgStyle = SvgStyle()) -> str:
    """SVG 1.1 document: edges as ``line`` elements, vertices as ``circle`` elements."""
    d.check(g)
    x0, y0, w, h, extent = _view_box(g, d, style.margin)
    rad = style.vertex_radius * extent
    sw = style.stroke_width * extent
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
    ]
    if style.background:
        out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(w)}" height="{_fmt(h)}" '
                   f'fill={quoteattr(style.background)}/>')
    out.append(f'<g stroke={quoteattr(style.edge_stroke)} stroke-width="{_fmt(sw)}" stroke-linecap="round">')
    for e in g.edges:
        a, b = d[e.u], d[e.v]
        out.append(f'<line x1="{_fmt(a.x)}" y1="{_fmt(-a.y)}" x2="{_fmt(b.x)}" y2="{_fmt(-b.y)}"/>')
    out.append("</g>")
    out.append(f'<g fill={quoteattr(style.vertex_fill)}>')
    for v in g.vertices:
        p = d[v]
        out.append(f'<circle cx="{_fmt(p.x)}" cy="{_fmt(-p.y)}" r="{_fmt(rad)}"/>')
    out.append("</g>")
    if style.labels and g.vertices:
        fs = 2.5 * rad
        out.append(f'<g font-family="sans-serif" font-size="{_fmt(fs)}" fill="#000000">')
        for v in g.vertices:
            p = d[v]
            out.append(f'<text x="{_fmt(p.x + 1.2 * rad)}" y="{_fmt(-p.y - 1.2 * rad)}">{escape(v)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def comparison_figure(rows, path, title: str = "") -> None:
    """Paired-seed scatter of angular resolution, angle force off vs on.

    ``rows`` are dicts with ``seed``, ``off_deg`` and ``on_deg``.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    seeds = [r["seed"] for r in rows]
    off = [r["off_deg"] for r in rows]
    on = [r["on_deg"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    hi = max(off + on + [1.0]) * 1.05
    ax1.plot([0, hi], [0, hi], color="0.6", lw=1, ls="--")
    ax1.scatter(off, on, color="#1f4e79")
    ax1.set_xlabel("angular resolution, angle force off (deg)")
    ax1.set_ylabel("angular resolution, angle force on (deg)")
    ax1.set_xlim(0, hi)
    ax1.set_ylim(0, hi)
    x = range(len(seeds))
    ax2.bar([i - 0.2 for i in x], off, width=0.4, label="off", color="0.6")
    ax2.bar([i + 0.2 for i in x], on, width=0.4, label="on", color="#1f4e79")
    ax2.set_xticks(list(x), [str(s) for s in seeds])
    ax2.set_xlabel("seed")
    ax2.set_ylabel("deg")
    ax2.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    # fixed metadata so repeated runs write identical files
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def drawing_figure(g: Graph, d: Drawing, path, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    for e in g.edges:
        a, b = d[e.u], d[e.v]
        ax.plot([a.x, b.x], [a.y, b.y], color="#333333", lw=1)
    if g.vertices:
        ax.scatter([d[v].x for v in g.vertices], [d[v].y for v in g.vertices], s=18, color="#1f4e79", zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)

