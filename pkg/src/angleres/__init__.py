"""Max-min-angle vertex displacement and an angle-aware spring embedder."""

from .geometry import DegenerateInputError, Point, Polynomial, min_incident_angle, real_roots
from .graph import Drawing, Edge, Graph, GraphError
from .graph_io import ParseError, load_graph, named_graph, parse_drawing, parse_edge_list
from .layout import LayoutConfig, LayoutResult, layout
from .metrics import Metrics, compute_metrics
from .mma import DisplacementQuery, DisplacementResult, GridParams, Method, MMAError, solve
from .oracle import ACCEPTANCE_PLAN, CI_PLAN, SamplingPlan, oracle_solve
from .render import SvgStyle, render_svg

__version__ = "0.1.0"

__all__ = [
    "ACCEPTANCE_PLAN", "CI_PLAN", "DegenerateInputError", "DisplacementQuery", "DisplacementResult",
    "Drawing", "Edge", "Graph", "GraphError", "GridParams", "LayoutConfig", "LayoutResult", "Method",
    "MMAError", "Metrics", "ParseError", "Point", "Polynomial", "SamplingPlan", "SvgStyle",
    "compute_metrics", "layout", "load_graph", "min_incident_angle", "named_graph", "oracle_solve",
    "parse_drawing", "parse_edge_list", "real_roots", "render_svg", "solve",
]
