"""Node overlap removal toolkit.

Given a graph layout whose nodes are sized rectangles, remove node
overlaps with one of eight adjustment algorithms, score the result against
a 21-metric quality catalog, and benchmark algorithms over synthetic and
imported corpora.
"""

from .algorithms import (
    ALGORITHM_NAMES,
    CLI_ALGORITHM_NAMES,
    AdjustOutcome,
    AdjustParams,
    adjust,
    scaling_factor,
)
from .bench import (
    AggregateTable,
    BenchRecord,
    GroupStats,
    RunSettings,
    aggregate,
    correlation_matrix,
    read_records_csv,
    run_benchmark,
)
from .catalog import (
    DESCRIPTOR_BY_NAME,
    METRIC_NAMES,
    METRICS,
    SELECTED_METRICS,
    MetricDescriptor,
)
from .corpus import (
    CorpusSpec,
    NodeSizeRule,
    desk_scale_spec,
    generate,
    initial_layout,
    paper_scale_spec,
)
from .geometry import (
    BoundingBox,
    ConvexHull,
    Triangulation,
    bounding_box,
    convex_hull,
    count_overlaps,
    delaunay_edges,
    hull_ray_lengths,
    knn_sets,
    overlaps,
)
from .metrics import (
    MetricReport,
    compute_metrics,
    el_metrics,
    gs_metrics,
    nm_metrics,
    oo_metrics,
    sp_metrics,
)
from .model import (
    AdjustmentPair,
    DotParseError,
    Embedding,
    GraphValidationError,
    SizedGraph,
    read_graph_dot,
    read_graph_json,
    write_graph_json,
    write_records_csv,
)
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "ALGORITHM_NAMES",
    "CLI_ALGORITHM_NAMES",
    "AdjustOutcome",
    "AdjustParams",
    "AdjustmentPair",
    "AggregateTable",
    "BenchRecord",
    "BoundingBox",
    "ConvexHull",
    "CorpusSpec",
    "DESCRIPTOR_BY_NAME",
    "DotParseError",
    "Embedding",
    "GraphValidationError",
    "GroupStats",
    "METRICS",
    "METRIC_NAMES",
    "MetricDescriptor",
    "MetricReport",
    "NodeSizeRule",
    "RunSettings",
    "SELECTED_METRICS",
    "SizedGraph",
    "Triangulation",
    "adjust",
    "aggregate",
    "bounding_box",
    "compute_metrics",
    "convex_hull",
    "correlation_matrix",
    "count_overlaps",
    "delaunay_edges",
    "desk_scale_spec",
    "el_metrics",
    "generate",
    "gs_metrics",
    "hull_ray_lengths",
    "initial_layout",
    "knn_sets",
    "nm_metrics",
    "oo_metrics",
    "overlaps",
    "paper_scale_spec",
    "read_graph_dot",
    "read_graph_json",
    "read_records_csv",
    "render_svg",
    "run_benchmark",
    "scaling_factor",
    "sp_metrics",
    "write_graph_json",
    "write_records_csv",
]
