"""Registry of the 21 layout-adjustment quality metrics.

Abbreviations are built from the quality class (oo, sp, gs, nm, el), the
structure the metric is computed on (bb = bounding box, ch = convex hull,
dm = distance moved), and the quantity itself. Five metrics, one per
class, are marked as the selected representatives used by default in
benchmark reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ORTHOGONAL_ORDERING = "orthogonal_ordering"
SPREAD = "spread"
GLOBAL_SHAPE = "global_shape"
NODE_MOVEMENT = "node_movement"
EDGE_LENGTH = "edge_length"

METRIC_CLASSES = (
    ORTHOGONAL_ORDERING,
    SPREAD,
    GLOBAL_SHAPE,
    NODE_MOVEMENT,
    EDGE_LENGTH,
)

_INF = math.inf


@dataclass(frozen=True)
class MetricDescriptor:
    """Static facts about one metric: class, attainable range, ideal value.

    ``range_low``/``range_high`` bound every defined value the metric can
    take (the bound for oo_ni additionally depends on the node count, see
    :func:`range_high_for`). ``target`` is the value reached by a perfect
    adjustment with respect to this criterion.
    """

    abbreviation: str
    name: str
    metric_class: str
    range_low: float
    range_high: float
    target: float
    selected: bool = False


METRICS: tuple[MetricDescriptor, ...] = (
    MetricDescriptor("oo_o", "ordering preserved flag", ORTHOGONAL_ORDERING, 0.0, 1.0, 1.0),
    MetricDescriptor("oo_kt", "Kendall tau distance", ORTHOGONAL_ORDERING, 0.0, 1.0, 0.0),
    MetricDescriptor("oo_ni", "number of inversions", ORTHOGONAL_ORDERING, 0.0, _INF, 0.0),
    MetricDescriptor("oo_nni", "normalised number of inversions", ORTHOGONAL_ORDERING, 0.0, 1.0, 0.0, selected=True),
    MetricDescriptor("sp_bb_l1ml", "bounding box L1 metric length", SPREAD, 1.0, _INF, 1.0),
    MetricDescriptor("sp_bb_a", "bounding box area ratio", SPREAD, 1.0, _INF, 1.0),
    MetricDescriptor("sp_bb_na", "bounding box normalised area", SPREAD, 0.0, 1.0, 0.0),
    MetricDescriptor("sp_ch_a", "convex hull area ratio", SPREAD, 1.0, _INF, 1.0, selected=True),
    MetricDescriptor("gs_bb_ar", "bounding box aspect ratio", GLOBAL_SHAPE, 0.0, _INF, 1.0),
    MetricDescriptor("gs_bb_iar", "bounding box improved aspect ratio", GLOBAL_SHAPE, 1.0, _INF, 1.0, selected=True),
    MetricDescriptor("gs_ch_sd", "convex hull ray standard deviation", GLOBAL_SHAPE, 0.0, _INF, 0.0),
    MetricDescriptor("nm_mn", "moved nodes fraction", NODE_MOVEMENT, 0.0, 1.0, 0.0),
    MetricDescriptor("nm_dm_me", "distance moved, mean euclidean", NODE_MOVEMENT, 0.0, _INF, 0.0),
    MetricDescriptor("nm_dm_ne", "distance moved, normalised euclidean", NODE_MOVEMENT, 0.0, 1.0, 0.0),
    MetricDescriptor("nm_dm_h", "distance moved, manhattan", NODE_MOVEMENT, 0.0, _INF, 0.0),
    MetricDescriptor("nm_dm_se", "distance moved, squared euclidean", NODE_MOVEMENT, 0.0, _INF, 0.0),
    MetricDescriptor("nm_dm_imse", "distance moved, improved mean squared euclidean", NODE_MOVEMENT, 0.0, _INF, 0.0, selected=True),
    MetricDescriptor("nm_d", "displacement after alignment", NODE_MOVEMENT, 0.0, _INF, 0.0),
    MetricDescriptor("nm_knn", "k-nearest-neighbour churn", NODE_MOVEMENT, 0.0, _INF, 0.0),
    MetricDescriptor("el_r", "edge length ratio", EDGE_LENGTH, 1.0, _INF, 1.0),
    MetricDescriptor("el_rsdd", "relative standard deviation over Delaunay edges", EDGE_LENGTH, 0.0, _INF, 0.0, selected=True),
)

METRIC_NAMES: tuple[str, ...] = tuple(d.abbreviation for d in METRICS)
SELECTED_METRICS: tuple[str, ...] = tuple(d.abbreviation for d in METRICS if d.selected)
DESCRIPTOR_BY_NAME: dict[str, MetricDescriptor] = {d.abbreviation: d for d in METRICS}


def range_high_for(abbreviation: str, n: int) -> float:
    """Upper range bound, resolving the node-count-dependent oo_ni bound."""
    if abbreviation == "oo_ni":
        return float(n * (n - 1))
    return DESCRIPTOR_BY_NAME[abbreviation].range_high
