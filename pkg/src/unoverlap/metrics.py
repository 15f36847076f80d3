"""The 21-metric quality catalog, computed on an adjustment pair.

Metrics are grouped in five classes; each group function returns a mapping
from abbreviation to value, where ``None`` is the distinguished undefined
value (never NaN) used when a metric's preconditions fail. Undefined
values are excluded from aggregation downstream but counted.

Notes on conventions:

* coordinate comparisons for the orthogonal-ordering metrics use exact
  floating equality; untouched coordinates compare equal bitwise, and an
  epsilon would silently forgive genuine inversions;
* a node counts as moved when its displacement exceeds 1e-9 model units;
* standard deviations are population deviations (divide by the count);
* the improved squared-movement metric aligns the initial layout to the
  adjusted one with a translate-then-scale map derived from the per-axis
  extents of the node centers, which makes the metric exactly zero for
  every adjustment that is a per-axis affine map of the centers (pure
  translations and uniform or per-axis scalings about any center).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import METRIC_NAMES
from .geometry import (
    bounding_box,
    convex_hull,
    delaunay_edges,
    hull_ray_lengths,
    knn_index_lists,
)
from .model import AdjustmentPair

MOVE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MetricReport:
    """Values for all 21 metrics of one adjustment, in catalog order."""

    values: dict[str, float | None]

    def __post_init__(self):
        if tuple(self.values.keys()) != METRIC_NAMES:
            raise ValueError("metric report must contain exactly the 21 catalog metrics")

    @property
    def undefined_count(self) -> int:
        return sum(1 for v in self.values.values() if v is None)

    def __getitem__(self, name: str) -> float | None:
        return self.values[name]


# ---------------------------------------------------------------------------
# Orthogonal ordering preservation
# ---------------------------------------------------------------------------

def oo_metrics(pair: AdjustmentPair) -> dict[str, float | None]:
    """Ordering flag, Kendall-tau distance, inversion count, and its
    normalised form. Orderings are compared per axis over ordered node
    pairs; a pair is inverted for the tau distance when any of the four
    order/equality equivalences fails."""
    n = pair.graph.n
    if n < 2:
        return {"oo_o": 1.0, "oo_kt": 0.0, "oo_ni": 0.0, "oo_nni": 0.0}
    x, y = pair.initial.coords[:, 0], pair.initial.coords[:, 1]
    xp, yp = pair.adjusted.coords[:, 0], pair.adjusted.coords[:, 1]

    lt_x = x[:, None] < x[None, :]
    lt_xp = xp[:, None] < xp[None, :]
    lt_y = y[:, None] < y[None, :]
    lt_yp = yp[:, None] < yp[None, :]
    eq_x = x[:, None] == x[None, :]
    eq_xp = xp[:, None] == xp[None, :]
    eq_y = y[:, None] == y[None, :]
    eq_yp = yp[:, None] == yp[None, :]

    ok = (lt_x == lt_xp) & (lt_y == lt_yp) & (eq_x == eq_xp) & (eq_y == eq_yp)
    np.fill_diagonal(ok, True)
    inversions = int(ok.size - np.count_nonzero(ok))

    denom = n * (n - 1)
    ni = int(np.count_nonzero(lt_x.T & lt_xp)) + int(np.count_nonzero(lt_y.T & lt_yp))
    return {
        "oo_o": 1.0 if inversions == 0 else 0.0,
        "oo_kt": inversions / denom,
        "oo_ni": float(ni),
        "oo_nni": ni / denom,
    }


# ---------------------------------------------------------------------------
# Spread minimisation
# ---------------------------------------------------------------------------

def sp_metrics(pair: AdjustmentPair) -> dict[str, float | None]:
    """Bounding-box and convex-hull growth ratios."""
    box = bounding_box(pair.graph, pair.initial)
    box_p = bounding_box(pair.graph, pair.adjusted)
    hull = convex_hull(pair.graph, pair.initial)
    hull_p = convex_hull(pair.graph, pair.adjusted)
    area = box.width * box.height
    area_p = box_p.width * box_p.height
    sp_ch_a = None
    if hull.area > 0.0 and hull_p.area > 0.0:
        sp_ch_a = hull_p.area / hull.area
    return {
        "sp_bb_l1ml": max(box_p.width, box_p.height) / max(box.width, box.height),
        "sp_bb_a": area_p / area,
        "sp_bb_na": 1.0 - area / area_p,
        "sp_ch_a": sp_ch_a,
    }


# ---------------------------------------------------------------------------
# Global shape preservation
# ---------------------------------------------------------------------------

def gs_metrics(pair: AdjustmentPair) -> dict[str, float | None]:
    """Aspect-ratio drift of the bounding box and the standard deviation
    of hull ray-length ratios sampled every 10 degrees."""
    box = bounding_box(pair.graph, pair.initial)
    box_p = bounding_box(pair.graph, pair.adjusted)
    w, h = box.width, box.height
    wp, hp = box_p.width, box_p.height
    if wp > hp:
        gs_bb_ar = (wp * h) / (hp * w)
    else:
        gs_bb_ar = (hp * w) / (wp * h)
    ratio = (wp * h) / (hp * w)
    gs_bb_iar = max(ratio, 1.0 / ratio)

    hull = convex_hull(pair.graph, pair.initial)
    hull_p = convex_hull(pair.graph, pair.adjusted)
    gs_ch_sd = None
    if hull.area > 0.0 and hull_p.area > 0.0:
        rays = hull_ray_lengths(hull)
        rays_p = hull_ray_lengths(hull_p)
        d = np.array(rays_p) / np.array(rays)
        gs_ch_sd = float(np.sqrt(np.mean((d - np.mean(d)) ** 2)))
    return {"gs_bb_ar": gs_bb_ar, "gs_bb_iar": gs_bb_iar, "gs_ch_sd": gs_ch_sd}


# ---------------------------------------------------------------------------
# Node movement minimisation
# ---------------------------------------------------------------------------

def _span_alignment(initial: np.ndarray, adjusted: np.ndarray) -> np.ndarray:
    """Map initial centers onto the adjusted frame: translate the per-axis
    center-span midpoint onto the adjusted one, then scale about it by the
    span ratio (factor 1 where a span is degenerate)."""
    lo, hi = initial.min(axis=0), initial.max(axis=0)
    lo_p, hi_p = adjusted.min(axis=0), adjusted.max(axis=0)
    mid = (lo + hi) / 2.0
    mid_p = (lo_p + hi_p) / 2.0
    span = hi - lo
    span_p = hi_p - lo_p
    factor = np.where(span > 0.0, np.divide(span_p, np.where(span > 0.0, span, 1.0)), 1.0)
    # pure-translation axes keep the exact additive form so an identity
    # adjustment maps onto itself bit for bit
    translated = initial + (mid_p - mid)
    scaled = mid_p + (initial - mid) * factor
    return np.where(span_p == span, translated, scaled)


def nm_metrics(pair: AdjustmentPair, k: int | None = None) -> dict[str, float | None]:
    """Movement statistics between the two layouts.

    ``k`` is the neighbourhood size for the knn churn metric and defaults
    to min(10, n-1); the metric is undefined when no valid k exists.
    """
    n = pair.graph.n
    if n == 0:
        raise ValueError("node movement metrics need at least one node")
    initial = pair.initial.coords
    adjusted = pair.adjusted.coords
    delta = adjusted - initial
    euclid = np.hypot(delta[:, 0], delta[:, 1])
    box_p = bounding_box(pair.graph, pair.adjusted)
    k_box = max(box_p.width, box_p.height)

    aligned = _span_alignment(initial, adjusted)
    imse = float(np.sum((adjusted - aligned) ** 2)) / n

    if k is None:
        k = min(10, n - 1)
    nm_knn: float | None = None
    if 1 <= k <= n - 1:
        before = knn_index_lists(initial, k)
        after = knn_index_lists(adjusted, k)
        nm_knn = float(
            sum((k - len(set(b) & set(a))) ** 2 for b, a in zip(before, after))
        )

    return {
        "nm_mn": int(np.count_nonzero(euclid > MOVE_TOLERANCE)) / n,
        "nm_dm_me": float(np.sum(euclid)) / n,
        "nm_dm_ne": float(np.sum(euclid)) / (k_box * math.sqrt(2.0) * n),
        "nm_dm_h": float(np.sum(np.abs(delta))),
        "nm_dm_se": float(np.sum(delta**2)),
        "nm_dm_imse": imse,
        "nm_d": math.sqrt(imse),
        "nm_knn": nm_knn,
    }


# ---------------------------------------------------------------------------
# Edge length preservation
# ---------------------------------------------------------------------------

def el_metrics(pair: AdjustmentPair) -> dict[str, float | None]:
    """Edge uniformity of the adjusted layout (over graph edges) and the
    relative standard deviation of length ratios over the Delaunay edges
    of the initial layout."""
    graph = pair.graph
    el_r: float | None = None
    if graph.m >= 1:
        idx = np.array(graph.edges)
        d = pair.adjusted.coords[idx[:, 0]] - pair.adjusted.coords[idx[:, 1]]
        lengths = np.hypot(d[:, 0], d[:, 1])
        lo = float(np.min(lengths))
        if lo > 0.0:
            el_r = float(np.max(lengths)) / lo

    el_rsdd: float | None = None
    if graph.n >= 2:
        tri = delaunay_edges(pair.initial, graph)
        pairs = np.array(
            [(graph.index_of(a), graph.index_of(b)) for a, b in tri.edges]
        )
        d0 = pair.initial.coords[pairs[:, 0]] - pair.initial.coords[pairs[:, 1]]
        d1 = pair.adjusted.coords[pairs[:, 0]] - pair.adjusted.coords[pairs[:, 1]]
        len0 = np.hypot(d0[:, 0], d0[:, 1])
        len1 = np.hypot(d1[:, 0], d1[:, 1])
        if np.all(len0 > 0.0):
            ratios = len1 / len0
            mean = float(np.mean(ratios))
            if mean != 0.0:
                el_rsdd = float(np.sqrt(np.mean((ratios - mean) ** 2))) / mean
    return {"el_r": el_r, "el_rsdd": el_rsdd}


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------

def compute_metrics(pair: AdjustmentPair, k: int | None = None) -> MetricReport:
    """Evaluate all 21 metrics on one adjustment pair."""
    values: dict[str, float | None] = {}
    values.update(oo_metrics(pair))
    values.update(sp_metrics(pair))
    values.update(gs_metrics(pair))
    values.update(nm_metrics(pair, k=k))
    values.update(el_metrics(pair))
    ordered = {name: values[name] for name in METRIC_NAMES}
    return MetricReport(ordered)
