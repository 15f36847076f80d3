"""Eight overlap-removal algorithms behind one uniform interface.

All algorithms move node centers only; sizes are fixed. ``adjust`` applies
the shared contract: padding inflation, the identity short-circuit for
already overlap-free inputs, the deterministic jitter pre-pass when
coincident centers are present, and a uniform-scaling fallback pass that
guarantees an overlap-free result when an iterative algorithm exhausts its
iteration cap. Everything is deterministic in (graph, initial embedding,
params).

Algorithm identifiers (CLI spelling uses hyphens):

* ``scaling``: uniform scaling about the bounding-box center by the
  smallest factor that clears every overlap;
* ``pfs`` / ``pfs_prime``: order-preserving force scans, a horizontal then
  a vertical pass;
* ``fta``: pairwise force transfer along the cheaper axis with cascaded
  pushes;
* ``vpsc``: per-axis separation constraints solved as least-squares
  projections;
* ``prism``: proximity stress majorization over Delaunay edges;
* ``rwordle_l``: outward linear probing along rays from the layout center;
* ``gtree``: Delaunay spanning tree with subtree translations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..geometry import dedupe_jitter, overlapping_index_pairs
from ..model import Embedding, GraphValidationError, SizedGraph
from ._fta import force_transfer
from ._scan import force_scan, force_scan_prime
from ._stress import gtree_pass, prism_pass
from ._vpsc import separation_pass
from ._wordle import wordle_linear

ALGORITHM_NAMES: tuple[str, ...] = (
    "scaling",
    "pfs",
    "pfs_prime",
    "fta",
    "vpsc",
    "prism",
    "rwordle_l",
    "gtree",
)

CLI_ALGORITHM_NAMES: tuple[str, ...] = tuple(n.replace("_", "-") for n in ALGORITHM_NAMES)


def normalize_algorithm(name: str) -> str:
    """Accept both CLI (hyphen) and identifier (underscore) spellings."""
    canonical = name.replace("-", "_")
    if canonical not in ALGORITHM_NAMES:
        raise ValueError(f"unknown algorithm {name!r}; expected one of {', '.join(CLI_ALGORITHM_NAMES)}")
    return canonical


@dataclass(frozen=True)
class AdjustParams:
    """Configuration of one adjustment run; defaults reproduce the
    benchmark configuration. ``padding`` inflates every node's width and
    height by twice its value during adjustment only."""

    algorithm: str
    seed: int = 0
    max_outer_iterations: int = 1000
    padding: float = 0.0
    epsilon: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "algorithm", normalize_algorithm(self.algorithm))
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be positive")
        if self.padding < 0:
            raise ValueError("padding must be non-negative")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class AdjustOutcome:
    """Result of one adjustment: the overlap-free embedding, whether the
    scaling fallback fired, iterations spent, and the wall-clock time of
    the adjustment call alone (seconds)."""

    adjusted: Embedding
    fallback_used: bool
    outer_iterations: int
    wall_time: float


def _bb_center(widths: np.ndarray, heights: np.ndarray, coords: np.ndarray) -> np.ndarray:
    min_x = np.min(coords[:, 0] - widths / 2.0)
    max_x = np.max(coords[:, 0] + widths / 2.0)
    min_y = np.min(coords[:, 1] - heights / 2.0)
    max_y = np.max(coords[:, 1] + heights / 2.0)
    return np.array([(min_x + max_x) / 2.0, (min_y + max_y) / 2.0])


def _scaling_factor_arrays(widths: np.ndarray, heights: np.ndarray, coords: np.ndarray) -> float:
    factor = 1.0
    for i, j in overlapping_index_pairs(widths, heights, coords):
        dx = abs(coords[i, 0] - coords[j, 0])
        dy = abs(coords[i, 1] - coords[j, 1])
        if dx == 0.0 and dy == 0.0:
            raise ValueError(
                "scaling factor undefined for overlapping nodes with coincident centers"
            )
        sx = (widths[i] + widths[j]) / 2.0 / dx if dx > 0.0 else np.inf
        sy = (heights[i] + heights[j]) / 2.0 / dy if dy > 0.0 else np.inf
        factor = max(factor, min(sx, sy))
    return float(factor)


def scaling_factor(graph: SizedGraph, embedding: Embedding, padding: float = 0.0) -> float:
    """Smallest uniform factor s >= 1 such that scaling all centers by s
    about any common point removes every overlap. Per overlapping pair the
    requirement is the cheaper of the two axis ratios; the result is the
    maximum over pairs, and it is minimal: any smaller factor leaves at
    least one pair overlapping."""
    widths = graph.widths + 2.0 * padding
    heights = graph.heights + 2.0 * padding
    return _scaling_factor_arrays(widths, heights, np.asarray(embedding.coords))


def _apply_scaling(
    widths: np.ndarray, heights: np.ndarray, coords: np.ndarray, epsilon: float
) -> np.ndarray:
    extent_center = _bb_center(widths, heights, coords)
    work = dedupe_jitter(coords, _extent(widths, heights, coords))
    s = _scaling_factor_arrays(widths, heights, work)
    if s <= 1.0:
        return work
    return extent_center + (work - extent_center) * (s * (1.0 + epsilon))


def _extent(widths: np.ndarray, heights: np.ndarray, coords: np.ndarray) -> float:
    w_bb = float(np.max(coords[:, 0] + widths / 2.0) - np.min(coords[:, 0] - widths / 2.0))
    h_bb = float(np.max(coords[:, 1] + heights / 2.0) - np.min(coords[:, 1] - heights / 2.0))
    return max(w_bb, h_bb)


def _scaling_pass(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    return _apply_scaling(widths, heights, coords, params.epsilon), 1


_DISPATCH = {
    "scaling": _scaling_pass,
    "pfs": force_scan,
    "pfs_prime": force_scan_prime,
    "fta": force_transfer,
    "vpsc": separation_pass,
    "prism": prism_pass,
    "rwordle_l": wordle_linear,
    "gtree": gtree_pass,
}


def adjust(graph: SizedGraph, initial: Embedding, params: AdjustParams) -> AdjustOutcome:
    """Run one overlap-removal algorithm on an embedded graph.

    The returned embedding is overlap-free under the strict predicate
    (with padding-inflated sizes when padding is set). Inputs already free
    of overlaps are returned unchanged. If the algorithm's iteration cap
    is exhausted with overlaps remaining, a uniform-scaling fallback pass
    clears them and ``fallback_used`` is set.
    """
    if initial.node_ids != graph.node_ids:
        raise GraphValidationError("embedding does not cover the graph")
    start = time.perf_counter()
    widths = graph.widths + 2.0 * params.padding
    heights = graph.heights + 2.0 * params.padding
    coords = np.array(initial.coords, dtype=float)

    if not overlapping_index_pairs(widths, heights, coords):
        return AdjustOutcome(initial, False, 0, time.perf_counter() - start)

    work = dedupe_jitter(coords, _extent(widths, heights, coords))
    result, iterations = _DISPATCH[params.algorithm](widths, heights, work, params)

    fallback = False
    if overlapping_index_pairs(widths, heights, result):
        result = _apply_scaling(widths, heights, result, params.epsilon)
        fallback = True

    wall = time.perf_counter() - start
    return AdjustOutcome(Embedding.from_array(graph, result), fallback, iterations, wall)
