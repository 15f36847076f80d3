"""Shared computational geometry: overlap tests, bounding boxes,
corner-aware convex hulls, hull ray sampling, Delaunay edges, and
k-nearest-neighbour sets.

Conventions used throughout:

* the rectangle overlap predicate is strict, so flush (touching) nodes do
  not overlap;
* hulls are built over the 4 corner points of every node rectangle, not
  the centers, and their centroid is the polygon area centroid;
* coincident points are perturbed by a deterministic jitter before
  triangulation so results stay reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .model import Embedding, SizedGraph

GEOM_TOL = 1e-9


@dataclass(frozen=True)
class BoundingBox:
    """Smallest axis-aligned rectangle containing every node rectangle."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def center(self) -> tuple[float, float]:
        return ((self.min_x + self.max_x) / 2.0, (self.min_y + self.max_y) / 2.0)

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class ConvexHull:
    """Convex polygon over node corners, counter-clockwise, no collinear
    triples retained. ``centroid`` is the area centroid (vertex mean for
    degenerate zero-area hulls)."""

    vertices: tuple[tuple[float, float], ...]
    centroid: tuple[float, float]
    area: float


@dataclass(frozen=True)
class Triangulation:
    """Edge set of a Delaunay triangulation over node centers, as sorted
    unordered node-id pairs."""

    edges: tuple[tuple[str, str], ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


# ---------------------------------------------------------------------------
# Overlap predicate
# ---------------------------------------------------------------------------

def overlaps(
    u_pos: tuple[float, float],
    u_size: tuple[float, float],
    v_pos: tuple[float, float],
    v_size: tuple[float, float],
) -> bool:
    """Strict rectangle overlap test on center positions and (w, h) sizes."""
    return abs(v_pos[0] - u_pos[0]) < (u_size[0] + v_size[0]) / 2.0 and abs(
        v_pos[1] - u_pos[1]
    ) < (u_size[1] + v_size[1]) / 2.0


def overlap_matrix(widths: np.ndarray, heights: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Boolean (n, n) matrix of the strict overlap predicate (diagonal False)."""
    dx = np.abs(coords[:, 0][:, None] - coords[:, 0][None, :])
    dy = np.abs(coords[:, 1][:, None] - coords[:, 1][None, :])
    need_x = (widths[:, None] + widths[None, :]) / 2.0
    need_y = (heights[:, None] + heights[None, :]) / 2.0
    mat = (dx < need_x) & (dy < need_y)
    np.fill_diagonal(mat, False)
    return mat


def overlapping_index_pairs(
    widths: np.ndarray, heights: np.ndarray, coords: np.ndarray
) -> list[tuple[int, int]]:
    """All unordered index pairs that overlap, in lexicographic order."""
    mat = overlap_matrix(widths, heights, coords)
    ii, jj = np.nonzero(np.triu(mat, k=1))
    return list(zip(ii.tolist(), jj.tolist()))


def count_overlaps(graph: SizedGraph, embedding: Embedding) -> int:
    """Number of unordered overlapping node pairs; 0 means overlap-free."""
    if graph.n < 2:
        return 0
    mat = overlap_matrix(graph.widths, graph.heights, embedding.coords)
    return int(np.count_nonzero(np.triu(mat, k=1)))


# ---------------------------------------------------------------------------
# Bounding box and convex hull
# ---------------------------------------------------------------------------

def bounding_box(graph: SizedGraph, embedding: Embedding) -> BoundingBox:
    if graph.n == 0:
        raise ValueError("bounding box of an empty graph")
    x = embedding.coords[:, 0]
    y = embedding.coords[:, 1]
    return BoundingBox(
        min_x=float(np.min(x - graph.widths / 2.0)),
        min_y=float(np.min(y - graph.heights / 2.0)),
        max_x=float(np.max(x + graph.widths / 2.0)),
        max_y=float(np.max(y + graph.heights / 2.0)),
    )


def corner_points(graph: SizedGraph, embedding: Embedding) -> np.ndarray:
    """The 4n rectangle corners of an embedded graph as an (4n, 2) array."""
    x = embedding.coords[:, 0]
    y = embedding.coords[:, 1]
    hw = graph.widths / 2.0
    hh = graph.heights / 2.0
    return np.concatenate(
        [
            np.column_stack([x - hw, y - hh]),
            np.column_stack([x + hw, y - hh]),
            np.column_stack([x + hw, y + hh]),
            np.column_stack([x - hw, y + hh]),
        ]
    )


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(points: np.ndarray) -> list[tuple[float, float]]:
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all points collinear
        return [pts[0], pts[-1]]
    return hull


def _polygon_area_centroid(vertices) -> tuple[float, tuple[float, float]]:
    # shoelace area plus the matching area centroid
    a2 = 0.0
    cx = 0.0
    cy = 0.0
    k = len(vertices)
    for i in range(k):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % k]
        w = x0 * y1 - x1 * y0
        a2 += w
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    area = a2 / 2.0
    if abs(area) < GEOM_TOL * GEOM_TOL:
        mx = sum(v[0] for v in vertices) / k
        my = sum(v[1] for v in vertices) / k
        return 0.0, (mx, my)
    return area, (cx / (6.0 * area), cy / (6.0 * area))


def convex_hull(graph: SizedGraph, embedding: Embedding) -> ConvexHull:
    """Convex hull of the 4n node corners (counter-clockwise)."""
    if graph.n == 0:
        raise ValueError("convex hull of an empty graph")
    verts = _monotone_chain(corner_points(graph, embedding))
    if len(verts) < 3:
        mx = sum(v[0] for v in verts) / len(verts)
        my = sum(v[1] for v in verts) / len(verts)
        return ConvexHull(tuple(verts), (mx, my), 0.0)
    area, centroid = _polygon_area_centroid(verts)
    return ConvexHull(tuple(verts), centroid, abs(area))


def hull_ray_lengths(hull: ConvexHull) -> list[float]:
    """Distances from the hull centroid to its boundary along rays at
    0, 10, ..., 350 degrees (36 values in angle order)."""
    if hull.area <= 0.0:
        raise ValueError("ray lengths are undefined for a degenerate hull")
    cx, cy = hull.centroid
    verts = hull.vertices
    k = len(verts)
    lengths: list[float] = []
    for step in range(36):
        theta = math.radians(10.0 * step)
        dx, dy = math.cos(theta), math.sin(theta)
        best = 0.0
        for i in range(k):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % k]
            ex, ey = bx - ax, by - ay
            denom = dx * ey - dy * ex
            if abs(denom) < 1e-15:
                continue
            # solve c + t*d == a + s*e
            t = ((ax - cx) * ey - (ay - cy) * ex) / denom
            s = ((ax - cx) * dy - (ay - cy) * dx) / denom
            if t > GEOM_TOL and -GEOM_TOL <= s <= 1.0 + GEOM_TOL:
                best = max(best, t)
        if best <= 0.0:
            raise ValueError("hull centroid ray found no boundary intersection")
        lengths.append(best)
    return lengths


# ---------------------------------------------------------------------------
# Delaunay triangulation
# ---------------------------------------------------------------------------

def dedupe_jitter(coords: np.ndarray, extent: float) -> np.ndarray:
    """Perturb coordinates deterministically when duplicates are present.

    The i-th point is offset by (eps*cos(2*pi*i/n)*i, eps*sin(2*pi*i/n)*i)
    with eps = 1e-6 * max(extent, 1). Returns the input array unchanged
    when all points are distinct.
    """
    n = len(coords)
    if n == len({(float(x), float(y)) for x, y in coords}):
        return coords
    eps = 1e-6 * max(extent, 1.0)
    out = np.array(coords, dtype=float)
    angles = 2.0 * math.pi * np.arange(n) / n
    scale = eps * np.arange(n)
    out[:, 0] += np.cos(angles) * scale
    out[:, 1] += np.sin(angles) * scale
    return out


def _collinear(points: np.ndarray) -> bool:
    if len(points) < 3:
        return True
    p0 = points[0]
    d = points - p0
    span = float(np.max(np.abs(d))) or 1.0
    cross = d[:, 0, None] * d[None, :, 1] - d[:, 1, None] * d[None, :, 0]
    return bool(np.all(np.abs(cross) <= GEOM_TOL * span * span))


def _collinear_path_edges(points: np.ndarray) -> list[tuple[int, int]]:
    # order the points along their dominant direction and chain neighbours
    p0 = points[0]
    d = points - p0
    direction = d[int(np.argmax(np.hypot(d[:, 0], d[:, 1])))]
    norm = math.hypot(direction[0], direction[1])
    if norm == 0.0:
        order = list(range(len(points)))
    else:
        proj = d @ (direction / norm)
        order = np.lexsort((np.arange(len(points)), proj)).tolist()
    return [tuple(sorted((order[i], order[i + 1]))) for i in range(len(order) - 1)]


def delaunay_index_pairs(points: np.ndarray) -> list[tuple[int, int]]:
    """Delaunay edge set over distinct points as sorted index pairs.

    Falls back to the adjacency path for collinear inputs and to the
    single pair for n = 2.
    """
    n = len(points)
    if n < 2:
        raise ValueError("triangulation needs at least 2 points")
    if n == 2:
        return [(0, 1)]
    if _collinear(points):
        return sorted(_collinear_path_edges(points))
    try:
        tri = _SciPyDelaunay(points)
    except QhullError:
        return sorted(_collinear_path_edges(points))
    edges: set[tuple[int, int]] = set()
    for simplex in tri.simplices:
        a, b, c = int(simplex[0]), int(simplex[1]), int(simplex[2])
        edges.add((a, b) if a < b else (b, a))
        edges.add((a, c) if a < c else (c, a))
        edges.add((b, c) if b < c else (c, b))
    return sorted(edges)


def delaunay_edges(embedding: Embedding, graph: SizedGraph | None = None) -> Triangulation:
    """Delaunay edges over the embedding's node centers, by node id.

    Coincident centers are jittered deterministically before
    triangulating; the jitter only affects the edge set, not the stored
    coordinates.
    """
    n = len(embedding.node_ids)
    if n < 2:
        raise ValueError("triangulation needs at least 2 nodes")
    coords = embedding.coords
    if graph is not None:
        box = bounding_box(graph, embedding)
        extent = max(box.width, box.height)
    else:
        extent = float(
            max(
                np.max(coords[:, 0]) - np.min(coords[:, 0]),
                np.max(coords[:, 1]) - np.min(coords[:, 1]),
            )
        )
    pts = dedupe_jitter(coords, extent)
    pairs = delaunay_index_pairs(pts)
    ids = embedding.node_ids
    return Triangulation(tuple((ids[i], ids[j]) for i, j in pairs))


# ---------------------------------------------------------------------------
# Nearest neighbours
# ---------------------------------------------------------------------------

def knn_index_lists(coords: np.ndarray, k: int) -> list[list[int]]:
    """For each point, the indices of its k nearest other points by center
    distance, ties broken by index order."""
    n = len(coords)
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    idx = np.arange(n)
    result: list[list[int]] = []
    for i in range(n):
        order = np.lexsort((idx, dist[i]))
        result.append(order[:k].tolist())
    return result


def knn_sets(embedding: Embedding, k: int) -> dict[str, frozenset[str]]:
    """Map each node id to the ids of its k nearest neighbours."""
    ids = embedding.node_ids
    lists = knn_index_lists(embedding.coords, k)
    return {
        ids[i]: frozenset(ids[j] for j in neighbours)
        for i, neighbours in enumerate(lists)
    }
