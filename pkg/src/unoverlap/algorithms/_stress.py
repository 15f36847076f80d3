"""Proximity-stress overlap removal (prism) and tree-growing removal
(gtree). Both re-triangulate the current positions every outer iteration
and derive per-edge desired lengths from the overlap factor

    t_uv = max(1, min((w_u + w_v) / 2|dx|, (h_u + h_v) / 2|dy|))

which exceeds 1 exactly when the pair overlaps. prism caps the factor at
1.5 per iteration and relaxes positions with weighted stress sweeps; once
no triangulation edge is overlapped it also feeds remaining overlapping
pairs (found by full scan) into the relaxation until the layout is clean.
gtree leaves the factor uncapped, grows a maximum-violation spanning tree
from the node nearest the layout center, and translates whole subtrees
outward by each tree edge's deficit.
"""

from __future__ import annotations

import heapq
import math

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ..geometry import dedupe_jitter, delaunay_index_pairs, overlapping_index_pairs

_STRESS_SWEEPS = 30
_PRISM_FACTOR_CAP = 1.5
# overlapped edges ask for a small cushion beyond the exact clearing
# factor; without it the relaxation balances just short of the strict
# separation boundary and the tail of the run degenerates
_PRISM_FACTOR_CUSHION = 1.05
_TINY = 1e-12


def _extent(widths, heights, coords) -> float:
    w_bb = float(np.max(coords[:, 0] + widths / 2.0) - np.min(coords[:, 0] - widths / 2.0))
    h_bb = float(np.max(coords[:, 1] + heights / 2.0) - np.min(coords[:, 1] - heights / 2.0))
    return max(w_bb, h_bb)


def _triangulate(widths, heights, coords) -> np.ndarray:
    pts = dedupe_jitter(coords, _extent(widths, heights, coords))
    return np.array(delaunay_index_pairs(pts), dtype=int)


def _edge_lengths(coords, pairs) -> np.ndarray:
    d = coords[pairs[:, 0]] - coords[pairs[:, 1]]
    return np.hypot(d[:, 0], d[:, 1])


def _overlap_factors(widths, heights, coords, pairs, cap: float | None) -> np.ndarray:
    u, v = pairs[:, 0], pairs[:, 1]
    dx = np.abs(coords[u, 0] - coords[v, 0])
    dy = np.abs(coords[u, 1] - coords[v, 1])
    with np.errstate(divide="ignore"):
        rx = np.where(dx > 0.0, (widths[u] + widths[v]) / (2.0 * np.where(dx > 0, dx, 1.0)), np.inf)
        ry = np.where(dy > 0.0, (heights[u] + heights[v]) / (2.0 * np.where(dy > 0, dy, 1.0)), np.inf)
    t = np.maximum(1.0, np.minimum(rx, ry))
    if cap is not None:
        t = np.minimum(t, cap)
    return t


def _stress_sweeps(coords, pairs, desired, sweeps: int) -> np.ndarray:
    """Weighted stress majorization (weights 1/d^2), one sweep being one
    majorization update solved against the factorized weight Laplacian
    with the first node pinned (stress is translation invariant)."""
    n = len(coords)
    u, v = pairs[:, 0], pairs[:, 1]
    weight = 1.0 / desired**2

    lap = sparse.coo_matrix(
        (
            np.concatenate([weight, weight, -weight, -weight]),
            (
                np.concatenate([u, v, u, v]),
                np.concatenate([u, v, v, u]),
            ),
        ),
        shape=(n, n),
    ).tocsc()
    reduced = splu(lap[1:, 1:])
    anchor_col = lap[1:, 0].toarray().ravel()

    x = coords.copy()
    for _ in range(sweeps):
        diff = x[u] - x[v]
        dist = np.hypot(diff[:, 0], diff[:, 1])
        # coincident endpoints contribute no majorization pull
        b = np.where(dist < _TINY, 0.0, weight * desired / np.where(dist < _TINY, 1.0, dist))
        rhs = np.zeros((n, 2))
        pull = b[:, None] * diff
        np.add.at(rhs, u, pull)
        np.add.at(rhs, v, -pull)
        target = rhs[1:] - anchor_col[:, None] * x[0]
        x = np.vstack([x[0], np.column_stack([reduced.solve(target[:, 0]), reduced.solve(target[:, 1])])])
    return x


def prism_pass(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    out = coords.copy()
    iterations = 0
    while iterations < params.max_outer_iterations:
        pairs = _triangulate(widths, heights, out)
        factors = _overlap_factors(widths, heights, out, pairs, cap=None)
        if np.all(factors <= 1.0):
            extra = overlapping_index_pairs(widths, heights, out)
            if not extra:
                break
            seen = {(int(a), int(b)) for a, b in pairs}
            additions = [p for p in extra if p not in seen]
            if additions:
                pairs = np.concatenate([pairs, np.array(additions, dtype=int)])
                factors = _overlap_factors(widths, heights, out, pairs, cap=None)
        iterations += 1
        desired_factor = np.where(
            factors > 1.0,
            np.minimum(factors * _PRISM_FACTOR_CUSHION, _PRISM_FACTOR_CAP),
            1.0,
        )
        lengths = np.maximum(_edge_lengths(out, pairs), _TINY)
        out = _stress_sweeps(out, pairs, desired_factor * lengths, _STRESS_SWEEPS)
    return out, iterations


def _prim_tree(n: int, pairs: np.ndarray, priority: np.ndarray, root: int) -> list[list[int]]:
    """Maximum-priority spanning tree over the triangulation; returns
    children lists (children in index order)."""
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (a, b), p in zip(pairs, priority):
        adjacency[int(a)].append((int(b), float(p)))
        adjacency[int(b)].append((int(a), float(p)))
    children: list[list[int]] = [[] for _ in range(n)]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[root] = True
    heap: list[tuple[float, int, int]] = []
    for b, p in adjacency[root]:
        heapq.heappush(heap, (-p, root, b))
    added = 1
    while heap and added < n:
        neg_p, a, b = heapq.heappop(heap)
        if in_tree[b]:
            continue
        in_tree[b] = True
        children[a].append(b)
        added += 1
        for c, p in adjacency[b]:
            if not in_tree[c]:
                heapq.heappush(heap, (-p, b, c))
    for lst in children:
        lst.sort()
    return children


def _subtree_slices(children: list[list[int]], root: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Preorder traversal array plus [enter, exit) slice bounds per node."""
    n = len(children)
    preorder = np.empty(n, dtype=int)
    enter = np.empty(n, dtype=int)
    leave = np.empty(n, dtype=int)
    stack = [(root, False)]
    counter = 0
    while stack:
        node, done = stack.pop()
        if done:
            leave[node] = counter
            continue
        preorder[counter] = node
        enter[node] = counter
        counter += 1
        stack.append((node, True))
        for child in reversed(children[node]):
            stack.append((child, False))
    return preorder, enter, leave


def gtree_pass(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    n = len(coords)
    out = coords.copy()
    iterations = 0
    eps = params.epsilon
    while iterations < params.max_outer_iterations:
        if not overlapping_index_pairs(widths, heights, out):
            break
        iterations += 1
        pairs = _triangulate(widths, heights, out)
        factors = _overlap_factors(widths, heights, out, pairs, cap=None)
        lengths = np.maximum(_edge_lengths(out, pairs), _TINY)
        desired = factors * lengths
        deficit = desired - lengths

        min_x = np.min(out[:, 0] - widths / 2.0)
        max_x = np.max(out[:, 0] + widths / 2.0)
        min_y = np.min(out[:, 1] - heights / 2.0)
        max_y = np.max(out[:, 1] + heights / 2.0)
        center = np.array([(min_x + max_x) / 2.0, (min_y + max_y) / 2.0])
        root = int(np.lexsort((np.arange(n), np.hypot(*(out - center).T)))[0])

        desired_of = {}
        for (a, b), d in zip(pairs, desired):
            desired_of[(int(a), int(b))] = float(d)
            desired_of[(int(b), int(a))] = float(d)

        children = _prim_tree(n, pairs, deficit, root)
        preorder, enter, leave = _subtree_slices(children, root)
        parent = np.full(n, -1, dtype=int)
        for p in range(n):
            for c in children[p]:
                parent[c] = p
        for node in preorder:
            p = parent[node]
            if p < 0:
                continue
            vec = out[node] - out[p]
            cur = math.hypot(vec[0], vec[1])
            want = desired_of[(p, int(node))]
            if cur >= want:
                continue
            if cur < _TINY:
                angle = 2.0 * math.pi * (int(node) / n)
                direction = np.array([math.cos(angle), math.sin(angle)])
            else:
                direction = vec / cur
            shift = (want - cur + eps) * direction
            out[preorder[enter[node]:leave[node]]] += shift
    return out, iterations
