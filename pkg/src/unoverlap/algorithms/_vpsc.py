"""Separation-constraint overlap removal (two axis passes).

The horizontal pass emits a constraint for every currently overlapping
pair whose horizontal escape is at most as expensive as the vertical one,
with gap half the width sum. The vertical pass then constrains every pair
whose horizontal projections still intersect: the violated ones are
exactly the pairs still overlapping, and the already-satisfied ones guard
the solve against creating new collisions, so the result is overlap-free
by construction. Each axis solves

    minimise sum (p_v - desired_v)^2  subject to  p_v - p_u >= gap_uv

with merge-based block projection: blocks start as singletons, the most
violated inter-block constraint merges its blocks (each block positioned
at the mean of desired-minus-offset over its members), and any internal
violation left by non-chain merges is repaired by raising offsets along
the constraint order. On constraint chains the merge projection is the
exact least-squares optimum.
"""

from __future__ import annotations

import numpy as np

from ..geometry import overlapping_index_pairs


def solve_separation(
    desired: np.ndarray,
    constraints: list[tuple[int, int, float]],
    rank: np.ndarray,
) -> np.ndarray:
    """Project desired positions onto the feasible region of the
    separation constraints. ``rank`` must topologically order the
    constraint graph (every constraint points from lower to higher rank);
    it drives the internal repair pass."""
    n = len(desired)
    if not constraints:
        return np.array(desired, dtype=float)

    ordered = sorted(constraints, key=lambda c: (rank[c[1]], rank[c[0]]))
    u_arr = np.array([c[0] for c in ordered], dtype=int)
    v_arr = np.array([c[1] for c in ordered], dtype=int)
    gap_arr = np.array([c[2] for c in ordered], dtype=float)

    parent = np.arange(n)

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def all_roots() -> np.ndarray:
        return np.array([find(v) for v in range(n)], dtype=int)

    size = np.ones(n)
    block_sum = np.array(desired, dtype=float)  # sum of desired - offset per root
    offset = np.zeros(n)

    while True:
        while True:  # merge phase
            roots = all_roots()
            pos = block_sum[roots] / size[roots] + offset
            violation = pos[u_arr] + gap_arr - pos[v_arr]
            violation[roots[u_arr] == roots[v_arr]] = -np.inf
            c = int(np.argmax(violation))
            if violation[c] <= 1e-12:
                break
            u, v, gap = int(u_arr[c]), int(v_arr[c]), float(gap_arr[c])
            ru, rv = roots[u], roots[v]
            shift = offset[u] + gap - offset[v]
            offset[roots == rv] += shift
            block_sum[ru] += block_sum[rv] - shift * size[rv]
            size[ru] += size[rv]
            parent[rv] = ru

        changed = False  # repair phase: raise offsets along constraint order
        roots = all_roots()
        for u, v, gap in zip(u_arr, v_arr, gap_arr):
            if roots[u] != roots[v]:
                continue
            need = offset[u] + gap
            if offset[v] < need - 1e-12:
                block_sum[roots[v]] -= need - offset[v]
                offset[v] = need
                changed = True
        if not changed:
            break

    roots = all_roots()
    return block_sum[roots] / size[roots] + offset


def separation_pass(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    n = len(coords)
    out = coords.copy()
    eps = params.epsilon

    cons_x: list[tuple[int, int, float]] = []
    for i, j in overlapping_index_pairs(widths, heights, out):
        cost_x = (widths[i] + widths[j]) / 2.0 - abs(out[i, 0] - out[j, 0])
        cost_y = (heights[i] + heights[j]) / 2.0 - abs(out[i, 1] - out[j, 1])
        if cost_x > cost_y:
            continue  # this pair separates vertically instead
        if (out[i, 0], i) <= (out[j, 0], j):
            u, v = i, j
        else:
            u, v = j, i
        cons_x.append((u, v, (widths[u] + widths[v]) / 2.0 + eps))
    rank_x = np.empty(n, dtype=int)
    rank_x[np.lexsort((np.arange(n), out[:, 0]))] = np.arange(n)
    out[:, 0] = solve_separation(out[:, 0], cons_x, rank_x)

    dx = np.abs(out[:, 0][:, None] - out[:, 0][None, :])
    x_touch = dx < (widths[:, None] + widths[None, :]) / 2.0
    ii, jj = np.nonzero(np.triu(x_touch, k=1))
    cons_y: list[tuple[int, int, float]] = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        if (out[i, 1], i) <= (out[j, 1], j):
            u, v = i, j
        else:
            u, v = j, i
        cons_y.append((u, v, (heights[u] + heights[v]) / 2.0 + eps))
    rank_y = np.empty(n, dtype=int)
    rank_y[np.lexsort((np.arange(n), out[:, 1]))] = np.arange(n)
    out[:, 1] = solve_separation(out[:, 1], cons_y, rank_y)
    return out, 1
