"""Force-transfer overlap removal.

Each outer iteration scans the currently overlapping pairs in dense-index
order. For a pair still overlapping, the member with the larger coordinate
escapes along the axis with the smaller escape cost, and the move cascades:
nodes the mover now overlaps on its way are pushed by the same delta,
breadth-first. Iterates until overlap-free or the cap is hit (the caller
then applies the scaling fallback).
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..geometry import overlapping_index_pairs


def _push(
    out: np.ndarray,
    widths: np.ndarray,
    heights: np.ndarray,
    start: int,
    axis: int,
    delta: float,
) -> None:
    n = len(out)
    indices = np.arange(n)
    visited = {start}
    queue = deque([start])
    while queue:
        k = queue.popleft()
        out[k, axis] += delta
        dx = np.abs(out[:, 0] - out[k, 0])
        dy = np.abs(out[:, 1] - out[k, 1])
        overlapping = (dx < (widths + widths[k]) / 2.0) & (dy < (heights + heights[k]) / 2.0)
        overlapping[k] = False
        ahead = (out[:, axis] > out[k, axis]) | (
            (out[:, axis] == out[k, axis]) & (indices > k)
        )
        for t in np.nonzero(overlapping & ahead)[0]:
            t = int(t)
            if t not in visited:
                visited.add(t)
                queue.append(t)


def force_transfer(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    out = coords.copy()
    iterations = 0
    while iterations < params.max_outer_iterations:
        pairs = overlapping_index_pairs(widths, heights, out)
        if not pairs:
            break
        iterations += 1
        for i, j in pairs:
            dx = abs(out[i, 0] - out[j, 0])
            dy = abs(out[i, 1] - out[j, 1])
            cost_x = (widths[i] + widths[j]) / 2.0 - dx
            cost_y = (heights[i] + heights[j]) / 2.0 - dy
            if cost_x <= 0.0 or cost_y <= 0.0:
                continue  # separated by an earlier move this scan
            if cost_x <= cost_y:
                axis, amount = 0, cost_x
            else:
                axis, amount = 1, cost_y
            if out[i, axis] > out[j, axis]:
                mover = i
            elif out[i, axis] < out[j, axis]:
                mover = j
            else:
                mover = max(i, j)
            _push(out, widths, heights, mover, axis, amount + params.epsilon)
    return out, iterations
