"""Outward-probing overlap removal in the word-cloud style.

Nodes are committed one at a time in order of increasing initial distance
from the bounding-box center (ties by dense index). A node starts at its
own initial position and, while colliding with an already committed node,
retreats outward along the ray from the center through its initial
position in steps of a tenth of its smaller dimension; the first free
position is committed. A node sitting exactly on the center draws its
probe direction from the seeded generator. Committed rectangles are
indexed in a uniform spatial grid keyed by cell.
"""

from __future__ import annotations

import math
import random

import numpy as np


def _cells(x: float, y: float, w: float, h: float, cell: float):
    x0 = math.floor((x - w / 2.0) / cell)
    x1 = math.floor((x + w / 2.0) / cell)
    y0 = math.floor((y - h / 2.0) / cell)
    y1 = math.floor((y + h / 2.0) / cell)
    for cx in range(x0, x1 + 1):
        for cy in range(y0, y1 + 1):
            yield (cx, cy)


def wordle_linear(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    n = len(coords)
    min_x = np.min(coords[:, 0] - widths / 2.0)
    max_x = np.max(coords[:, 0] + widths / 2.0)
    min_y = np.min(coords[:, 1] - heights / 2.0)
    max_y = np.max(coords[:, 1] + heights / 2.0)
    center = np.array([(min_x + max_x) / 2.0, (min_y + max_y) / 2.0])

    distances = np.hypot(coords[:, 0] - center[0], coords[:, 1] - center[1])
    order = np.lexsort((np.arange(n), distances))
    rng = random.Random(params.seed)
    cell = float(max(np.max(widths), np.max(heights)))
    grid: dict[tuple[int, int], list[int]] = {}
    out = coords.copy()

    for v in order:
        v = int(v)
        base = coords[v]
        direction = base - center
        norm = math.hypot(direction[0], direction[1])
        if norm < 1e-12:
            angle = rng.uniform(0.0, 2.0 * math.pi)
            direction = np.array([math.cos(angle), math.sin(angle)])
        else:
            direction = direction / norm
        step = 0.1 * min(widths[v], heights[v])

        k = 0
        while True:
            cand = base + direction * (step * k)
            if not _collides(grid, out, widths, heights, v, cand, cell):
                break
            k += 1
        out[v] = cand
        for key in _cells(cand[0], cand[1], widths[v], heights[v], cell):
            grid.setdefault(key, []).append(v)
    return out, 1


def _collides(grid, out, widths, heights, v, cand, cell) -> bool:
    for key in _cells(cand[0], cand[1], widths[v], heights[v], cell):
        for other in grid.get(key, ()):
            if abs(cand[0] - out[other, 0]) < (widths[v] + widths[other]) / 2.0 and abs(
                cand[1] - out[other, 1]
            ) < (heights[v] + heights[other]) / 2.0:
                return True
    return False
