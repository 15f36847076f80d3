"""Force-scan passes (the two order-preserving sweep algorithms).

Both run a horizontal pass followed by a vertical pass. A pass sorts the
nodes along the axis, accumulates non-decreasing shifts, and applies them
at the end; nodes sharing the exact same coordinate on the scan axis form
a block and receive one common shift, so relative order and equality along
the axis are both preserved. The plain variant accrues the shift needed to
clear every preceding overlapping node; the prime variant accrues only the
single most-constraining predecessor among those whose orthogonal-axis
intervals intersect, which yields tighter layouts. Pairs a pass cannot
separate (shared scan coordinate) are left to the other pass.
"""

from __future__ import annotations

import numpy as np


def _scan_axis(
    sizes_main: np.ndarray,
    sizes_other: np.ndarray,
    coords: np.ndarray,
    axis: int,
    epsilon: float,
    prime: bool,
) -> np.ndarray:
    n = len(coords)
    a = coords[:, axis]
    b = coords[:, 1 - axis]
    order = np.lexsort((np.arange(n), b, a))
    delta = np.zeros(n)

    block_start = 0
    prev_delta = 0.0
    while block_start < n:
        block_end = block_start
        a0 = a[order[block_start]]
        while block_end < n and a[order[block_end]] == a0:
            block_end += 1
        block = order[block_start:block_end]
        prior = order[:block_start]

        force = prev_delta
        if len(prior):
            half_other = sizes_other[prior] / 2.0
            half_main = sizes_main[prior] / 2.0
            for i in block:
                near_other = np.abs(b[prior] - b[i]) < half_other + sizes_other[i] / 2.0
                if prime:
                    candidates = near_other
                else:
                    candidates = near_other & (
                        np.abs(a[prior] - a[i]) < half_main + sizes_main[i] / 2.0
                    )
                if not np.any(candidates):
                    continue
                cand = prior[candidates]
                needed = (sizes_main[cand] + sizes_main[i]) / 2.0 - (a[i] - a[cand]) + epsilon
                if prime:
                    j = cand[int(np.argmax(needed))]
                    force = max(force, delta[j] + (sizes_main[j] + sizes_main[i]) / 2.0 - (a[i] - a[j]) + epsilon)
                else:
                    force = max(force, float(np.max(delta[cand] + needed)))
        delta[block] = force
        prev_delta = force
        block_start = block_end

    out = coords.copy()
    out[:, axis] = a + delta
    return out


def force_scan(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    """Plain force scan: horizontal pass, then a vertical pass on the result."""
    out = _scan_axis(widths, heights, coords, 0, params.epsilon, prime=False)
    out = _scan_axis(heights, widths, out, 1, params.epsilon, prime=False)
    return out, 1


def force_scan_prime(widths, heights, coords, params) -> tuple[np.ndarray, int]:
    """Tighter force scan: prime horizontal pass, plain vertical pass."""
    out = _scan_axis(widths, heights, coords, 0, params.epsilon, prime=True)
    out = _scan_axis(heights, widths, out, 1, params.epsilon, prime=False)
    return out, 1
