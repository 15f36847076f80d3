"""Deterministic SVG rendering of embedded graphs.

One rectangle per node, one line per edge between centers; rectangles
belonging to an overlapping pair are stroked distinctly and carry an
``overlap`` class. Side-by-side before/after rendering shares one scale.
"""

from __future__ import annotations

from .geometry import bounding_box, overlap_matrix
from .model import Embedding, SizedGraph

_MARGIN_FRACTION = 0.05


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _group(graph: SizedGraph, embedding: Embedding, offset: tuple[float, float]) -> list[str]:
    overlapped = overlap_matrix(graph.widths, graph.heights, embedding.coords).any(axis=1)
    ox, oy = offset
    parts = [f'<g transform="translate({_fmt(ox)},{_fmt(oy)})">']
    for i, j in graph.edges:
        parts.append(
            '<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-width="0.5"/>'.format(
                _fmt(embedding.coords[i, 0]),
                _fmt(embedding.coords[i, 1]),
                _fmt(embedding.coords[j, 0]),
                _fmt(embedding.coords[j, 1]),
            )
        )
    for i, node_id in enumerate(graph.node_ids):
        x = embedding.coords[i, 0] - graph.widths[i] / 2.0
        y = embedding.coords[i, 1] - graph.heights[i] / 2.0
        if overlapped[i]:
            extra = ' class="overlap" stroke="#cc2222" stroke-width="1.2"'
        else:
            extra = ' stroke="#333333" stroke-width="0.6"'
        parts.append(
            '<rect x="{}" y="{}" width="{}" height="{}" fill="#cfe2f3" fill-opacity="0.8"{}>'
            "<title>{}</title></rect>".format(
                _fmt(x), _fmt(y), _fmt(graph.widths[i]), _fmt(graph.heights[i]), extra, node_id
            )
        )
    parts.append("</g>")
    return parts


def render_svg(
    graph: SizedGraph, embedding: Embedding, second: Embedding | None = None
) -> bytes:
    """Render one embedding, or two side by side on a shared scale."""
    boxes = [bounding_box(graph, embedding)]
    if second is not None:
        boxes.append(bounding_box(graph, second))
    width = max(b.width for b in boxes)
    height = max(b.height for b in boxes)
    margin = _MARGIN_FRACTION * max(width, height, 1.0)

    groups: list[str] = []
    min_x = boxes[0].min_x
    min_y = min(b.min_y for b in boxes)
    groups.extend(_group(graph, embedding, (0.0, 0.0)))
    total_width = boxes[0].width
    if second is not None:
        shift = boxes[0].max_x + 2.0 * margin - boxes[1].min_x
        groups.extend(_group(graph, second, (shift, 0.0)))
        total_width = boxes[0].width + 2.0 * margin + boxes[1].width
    total_height = max(b.height for b in boxes)

    view = (
        min_x - margin,
        min_y - margin,
        total_width + 2.0 * margin,
        total_height + 2.0 * margin,
    )
    header = (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">'.format(
            *(_fmt(v) for v in view)
        )
    )
    doc = [header] + groups + ["</svg>"]
    return ("\n".join(doc) + "\n").encode("utf-8")
