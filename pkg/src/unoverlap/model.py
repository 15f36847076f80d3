"""Core data model: sized graphs, embeddings, and file I/O.

A :class:`SizedGraph` is an undirected simple graph whose nodes are
axis-aligned rectangles. Node ids are opaque strings; internally nodes are
held in a dense order sorted by id so that every iteration (and therefore
every seeded algorithm downstream) is deterministic. An :class:`Embedding`
assigns a center coordinate to every node of one graph. Both are immutable
after construction.

File formats:

* native JSON (``read_graph_json`` / ``write_graph_json``), round-trip safe;
* a Graphviz-flavoured DOT subset (``read_graph_dot``) for importing
  externally laid-out graphs, where ``pos`` is in points and
  ``width``/``height`` are in inches (converted at 72 points per inch);
* the benchmark records CSV (``write_records_csv``).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .catalog import METRIC_NAMES

POINTS_PER_INCH = 72.0
DOT_DEFAULT_WIDTH_IN = 0.75
DOT_DEFAULT_HEIGHT_IN = 0.5

CSV_HEADER: tuple[str, ...] = (
    "graph_id",
    "generator",
    "n",
    "m",
    "algorithm",
    "seed",
    "time_ms",
    "fallback",
) + METRIC_NAMES


class GraphValidationError(ValueError):
    """A graph, embedding, or input file violates a structural invariant."""


class DotParseError(ValueError):
    """A DOT input could not be parsed; carries the offending position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class SizedGraph:
    """Immutable undirected graph with per-node rectangle sizes.

    Nodes are stored sorted by id; ``edges`` holds dense index pairs
    ``(i, j)`` with ``i < j``, sorted. Construction validates uniqueness of
    ids, strictly positive sizes, absence of self-loops and duplicate
    edges, and that every edge endpoint exists.
    """

    __slots__ = ("graph_id", "node_ids", "widths", "heights", "edges", "_index")

    def __init__(
        self,
        nodes: Iterable[tuple[str, float, float]],
        edges: Iterable[tuple[str, str]] = (),
        graph_id: str = "",
    ):
        entries = sorted(nodes, key=lambda t: t[0])
        ids = tuple(e[0] for e in entries)
        seen: set[str] = set()
        for node_id in ids:
            if node_id in seen:
                raise GraphValidationError(f"node {node_id!r}: duplicate id")
            seen.add(node_id)
        widths = np.array([float(e[1]) for e in entries], dtype=float)
        heights = np.array([float(e[2]) for e in entries], dtype=float)
        for node_id, w, h in zip(ids, widths, heights):
            if not (w > 0.0 and h > 0.0) or not (math.isfinite(w) and math.isfinite(h)):
                raise GraphValidationError(
                    f"node {node_id!r}: width and height must be finite and positive, got {w}x{h}"
                )
        index = {node_id: i for i, node_id in enumerate(ids)}
        edge_set: set[tuple[int, int]] = set()
        for a, b in edges:
            for endpoint in (a, b):
                if endpoint not in index:
                    raise GraphValidationError(
                        f"edge [{a!r}, {b!r}]: unknown endpoint {endpoint!r}"
                    )
            if a == b:
                raise GraphValidationError(f"edge [{a!r}, {b!r}]: self-loop")
            i, j = index[a], index[b]
            key = (i, j) if i < j else (j, i)
            if key in edge_set:
                raise GraphValidationError(f"edge [{a!r}, {b!r}]: duplicate edge")
            edge_set.add(key)

        self.graph_id = str(graph_id)
        self.node_ids = ids
        self.widths = _readonly(widths)
        self.heights = _readonly(heights)
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(edge_set))
        self._index = index

    @property
    def n(self) -> int:
        return len(self.node_ids)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index_of(self, node_id: str) -> int:
        return self._index[node_id]

    def size_of(self, node_id: str) -> tuple[float, float]:
        i = self._index[node_id]
        return float(self.widths[i]), float(self.heights[i])

    def edge_ids(self) -> tuple[tuple[str, str], ...]:
        return tuple((self.node_ids[i], self.node_ids[j]) for i, j in self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SizedGraph):
            return NotImplemented
        return (
            self.graph_id == other.graph_id
            and self.node_ids == other.node_ids
            and np.array_equal(self.widths, other.widths)
            and np.array_equal(self.heights, other.heights)
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"SizedGraph(id={self.graph_id!r}, n={self.n}, m={self.m})"


class Embedding:
    """Immutable assignment of a center coordinate to every node of a graph.

    ``coords`` is an ``(n, 2)`` float array aligned with the graph's dense
    node order. All coordinates must be finite and the assignment total.
    """

    __slots__ = ("node_ids", "coords")

    def __init__(self, graph: SizedGraph, positions: Mapping[str, tuple[float, float]]):
        missing = [node_id for node_id in graph.node_ids if node_id not in positions]
        if missing:
            raise GraphValidationError(f"node {missing[0]!r}: missing position")
        extra = set(positions) - set(graph.node_ids)
        if extra:
            raise GraphValidationError(f"node {sorted(extra)[0]!r}: not in graph")
        coords = np.array([positions[node_id] for node_id in graph.node_ids], dtype=float)
        coords = coords.reshape(graph.n, 2)
        self._init_from_array(graph, coords)

    def _init_from_array(self, graph: SizedGraph, coords: np.ndarray) -> None:
        if coords.shape != (graph.n, 2):
            raise GraphValidationError(
                f"coordinate array shape {coords.shape} does not match n={graph.n}"
            )
        if not np.all(np.isfinite(coords)):
            bad = int(np.argwhere(~np.isfinite(coords))[0][0])
            raise GraphValidationError(
                f"node {graph.node_ids[bad]!r}: non-finite coordinate"
            )
        self.node_ids = graph.node_ids
        self.coords = _readonly(np.array(coords, dtype=float))

    @classmethod
    def from_array(cls, graph: SizedGraph, coords: np.ndarray) -> "Embedding":
        emb = object.__new__(cls)
        emb._init_from_array(graph, np.asarray(coords, dtype=float))
        return emb

    def position(self, node_id: str) -> tuple[float, float]:
        i = self.node_ids.index(node_id)
        return float(self.coords[i, 0]), float(self.coords[i, 1])

    def as_dict(self) -> dict[str, tuple[float, float]]:
        return {
            node_id: (float(x), float(y))
            for node_id, (x, y) in zip(self.node_ids, self.coords)
        }

    def translated(self, dx: float, dy: float) -> "Embedding":
        emb = object.__new__(Embedding)
        emb.node_ids = self.node_ids
        emb.coords = _readonly(self.coords + np.array([dx, dy]))
        return emb

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.node_ids == other.node_ids and np.array_equal(self.coords, other.coords)

    def __repr__(self) -> str:
        return f"Embedding(n={len(self.node_ids)})"


@dataclass(frozen=True)
class AdjustmentPair:
    """A graph together with its layout before and after adjustment.

    Node sizes are shared (adjustment never alters them); both embeddings
    must be total over the same graph.
    """

    graph: SizedGraph
    initial: Embedding
    adjusted: Embedding

    def __post_init__(self):
        if self.initial.node_ids != self.graph.node_ids:
            raise GraphValidationError("initial embedding does not cover the graph")
        if self.adjusted.node_ids != self.graph.node_ids:
            raise GraphValidationError("adjusted embedding does not cover the graph")


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

def read_graph_json(data: bytes | str) -> tuple[SizedGraph, Embedding | None]:
    """Parse the native JSON format; returns the graph and, when every node
    carries x/y, its embedding. Mixing positioned and unpositioned nodes is
    rejected."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphValidationError(f"input is not UTF-8: {exc}") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphValidationError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise GraphValidationError("top-level JSON value must be an object")
    graph_id = obj.get("graph_id", "")
    if not isinstance(graph_id, str):
        raise GraphValidationError("graph_id must be a string")
    raw_nodes = obj.get("nodes")
    if not isinstance(raw_nodes, list):
        raise GraphValidationError("missing or invalid 'nodes' array")
    raw_edges = obj.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphValidationError("'edges' must be an array")

    nodes: list[tuple[str, float, float]] = []
    positions: dict[str, tuple[float, float]] = {}
    positioned = 0
    for k, entry in enumerate(raw_nodes):
        if not isinstance(entry, dict):
            raise GraphValidationError(f"nodes[{k}]: node entries must be objects")
        node_id = entry.get("id")
        if not isinstance(node_id, str):
            raise GraphValidationError(f"nodes[{k}]: missing string 'id'")
        for field in ("w", "h"):
            if not isinstance(entry.get(field), (int, float)) or isinstance(entry.get(field), bool):
                raise GraphValidationError(f"node {node_id!r}: missing numeric {field!r}")
        nodes.append((node_id, float(entry["w"]), float(entry["h"])))
        has_x, has_y = "x" in entry, "y" in entry
        if has_x != has_y:
            raise GraphValidationError(f"node {node_id!r}: x and y must appear together")
        if has_x:
            for field in ("x", "y"):
                if not isinstance(entry[field], (int, float)) or isinstance(entry[field], bool):
                    raise GraphValidationError(f"node {node_id!r}: non-numeric {field!r}")
            positions[node_id] = (float(entry["x"]), float(entry["y"]))
            positioned += 1
    if 0 < positioned < len(nodes):
        raise GraphValidationError(
            "either all nodes must carry x/y coordinates or none may"
        )

    edges: list[tuple[str, str]] = []
    for k, pair in enumerate(raw_edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(e, str) for e in pair)
        ):
            raise GraphValidationError(f"edges[{k}]: edges must be pairs of node ids")
        edges.append((pair[0], pair[1]))

    graph = SizedGraph(nodes, edges, graph_id=graph_id)
    embedding = Embedding(graph, positions) if positioned else None
    return graph, embedding


def _json_num(x: float):
    # ints serialize without a trailing ".0"; keeps hand-written files stable
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else float(x)


def write_graph_json(graph: SizedGraph, embedding: Embedding | None = None) -> bytes:
    """Serialize to the canonical JSON form (sorted nodes/edges, compact)."""
    nodes = []
    for i, node_id in enumerate(graph.node_ids):
        entry: dict = {
            "id": node_id,
            "w": _json_num(graph.widths[i]),
            "h": _json_num(graph.heights[i]),
        }
        if embedding is not None:
            entry["x"] = float(embedding.coords[i, 0])
            entry["y"] = float(embedding.coords[i, 1])
        nodes.append(entry)
    edges = sorted(
        [sorted((graph.node_ids[i], graph.node_ids[j])) for i, j in graph.edges]
    )
    obj = {"graph_id": graph.graph_id, "nodes": nodes, "edges": edges}
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# DOT subset
# ---------------------------------------------------------------------------

_DOT_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<punct>--|->|[{}\[\];,=])
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*|[-+]?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?)(?:[eE][-+]?[0-9]+)?)
    """,
    re.VERBOSE | re.DOTALL,
)

_DOT_KEYWORDS = {"graph", "digraph", "strict", "node", "edge", "subgraph"}


def _dot_tokens(text: str):
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _DOT_TOKEN.match(text, pos)
        if match is None:
            raise DotParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        value = match.group()
        if kind not in ("ws", "comment"):
            yield kind, value, line, match.start() - line_start + 1
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
        pos = match.end()
    yield "eof", "", line, pos - line_start + 1


def _unquote(value: str) -> str:
    if value.startswith('"'):
        return value[1:-1].replace('\\"', '"').replace("\\\n", "")
    return value


class _DotParser:
    """Recursive-descent parser for the supported DOT subset: a single
    (di)graph with node statements, edge statements (chains allowed), and
    attribute lists. Attributes other than pos/width/height are ignored."""

    def __init__(self, text: str):
        self.tokens = list(_dot_tokens(text))
        self.pos = 0
        self.name = ""
        self.nodes: dict[str, dict] = {}
        self.edges: list[tuple[str, str]] = []

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise DotParseError(message, tok[2], tok[3])

    def expect(self, value: str):
        kind, val, line, col = self.next()
        if val != value:
            raise DotParseError(f"expected {value!r}, found {val!r}", line, col)

    def parse(self):
        kind, val, _, _ = self.peek()
        if val == "strict":
            self.next()
        kind, val, line, col = self.next()
        if val not in ("graph", "digraph"):
            raise DotParseError("expected 'graph' or 'digraph'", line, col)
        if self.peek()[1] != "{":  # optional graph name
            self.name = _unquote(self.next()[1])
        self.expect("{")
        while True:
            kind, val, line, col = self.peek()
            if val == "}":
                self.next()
                break
            if kind == "eof":
                self.error("unexpected end of input, missing '}'")
            self.statement()
        return self.nodes, self.edges

    def statement(self):
        kind, val, line, col = self.next()
        if val == "subgraph" or val == "{":
            raise DotParseError("subgraphs are not supported", line, col)
        if kind not in ("id", "quoted"):
            raise DotParseError(f"unexpected token {val!r}", line, col)
        name = _unquote(val)
        if name in ("node", "edge", "graph"):
            # default-attribute statement; parse and discard
            self.attr_list()
            self.end_statement()
            return
        chain = [name]
        while self.peek()[1] in ("--", "->"):
            self.next()
            kind, val, line, col = self.next()
            if kind not in ("id", "quoted"):
                raise DotParseError(f"expected node id after edge operator", line, col)
            chain.append(_unquote(val))
        attrs = self.attr_list()
        self.end_statement()
        if len(chain) == 1:
            entry = self.nodes.setdefault(name, {})
            entry.update(attrs)
        else:
            for node_id in chain:
                self.nodes.setdefault(node_id, {})
            for a, b in zip(chain, chain[1:]):
                self.edges.append((a, b))

    def attr_list(self) -> dict:
        attrs: dict = {}
        while self.peek()[1] == "[":
            self.next()
            while True:
                kind, val, line, col = self.peek()
                if val == "]":
                    self.next()
                    break
                kind, val, line, col = self.next()
                if kind not in ("id", "quoted"):
                    raise DotParseError(f"expected attribute name, found {val!r}", line, col)
                key = _unquote(val)
                self.expect("=")
                kind, val, line, col = self.next()
                if kind not in ("id", "quoted"):
                    raise DotParseError(f"expected attribute value, found {val!r}", line, col)
                attrs[key] = _unquote(val)
                if self.peek()[1] in (",", ";"):
                    self.next()
        return attrs

    def end_statement(self):
        if self.peek()[1] == ";":
            self.next()


def read_graph_dot(data: bytes | str) -> tuple[SizedGraph, Embedding]:
    """Import a DOT-subset file with positioned nodes.

    ``pos="x,y"`` values are taken as-is (points); ``width``/``height`` are
    inches and converted by a factor of 72 so sizes and positions share one
    unit. Nodes without explicit sizes get the defaults 0.75in x 0.5in.
    Edge direction is discarded; duplicate edges and self-loops are
    collapsed or dropped. Every node must carry a position.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphValidationError(f"input is not UTF-8: {exc}") from None
    parser = _DotParser(data)
    raw_nodes, raw_edges = parser.parse()
    if not raw_nodes:
        raise GraphValidationError("DOT input contains no nodes")

    nodes: list[tuple[str, float, float]] = []
    positions: dict[str, tuple[float, float]] = {}
    for node_id, attrs in raw_nodes.items():
        if "pos" not in attrs:
            raise GraphValidationError(
                f"node {node_id!r}: missing pos attribute (positions are required)"
            )
        pos = attrs["pos"].rstrip("!")
        parts = pos.split(",")
        try:
            x, y = (float(p) for p in parts)
        except ValueError:
            raise GraphValidationError(
                f"node {node_id!r}: malformed pos {attrs['pos']!r}"
            ) from None
        try:
            w_in = float(attrs.get("width", DOT_DEFAULT_WIDTH_IN))
            h_in = float(attrs.get("height", DOT_DEFAULT_HEIGHT_IN))
        except ValueError:
            raise GraphValidationError(
                f"node {node_id!r}: malformed width/height"
            ) from None
        nodes.append((node_id, w_in * POINTS_PER_INCH, h_in * POINTS_PER_INCH))
        positions[node_id] = (x, y)

    dedup: set[tuple[str, str]] = set()
    edges: list[tuple[str, str]] = []
    for a, b in raw_edges:
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if key not in dedup:
            dedup.add(key)
            edges.append(key)

    graph = SizedGraph(nodes, edges, graph_id=parser.name)
    return graph, Embedding(graph, positions)


# ---------------------------------------------------------------------------
# Benchmark records CSV
# ---------------------------------------------------------------------------

def format_real(x: float) -> str:
    """Render a real with at most 9 significant digits, shortest form."""
    if x != x:
        return ""
    s = f"{x:.9g}"
    return s


def write_records_csv(records: Sequence, mask_time: bool = False) -> bytes:
    """Serialize benchmark records deterministically.

    Records must expose graph_id, generator, n, m, algorithm, seed,
    time_ms, fallback and a ``metrics`` object with a ``values`` mapping.
    Undefined metric values render as empty cells. ``mask_time`` writes 0
    in the time column so outputs can be compared across runs.
    """
    lines = [",".join(CSV_HEADER)]
    for rec in records:
        time_str = "0" if mask_time else format_real(float(rec.time_ms))
        cells = [
            rec.graph_id,
            rec.generator,
            str(int(rec.n)),
            str(int(rec.m)),
            rec.algorithm,
            str(int(rec.seed)),
            time_str,
            "true" if rec.fallback else "false",
        ]
        values = rec.metrics.values if rec.metrics is not None else {}
        for name in METRIC_NAMES:
            value = values.get(name)
            cells.append("" if value is None else format_real(float(value)))
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")
