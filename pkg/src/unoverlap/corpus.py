"""Synthetic corpus: graph generators, node sizing, and the baseline
force-directed initial layout.

Four generator families are provided (random, tree, small_world,
scale_free); all are deterministic in their seed. Node ids are zero-padded
so dense id order matches creation order. The initial layout is a plain
force-directed pass on each connected component, with components packed on
a grid afterwards; its purpose is only to produce plausible overlapping
inputs, since every metric compares the adjusted layout against whatever
the initial one was. Externally computed layouts can be supplied through
the JSON and DOT importers instead.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .model import Embedding, SizedGraph

GENERATOR_MODELS = ("random", "tree", "small_world", "scale_free")

DEFAULT_NODE_WIDTH = 4.0
DEFAULT_NODE_HEIGHT = 2.0
DEFAULT_LAYOUT_ITERATIONS = 300


@dataclass(frozen=True)
class NodeSizeRule:
    """How generated nodes are sized: every node ``uniform`` w x h, or
    ``degree_proportional`` with width base*(1 + slope*degree) and a 2:1
    aspect."""

    rule: str = "uniform"
    width: float = DEFAULT_NODE_WIDTH
    height: float = DEFAULT_NODE_HEIGHT
    base: float = DEFAULT_NODE_WIDTH
    slope: float = 0.25

    def __post_init__(self):
        if self.rule not in ("uniform", "degree_proportional"):
            raise ValueError(f"unknown node size rule {self.rule!r}")

    def sizes_for(self, degrees: list[int]) -> list[tuple[float, float]]:
        if self.rule == "uniform":
            return [(self.width, self.height)] * len(degrees)
        out = []
        for deg in degrees:
            w = self.base * (1.0 + self.slope * deg)
            out.append((w, w / 2.0))
        return out


@dataclass(frozen=True)
class CorpusSpec:
    """A corpus grid: generator models x sizes x seeds, with a sizing rule."""

    models: tuple[str, ...]
    sizes: tuple[int, ...]
    seeds_per_size: int
    node_size_rule: NodeSizeRule = field(default_factory=NodeSizeRule)

    def __post_init__(self):
        for model in self.models:
            if model not in GENERATOR_MODELS:
                raise ValueError(f"unknown generator model {model!r}")
        for n in self.sizes:
            if not 2 <= n <= 100_000:
                raise ValueError(f"corpus sizes must be within [2, 100000], got {n}")
        if self.seeds_per_size < 1:
            raise ValueError("seeds_per_size must be positive")

    @property
    def graph_count(self) -> int:
        return len(self.models) * len(self.sizes) * self.seeds_per_size

    def jobs(self):
        """All (model, n, seed) triples in deterministic order."""
        for model in self.models:
            for n in self.sizes:
                for seed in range(self.seeds_per_size):
                    yield model, n, seed


def _geometric_sizes(low: int, high: int, count: int) -> tuple[int, ...]:
    ratio = (high / low) ** (1.0 / (count - 1))
    values = [round(low * ratio**i) for i in range(count)]
    deduped = tuple(dict.fromkeys(values))
    return deduped


def paper_scale_spec() -> CorpusSpec:
    """Full-scale corpus: 4 models x 21 geometric sizes in [10, 1000]
    x 10 seeds = 840 graphs (6720 runs across the 8 algorithms)."""
    return CorpusSpec(
        models=GENERATOR_MODELS,
        sizes=_geometric_sizes(10, 1000, 21),
        seeds_per_size=10,
    )


def desk_scale_spec() -> CorpusSpec:
    """Small corpus for development and acceptance: 4 models x 7 sizes
    x 3 seeds = 84 graphs (672 runs)."""
    return CorpusSpec(
        models=GENERATOR_MODELS,
        sizes=(10, 18, 32, 56, 100, 178, 316),
        seeds_per_size=3,
    )


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def _node_id(i: int) -> str:
    return f"n{i:05d}"


def generate(
    model: str,
    n: int,
    seed: int,
    size_rule: NodeSizeRule | None = None,
    graph_id: str | None = None,
) -> SizedGraph:
    """Generate one synthetic graph.

    random: G(n, m) with m = min(2n, n(n-1)/2) edges drawn without
    replacement. tree: random recursive tree (node i attaches to a uniform
    earlier node). small_world: Watts-Strogatz ring with 4 neighbours and
    rewiring probability 0.1. scale_free: Barabasi-Albert preferential
    attachment adding 2 edges per node.
    """
    if n < 2:
        raise ValueError("generated graphs need at least 2 nodes")
    if model not in GENERATOR_MODELS:
        raise ValueError(f"unknown generator model {model!r}")
    seed = int(seed)

    if model == "random":
        m = min(2 * n, n * (n - 1) // 2)
        g = nx.gnm_random_graph(n, m, seed=seed)
        edges = [(int(a), int(b)) for a, b in g.edges()]
    elif model == "tree":
        rng = random.Random(seed)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
    elif model == "small_world":
        g = nx.watts_strogatz_graph(n, 4, 0.1, seed=seed)
        edges = [(int(a), int(b)) for a, b in g.edges()]
    else:  # scale_free
        g = nx.barabasi_albert_graph(n, 2, seed=seed)
        edges = [(int(a), int(b)) for a, b in g.edges()]

    degrees = [0] * n
    for a, b in edges:
        degrees[a] += 1
        degrees[b] += 1
    rule = size_rule or NodeSizeRule()
    sizes = rule.sizes_for(degrees)
    nodes = [(_node_id(i), w, h) for i, (w, h) in enumerate(sizes)]
    id_edges = [(_node_id(a), _node_id(b)) for a, b in edges]
    if graph_id is None:
        graph_id = f"{model}_n{n}_s{seed}"
    return SizedGraph(nodes, id_edges, graph_id=graph_id)


# ---------------------------------------------------------------------------
# Baseline initial layout
# ---------------------------------------------------------------------------

def _components(n: int, edges: list[tuple[int, int]]) -> list[list[int]]:
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        group = []
        while stack:
            v = stack.pop()
            group.append(v)
            for w in adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        components.append(sorted(group))
    return components


def _force_layout(
    coords: np.ndarray, edges: np.ndarray, ideal: float, iterations: int
) -> np.ndarray:
    n = len(coords)
    if n == 1:
        return coords
    pos = coords.copy()
    # step length capped by a linearly cooled temperature; repulsion acts
    # only within a local radius, which keeps crowded regions compact
    t0 = ideal
    cutoff = 2.0 * ideal
    for step in range(iterations):
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        repulse = np.where(dist < cutoff, ideal * ideal / dist, 0.0)
        np.fill_diagonal(repulse, 0.0)
        disp = np.sum(diff / dist[..., None] * repulse[..., None], axis=1)
        if len(edges):
            u, v = edges[:, 0], edges[:, 1]
            evec = pos[u] - pos[v]
            edist = np.maximum(np.hypot(evec[:, 0], evec[:, 1]), 1e-9)
            pull = (edist**2 / ideal)[:, None] * (evec / edist[:, None])
            np.subtract.at(disp, u, pull)
            np.add.at(disp, v, pull)
        temperature = t0 * (1.0 - step / iterations)
        norm = np.maximum(np.hypot(disp[:, 0], disp[:, 1]), 1e-9)
        limited = disp / norm[:, None] * np.minimum(norm, temperature)[:, None]
        pos += limited
    return pos


def initial_layout(
    graph: SizedGraph, seed: int, iterations: int = DEFAULT_LAYOUT_ITERATIONS
) -> Embedding:
    """Deterministic force-directed starting layout.

    Ideal edge length is 1.5x the mean node diagonal; positions start on a
    seeded random disk and cool linearly to zero over the iterations.
    Disconnected components are laid out independently and packed on a
    grid.
    """
    n = graph.n
    if n == 1:
        return Embedding.from_array(graph, np.zeros((1, 2)))
    rng = np.random.default_rng(int(seed))
    diag = np.hypot(graph.widths, graph.heights)
    ideal = 1.5 * float(np.mean(diag))

    radius = ideal * max(1.0, math.sqrt(n)) / 3.0
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    pos = np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    comps = _components(n, list(graph.edges))
    if len(comps) == 1:
        out = _force_layout(pos, np.array(graph.edges, dtype=int).reshape(-1, 2), ideal, iterations)
        return Embedding.from_array(graph, out)

    placed = np.zeros((n, 2))
    boxes = []
    for comp in comps:
        local = {v: k for k, v in enumerate(comp)}
        comp_edges = np.array(
            [(local[a], local[b]) for a, b in graph.edges if a in local and b in local],
            dtype=int,
        ).reshape(-1, 2)
        sub = _force_layout(pos[comp], comp_edges, ideal, iterations)
        lo = sub.min(axis=0)
        hi = sub.max(axis=0)
        boxes.append((comp, sub - (lo + hi) / 2.0, hi - lo))

    cell = max(max(b[2][0] for b in boxes), max(b[2][1] for b in boxes)) + 2.0 * ideal
    columns = math.ceil(math.sqrt(len(boxes)))
    for k, (comp, sub, _) in enumerate(boxes):
        cx = (k % columns) * cell
        cy = (k // columns) * cell
        placed[comp] = sub + np.array([cx, cy])
    return Embedding.from_array(graph, placed)
