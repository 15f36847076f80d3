import random

import numpy as np
import pytest

from unoverlap.model import AdjustmentPair, Embedding, SizedGraph


def make_graph(nodes, edges=(), graph_id="g"):
    """nodes: list of (id, w, h) or (id, w, h, x, y). Returns graph and,
    when positions were given, the embedding."""
    plain = [(n[0], n[1], n[2]) for n in nodes]
    graph = SizedGraph(plain, edges, graph_id=graph_id)
    if len(nodes[0]) == 5:
        positions = {n[0]: (n[3], n[4]) for n in nodes}
        return graph, Embedding(graph, positions)
    return graph, None


def random_instance(rng: random.Random, n=None, edge_prob=0.2, size_span=(0.5, 4.0), pos_span=10.0):
    """A random sized graph with a random embedding; generic positions."""
    if n is None:
        n = rng.randint(1, 12)
    nodes = []
    for i in range(n):
        w = rng.uniform(*size_span)
        h = rng.uniform(*size_span)
        nodes.append((f"v{i:03d}", w, h))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.append((f"v{i:03d}", f"v{j:03d}"))
    graph = SizedGraph(nodes, edges)
    coords = np.array([[rng.uniform(-pos_span, pos_span) for _ in range(2)] for _ in range(n)])
    return graph, Embedding.from_array(graph, coords)


def random_pair(rng: random.Random, n=None, move_span=4.0, **kwargs) -> AdjustmentPair:
    graph, initial = random_instance(rng, n=n, **kwargs)
    moved = initial.coords + np.array(
        [[rng.uniform(-move_span, move_span) for _ in range(2)] for _ in range(graph.n)]
    )
    return AdjustmentPair(graph, initial, Embedding.from_array(graph, moved))


@pytest.fixture
def rng():
    return random.Random(20260809)
