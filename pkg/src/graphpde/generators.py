"""Small graph families and seeded random graphs for tests, scripts and the CLI."""
from __future__ import annotations

import numpy as np

from .graph import WeightedGraph


def path_graph(n, weights=None):
    names = [chr(ord("a") + i) if n <= 26 else f"v{i}" for i in range(n)]
    weights = [1.0] * (n - 1) if weights is None else list(weights)
    return WeightedGraph.from_edges([(names[i], names[i + 1], weights[i]) for i in range(n - 1)])


def cycle_graph(n, lengths=None):
    names = [f"v{i}" for i in range(n)]
    lengths = [1.0] * n if lengths is None else list(lengths)
    return WeightedGraph.from_edges([(names[i], names[(i + 1) % n], 1.0, lengths[i]) for i in range(n)])


def complete_graph(n):
    names = [chr(ord("a") + i) for i in range(n)]
    return WeightedGraph.from_edges([(names[i], names[j], 1.0) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves, lengths=None):
    lengths = [1.0] * leaves if lengths is None else list(lengths)
    return WeightedGraph.from_edges([("c", f"l{i}", 1.0, lengths[i]) for i in range(leaves)])


def random_connected_graph(n, rng, p=0.3, weighted=True, lengths=False):
    """Random spanning tree plus Erdos-Renyi extra edges; always connected.

    Weights are uniform in ``[0.5, 2]`` when ``weighted``; lengths uniform in
    ``[0.5, 1.5]`` when ``lengths``; otherwise 1.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = np.random.default_rng(rng)
    order = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        j = int(order[rng.integers(0, k)])
        i = int(order[k])
        pairs.add((min(i, j), max(i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                pairs.add((i, j))
    edges = []
    for i, j in sorted(pairs):
        w = float(rng.uniform(0.5, 2.0)) if weighted else 1.0
        ln = float(rng.uniform(0.5, 1.5)) if lengths else 1.0
        edges.append((f"v{i}", f"v{j}", w, ln))
    return WeightedGraph.from_edges(edges, vertices=[f"v{i}" for i in range(n)])


def random_interior(g, rng, fraction=0.7):
    """Random interior set whose every component touches its boundary.

    At least one vertex per connected component is left out, which forces
    every interior component to have a boundary neighbour.
    """
    rng = np.random.default_rng(rng)
    keep = []
    for comp in g.components():
        comp = list(comp)
        out = {comp[int(rng.integers(0, len(comp)))]}
        for v in comp:
            if v not in out and rng.random() < fraction:
                keep.append(v)
    if not keep:
        keep = [v for v in g.vertices if v not in {c[0] for c in g.components()}][:1]
    return tuple(v for v in g.vertices if v in set(keep))
