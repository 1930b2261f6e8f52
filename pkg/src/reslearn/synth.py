"""Synthetic graphs with planted clusterings, plus small named fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import Clustering, Graph


@dataclass(frozen=True)
class PlantedSpec:
    sizes: tuple[int, ...]
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError("community sizes must be >= 1")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")


def ring_of_cliques(c: int, k: int) -> tuple[Graph, Clustering]:
    """``c`` cliques of size ``k``; the last node of clique i joins the first of clique i+1."""
    if c < 3 or k < 3:
        raise ValueError("need c >= 3 and k >= 3")
    edges = []
    for i in range(c):
        base = i * k
        edges += [(base + a, base + b) for a, b in combinations(range(k), 2)]
        edges.append((base + k - 1, ((i + 1) % c) * k))
    G = Graph.from_edges(c * k, edges)
    return G, Clustering(np.repeat(np.arange(c), k))


def planted_partition(spec: PlantedSpec) -> tuple[Graph, Clustering]:
    """Seeded planted-partition graph; isolated nodes get one edge to a random community mate."""
    rng = np.random.default_rng(spec.seed)
    labels = np.repeat(np.arange(len(spec.sizes)), spec.sizes)
    n = len(labels)
    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    p = np.where(same, spec.p_in, spec.p_out)
    keep = rng.random(len(iu)) < p
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, iu[keep], 1)
    np.add.at(deg, ju[keep], 1)
    for v in np.flatnonzero(deg == 0):
        if deg[v] > 0:  # patched by an earlier isolated mate
            continue
        mates = np.flatnonzero((labels == labels[v]) & (np.arange(n) != v))
        if len(mates) == 0:
            raise ValueError(f"node {v} is isolated in a singleton community")
        w = int(rng.choice(mates))
        edges.append((int(v), w))
        deg[v] += 1
        deg[w] += 1
    return Graph.from_edges(n, edges), Clustering(labels)


# ------------------------------------------------------------ small fixtures
# Labels follow 1-based ids so fixtures read like hand calculations.

def barbell() -> Graph:
    """Triangles {1,2,3} and {4,5,6} joined by the edge 3-4."""
    edges = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    return Graph.from_edges(6, edges, labels=range(1, 7))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], labels=range(1, n + 1))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], labels=range(1, n + 1))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2), labels=range(1, n + 1))


def gnp(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def connected_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) plus a random spanning path so the graph is connected."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    order = rng.permutation(n)
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    have = set(edges)
    for a, b in zip(order[:-1].tolist(), order[1:].tolist()):
        e = (min(a, b), max(a, b))
        if e not in have:
            have.add(e)
            edges.append(e)
    return Graph.from_edges(n, edges)


def fixture_graphs(max_n: int = 9) -> dict[str, Graph]:
    """Named small connected graphs used as exhaustive-check fixtures."""
    out: dict[str, Graph] = {"barbell": barbell()}
    for n in range(3, max_n + 1):
        out[f"path{n}"] = path_graph(n)
        out[f"cycle{n}"] = cycle_graph(n)
    for n in range(4, min(max_n, 6) + 1):
        out[f"complete{n}"] = complete_graph(n)
    if max_n >= 9:
        out["ring3x3"] = ring_of_cliques(3, 3)[0]
    for seed in range(6):
        n = min(max_n, 7 + seed % 3)
        out[f"gnp{n}_s{seed}"] = connected_gnp(n, 0.35, seed)
    return {k: g for k, g in out.items() if g.n <= max_n}
