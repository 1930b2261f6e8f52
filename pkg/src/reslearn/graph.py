"""Undirected simple graphs, node sets, clusterings and their file formats."""

from __future__ import annotations

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Raised for malformed edge-list, node-set or clustering input."""


class UndefinedConductance(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Adjacency is stored CSR-style with sorted neighbor lists. ``labels``
    holds the original node id of every compacted node so results can be
    reported in input ids.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray
    dropped_loops: int = 0
    dropped_duplicates: int = 0
    _adj: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.labels):
            arr.setflags(write=False)
        adj = [self.indices[self.indptr[u]:self.indptr[u + 1]].tolist() for u in range(self.n)]
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[int] | None = None) -> "Graph":
        """Build from 0-based edge pairs. Loops and duplicates are dropped and counted."""
        loops = 0
        seen: set[tuple[int, int]] = set()
        dup = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                dup += 1
                continue
            seen.add(key)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            nbrs[u].append(v)
            nbrs[v].append(u)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in nbrs])
        indices = np.fromiter((w for a in nbrs for w in sorted(a)), dtype=np.int64, count=int(indptr[-1]))
        lab = np.arange(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        if len(lab) != n:
            raise ValueError("labels must have one entry per node")
        if loops or dup:
            log.warning("dropped %d self-loops and %d duplicate edges", loops, dup)
        return cls(indptr, indices, lab, loops, dup)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def total_volume(self) -> int:
        return 2 * self.m

    def neighbors(self, u: int) -> list[int]:
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.indices[self.indptr[u]:self.indptr[u + 1]]
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        e = self.edges()
        A[e[:, 0], e[:, 1]] = 1
        A[e[:, 1], e[:, 0]] = 1
        return A

    def node_index(self) -> dict[int, int]:
        return {int(lab): i for i, lab in enumerate(self.labels)}

    def digest(self) -> str:
        """Content hash over labels and edges; used for cache keys and manifests."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.labels).tobytes())
        h.update(np.ascontiguousarray(self.edges()).tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr) and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.labels, other.labels))

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------- node sets

def as_mask(G: Graph, S) -> np.ndarray:
    """Boolean membership mask for a node set given as ids or as a mask."""
    S = np.asarray(S)
    if S.dtype == bool:
        if S.shape != (G.n,):
            raise ValueError("mask length does not match graph")
        return S
    mask = np.zeros(G.n, dtype=bool)
    if S.size:
        if S.min() < 0 or S.max() >= G.n:
            raise ValueError("node id out of range")
        if len(np.unique(S)) != S.size:
            raise ValueError("duplicate node ids in set")
        mask[S] = True
    return mask


def cut(G: Graph, S) -> int:
    """Number of edges with exactly one endpoint in ``S``."""
    mask = as_mask(G, S)
    e = G.edges()
    if len(e) == 0:
        return 0
    return int(np.count_nonzero(mask[e[:, 0]] != mask[e[:, 1]]))


def vol(G: Graph, S) -> int:
    return int(G.degrees[as_mask(G, S)].sum())


def conductance(G: Graph, S) -> Fraction:
    """cut(S) / min(vol(S), vol(complement)) as an exact fraction."""
    mask = as_mask(G, S)
    if not mask.any() or mask.all():
        raise UndefinedConductance("conductance needs a nonempty proper subset")
    vs = vol(G, mask)
    denom = min(vs, G.total_volume - vs)
    if denom == 0:
        raise UndefinedConductance("set or complement has zero volume")
    return Fraction(cut(G, mask), denom)


def bfs_grow(G: Graph, X, target_size: int) -> np.ndarray:
    """Grow ``X`` by whole BFS layers until ``target_size`` nodes are reached.

    The last, partial layer is filled lowest id first. Returns sorted ids.
    """
    members = set(int(v) for v in np.flatnonzero(as_mask(G, X)))
    if not members:
        raise ValueError("seed set must be nonempty")
    if target_size < len(members):
        raise ValueError("target_size smaller than seed set")
    frontier = sorted(members)
    while len(members) < target_size and frontier:
        layer = sorted({w for u in frontier for w in G.neighbors(u) if w not in members})
        room = target_size - len(members)
        layer = layer[:room]
        members.update(layer)
        frontier = layer
    return np.array(sorted(members), dtype=np.int64)


def connected_components(G: Graph) -> np.ndarray:
    comp = -np.ones(G.n, dtype=np.int64)
    c = 0
    for s in range(G.n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        q = deque([s])
        while q:
            u = q.popleft()
            for w in G.neighbors(u):
                if comp[w] < 0:
                    comp[w] = c
                    q.append(w)
        c += 1
    return comp


def largest_component(G: Graph) -> Graph:
    comp = connected_components(G)
    if G.n == 0:
        return G
    big = np.bincount(comp).argmax()
    return induced_subgraph(G, np.flatnonzero(comp == big))


def induced_subgraph(G: Graph, nodes) -> Graph:
    nodes = np.asarray(sorted(int(v) for v in nodes), dtype=np.int64)
    remap = -np.ones(G.n, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    e = G.edges()
    keep = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
    return Graph.from_edges(len(nodes), remap[e[keep]].tolist(), labels=G.labels[nodes])


# -------------------------------------------------------------- clusterings

def normalize_labels(labels) -> np.ndarray:
    """Relabel to contiguous ids 0..k-1 in order of first appearance."""
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inv].astype(np.int64)


@dataclass(frozen=True, eq=False)
class Clustering:
    """Node-to-cluster assignment with contiguous labels ``0..k-1``."""

    labels: np.ndarray

    def __post_init__(self):
        lab = normalize_labels(self.labels)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def clusters(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.labels == c) for c in range(self.k)]

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Clustering":
        lab = -np.ones(n, dtype=np.int64)
        for c, s in enumerate(sets):
            for v in s:
                if lab[v] >= 0:
                    raise ValueError(f"node {v} assigned twice")
                lab[v] = c
        if (lab < 0).any():
            raise ValueError("every node needs a cluster")
        return cls(lab)

    def same_partition(self, other: "Clustering") -> bool:
        return np.array_equal(self.labels, other.labels)

    def __eq__(self, other):
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.same_partition(other)

    def __hash__(self):
        return hash(self.labels.tobytes())


# ------------------------------------------------------------------- file IO

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        yield lineno, line


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` pairs (SNAP style, ``#`` comments)."""
    pairs = []
    for lineno, line in _data_lines(text):
        parts = line.split()
        if len(parts) < 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer node id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: negative node id")
        pairs.append((u, v))
    if not pairs:
        raise GraphParseError("edge list is empty")
    arr = np.array(pairs, dtype=np.int64)
    ids, inv = np.unique(arr, return_inverse=True)
    inv = inv.reshape(arr.shape)
    return Graph.from_edges(len(ids), inv.tolist(), labels=ids)


def load_edge_list(path) -> Graph:
    try:
        return parse_edge_list(Path(path).read_text())
    except GraphParseError as exc:
        raise GraphParseError(f"{path}: {exc}") from None


def format_edge_list(G: Graph) -> str:
    lines = [f"# n={G.n} m={G.m}"]
    lines += [f"{G.labels[u]} {G.labels[v]}" for u, v in G.edges()]
    isolated = np.flatnonzero(G.degrees == 0)
    if len(isolated):
        log.warning("%d isolated nodes are not representable in an edge list", len(isolated))
    return "\n".join(lines) + "\n"


def write_edge_list(G: Graph, path) -> None:
    Path(path).write_text(format_edge_list(G))


def read_node_set(G: Graph, path) -> np.ndarray:
    """Read one input id per line and map to compacted ids."""
    index = G.node_index()
    out = []
    for lineno, line in _data_lines(Path(path).read_text()):
        try:
            label = int(line.split()[0])
        except ValueError:
            raise GraphParseError(f"{path}:{lineno}: bad node id {line!r}") from None
        if label not in index:
            raise GraphParseError(f"{path}:{lineno}: node {label} not in graph")
        out.append(index[label])
    if len(set(out)) != len(out):
        raise GraphParseError(f"{path}: duplicate node ids")
    return np.array(sorted(out), dtype=np.int64)


def write_node_set(G: Graph, S, path) -> None:
    ids = np.flatnonzero(as_mask(G, S))
    Path(path).write_text("".join(f"{G.labels[v]}\n" for v in ids))


def read_clustering(G: Graph, path) -> Clustering:
    """Read ``node_id<TAB>cluster_label`` lines; every node must be labelled."""
    index = G.node_index()
    raw = {}
    for lineno, line in _data_lines(Path(path).read_text()):
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"{path}:{lineno}: expected 'node<TAB>label'")
        try:
            node = int(parts[0])
        except ValueError:
            raise GraphParseError(f"{path}:{lineno}: bad node id") from None
        if node not in index:
            raise GraphParseError(f"{path}:{lineno}: node {node} not in graph")
        raw[index[node]] = parts[1]
    missing = G.n - len(raw)
    if missing:
        raise GraphParseError(f"{path}: {missing} nodes have no cluster label")
    names = [raw[v] for v in range(G.n)]
    return Clustering(np.unique(names, return_inverse=True)[1])


def write_clustering(G: Graph, C: Clustering, path) -> None:
    Path(path).write_text("".join(f"{G.labels[v]}\t{C.labels[v]}\n" for v in range(G.n)))
