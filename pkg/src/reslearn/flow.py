"""Max-flow / min-cut (Dinic) and the auxiliary network for local flow clustering."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph, as_mask

# residual capacities at or below this fraction of the largest capacity count as saturated
_REL_EPS = 1e-12


class FlowNetwork:
    """Directed network with paired reverse arcs.

    Nodes ``0..num_graph_nodes-1`` are graph nodes (possibly a subset in use);
    ``source`` and ``sink`` are the two extra terminals. ``graph_nodes`` maps
    network ids of graph nodes back to graph ids.
    """

    def __init__(self, node_count: int, source: int, sink: int, graph_nodes=None):
        self.node_count = node_count
        self.source = source
        self.sink = sink
        self.graph_nodes = np.arange(node_count - 2) if graph_nodes is None else np.asarray(graph_nodes)
        self.head: list[int] = []
        self.cap: list[float] = []
        self.adj: list[list[int]] = [[] for _ in range(node_count)]

    def add_arc(self, u: int, v: int, capacity: float, reverse_capacity: float = 0.0) -> None:
        if not (capacity >= 0 and reverse_capacity >= 0) or math.isinf(capacity) or math.isinf(reverse_capacity):
            raise ValueError("capacities must be finite and non-negative")
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(float(capacity))
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(float(reverse_capacity))

    def arcs(self):
        """Yield (tail, head, capacity) for every stored arc with positive capacity."""
        for u in range(self.node_count):
            for a in self.adj[u]:
                if self.cap[a] > 0:
                    yield u, self.head[a], self.cap[a]


@dataclass
class CutResult:
    value: float
    source_side: np.ndarray  # graph node ids, sorted
    flow: list | None = None  # final flow per arc, aligned with FlowNetwork.head

    def __repr__(self):
        return f"CutResult(value={self.value:.12g}, source_side={self.source_side.tolist()})"


def max_flow_min_cut(net: FlowNetwork) -> CutResult:
    """Dinic's algorithm. The returned source side is the minimal one:
    nodes reachable from the source in the final residual network."""
    s, t = net.source, net.sink
    head, adj = net.head, net.adj
    res = list(net.cap)
    eps = _REL_EPS * max(res, default=0.0)
    n = net.node_count
    total = 0.0

    while True:
        level = [-1] * n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for a in adj[u]:
                v = head[a]
                if level[v] < 0 and res[a] > eps:
                    level[v] = level[u] + 1
                    q.append(v)
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = _blocking_path(s, t, head, adj, res, level, it, eps)
            if pushed <= 0:
                break
            total += pushed

    seen = [False] * n
    seen[s] = True
    q = deque([s])
    while q:
        u = q.popleft()
        for a in adj[u]:
            v = head[a]
            if not seen[v] and res[a] > eps:
                seen[v] = True
                q.append(v)
    ids = [int(net.graph_nodes[v]) for v in range(n) if seen[v] and v != s and v != t]
    flow = [net.cap[a] - res[a] for a in range(len(res))]
    return CutResult(total, np.array(sorted(ids), dtype=np.int64), flow)


def _blocking_path(s, t, head, adj, res, level, it, eps) -> float:
    """Find one augmenting path in the level graph (iterative DFS) and push along it."""
    stack_nodes = [s]
    stack_arcs: list[int] = []
    while stack_nodes:
        u = stack_nodes[-1]
        if u == t:
            f = min(res[a] for a in stack_arcs)
            for a in stack_arcs:
                res[a] -= f
                res[a ^ 1] += f
            return f
        arcs = adj[u]
        advanced = False
        while it[u] < len(arcs):
            a = arcs[it[u]]
            v = head[a]
            if res[a] > eps and level[v] == level[u] + 1:
                stack_nodes.append(v)
                stack_arcs.append(a)
                advanced = True
                break
            it[u] += 1
        if not advanced:
            level[u] = -1  # dead end
            stack_nodes.pop()
            if stack_arcs:
                stack_arcs.pop()
                it[stack_nodes[-1]] += 1
    return 0.0


def build_local_network(G: Graph, R, alpha: float, epsilon: float = math.inf) -> FlowNetwork:
    """Network whose min s-t cut value is ``min_S cut(S) + a vol(R - S) + a eps vol(S - R)``.

    The source is attached to ``R`` so the source side of a cut is the cluster.
    With ``epsilon = inf`` the complement of ``R`` is contracted into the sink,
    which restricts clusters to subsets of ``R``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive or infinite")
    inR = as_mask(G, R)
    deg = G.degrees
    if math.isinf(epsilon):
        members = np.flatnonzero(inR)
        local = -np.ones(G.n, dtype=np.int64)
        local[members] = np.arange(len(members))
        k = len(members)
        net = FlowNetwork(k + 2, k, k + 1, graph_nodes=members)
        for i, u in enumerate(members):
            net.add_arc(k, i, alpha * deg[u])
            outside = 0
            for w in G.neighbors(int(u)):
                j = local[w]
                if j < 0:
                    outside += 1
                elif i < j:
                    net.add_arc(i, int(j), 1.0, 1.0)
            if outside:
                net.add_arc(i, k + 1, float(outside))
        return net

    n = G.n
    net = FlowNetwork(n + 2, n, n + 1)
    for u in range(n):
        if inR[u]:
            net.add_arc(n, u, alpha * deg[u])
        elif deg[u] > 0:
            net.add_arc(u, n + 1, alpha * epsilon * deg[u])
    for u, v in G.edges():
        net.add_arc(int(u), int(v), 1.0, 1.0)
    return net
