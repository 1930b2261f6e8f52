"""Generalized Louvain for LambdaCC and clustering comparison scores."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

from .graph import Clustering, Graph
from .lambdacc import Mode, node_weights


@dataclass(frozen=True)
class LouvainConfig:
    lam: float
    mode: Mode = "degree"
    max_passes: int = 100
    max_levels: int = 50
    seed: int = 0
    min_improvement: float = 1e-12

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")


def _local_moves(adj, W, lam, rng, cfg):
    """Greedy node moves maximizing sum over co-clustered pairs of (A_uv - lam W_u W_v)."""
    N = len(W)
    comm = np.arange(N)
    tot = W.astype(float).copy()
    size = np.ones(N, dtype=np.int64)
    free: list[int] = []
    moved_any = False
    for _ in range(cfg.max_passes):
        gain_total = 0.0
        for i in rng.permutation(N):
            a = comm[i]
            links: dict[int, float] = defaultdict(float)
            for j, wij in adj[i].items():
                if j != i:
                    links[comm[j]] += wij
            tot[a] -= W[i]
            size[a] -= 1
            if size[a] == 0:
                free.append(a)
            stay = links.get(a, 0.0) - lam * W[i] * tot[a]
            best, best_gain = a, 0.0
            for b in sorted(links):
                if b == a:
                    continue
                g = links[b] - lam * W[i] * tot[b] - stay
                if g > best_gain + cfg.min_improvement:
                    best, best_gain = b, g
            if -stay > best_gain + cfg.min_improvement and size[a] > 0:
                best, best_gain = free[-1], -stay
            if size[best] == 0:
                free.remove(best)
            comm[i] = best
            tot[best] += W[i]
            size[best] += 1
            if best != a:
                gain_total += best_gain
                moved_any = True
        if gain_total <= cfg.min_improvement:
            break
    _, comm = np.unique(comm, return_inverse=True)
    return comm, moved_any


def _aggregate(adj, W, comm):
    k = int(comm.max()) + 1
    new_adj: list[dict[int, float]] = [defaultdict(float) for _ in range(k)]
    for i, row in enumerate(adj):
        ci = comm[i]
        for j, wij in row.items():
            new_adj[ci][comm[j]] += wij
    new_W = np.bincount(comm, weights=W, minlength=k)
    return [dict(r) for r in new_adj], new_W


def louvain(G: Graph, cfg: LouvainConfig) -> Clustering:
    """Local moves plus aggregation, greedily lowering the LambdaCC objective.

    Node visit order is a seeded shuffle per pass.
    """
    rng = np.random.default_rng(cfg.seed)
    adj = [{int(v): 1.0 for v in G.neighbors(u)} for u in range(G.n)]
    W = node_weights(G, cfg.mode).astype(float)
    membership = np.arange(G.n)
    for _ in range(cfg.max_levels):
        comm, moved = _local_moves(adj, W, cfg.lam, rng, cfg)
        if not moved:
            break
        membership = comm[membership]
        adj, W = _aggregate(adj, W, comm)
    return Clustering(membership)


def ari(A: Clustering, B: Clustering) -> float:
    return float(adjusted_rand_score(A.labels, B.labels))


def nmi(A: Clustering, B: Clustering) -> float:
    """NMI with arithmetic-mean normalization."""
    return float(normalized_mutual_info_score(A.labels, B.labels, average_method="arithmetic"))


def f1_set(S, X, n: int | None = None) -> float:
    """F1 score of a found set ``S`` against a target set ``X`` (id lists or masks)."""
    S = set(np.flatnonzero(S).tolist()) if np.asarray(S).dtype == bool else set(np.asarray(S).tolist())
    X = set(np.flatnonzero(X).tolist()) if np.asarray(X).dtype == bool else set(np.asarray(X).tolist())
    if not S or not X:
        raise ValueError("F1 needs two nonempty sets")
    hit = len(S & X)
    if hit == 0:
        return 0.0
    precision, recall = hit / len(S), hit / len(X)
    return 2 * precision * recall / (precision + recall)

