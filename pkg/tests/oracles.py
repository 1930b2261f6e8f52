"""Independent brute-force references used by the tests.

Nothing here calls the flow solver, the LP solver or the aggregated
objective code; everything is enumeration over subsets or partitions.
"""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from reslearn.graph import Graph, as_mask
from reslearn.lambdacc import enumerate_partitions


def subset_matrix(k: int) -> np.ndarray:
    """(2^k, k) boolean matrix whose rows are all subsets of k items."""
    codes = np.arange(1 << k, dtype=np.int64)
    return ((codes[:, None] >> np.arange(k)) & 1).astype(bool)


def enumerate_f_alpha(G: Graph, R, alpha: float, epsilon: float = math.inf):
    """Minimum of cut(S) + a vol(R - S) + a eps vol(S - R) by listing every candidate S.

    Candidates are subsets of R when epsilon is infinite and subsets of V
    otherwise. Returns (value, list of minimizing masks).
    """
    R = as_mask(G, R)
    free = np.flatnonzero(R) if math.isinf(epsilon) else np.arange(G.n)
    sub = subset_matrix(len(free))
    M = np.zeros((len(sub), G.n), dtype=bool)
    M[:, free] = sub
    e = G.edges()
    cuts = (M[:, e[:, 0]] != M[:, e[:, 1]]).sum(axis=1) if len(e) else np.zeros(len(M), int)
    deg = G.degrees
    lost = (~M & R) @ deg
    vals = cuts + alpha * lost
    if not math.isinf(epsilon):
        vals = vals + alpha * epsilon * ((M & ~R) @ deg)
    best = vals.min()
    return float(best), [M[i] for i in np.flatnonzero(vals <= best + 1e-12 * max(1.0, abs(best)))]


def mqi_lines(G: Graph, R) -> tuple[np.ndarray, np.ndarray]:
    """Lower envelope of the lines cut(S) + a (vol(R) - vol(S)) over S subset of R.

    Returns (intercepts, slopes) sorted by decreasing slope with dominated
    lines removed.
    """
    R = as_mask(G, R)
    free = np.flatnonzero(R)
    sub = subset_matrix(len(free))
    M = np.zeros((len(sub), G.n), dtype=bool)
    M[:, free] = sub
    e = G.edges()
    cuts = (M[:, e[:, 0]] != M[:, e[:, 1]]).sum(axis=1)
    slopes = (~M & R) @ G.degrees
    best: dict[int, int] = {}
    for c, s in zip(cuts.tolist(), slopes.tolist()):
        if s not in best or c < best[s]:
            best[s] = c
    lines = sorted(((s, c) for s, c in best.items()), key=lambda t: -t[0])
    hull: list[tuple[int, int]] = []
    for s, c in lines:
        # min-envelope for a >= 0: keep lines with decreasing slope and increasing intercept
        if hull and c <= hull[-1][1]:
            hull.pop()
            while hull and c <= hull[-1][1]:
                hull.pop()
        while len(hull) >= 2:
            (s1, c1), (s2, c2) = hull[-2], hull[-1]
            # drop the middle line if it never strictly wins
            if (c2 - c1) * (s2 - s) >= (c - c2) * (s1 - s2):
                hull.pop()
            else:
                break
        hull.append((s, c))
    return np.array([c for _, c in hull], float), np.array([s for s, _ in hull], float)


def envelope_eval(lines, alphas) -> np.ndarray:
    c, s = lines
    alphas = np.atleast_1d(np.asarray(alphas, float))
    return np.min(c[None, :] + alphas[:, None] * s[None, :], axis=1)


def envelope_kinks(lines, lo: float, hi: float) -> list[float]:
    c, s = lines
    pts = []
    for i in range(len(c) - 1):
        a = (c[i + 1] - c[i]) / (s[i] - s[i + 1])
        if lo < a < hi:
            pts.append(float(a))
    return pts


def exact_local_min(lines, const: float, slope: float, lo: float, hi: float) -> tuple[float, float]:
    """Exact min of (const + slope a) / G(a): on each linear piece of G the
    ratio is monotone, so the minimum sits at an endpoint or a kink."""
    cand = np.array([lo, hi, *envelope_kinks(lines, lo, hi)])
    P = (const + slope * cand) / envelope_eval(lines, cand)
    i = int(np.argmin(P))
    return float(cand[i]), float(P[i])


def modularity_scaled_all(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    """4 m^2 Q for every set partition, in enumeration order, as exact integers.

    Uses sum_c vol_c^2 = sum_u d_u^2 + 2 sum_{u<v together} d_u d_v.
    """
    rgs = enumerate_partitions(G.n)
    m = G.m
    d = G.degrees.astype(np.int64)
    A = G.adjacency_matrix()
    iu, ju = np.triu_indices(G.n, k=1)
    coef = 4 * m * A[iu, ju] - 2 * d[iu] * d[ju]
    together = rgs[:, iu] == rgs[:, ju]
    return rgs, together.astype(np.int64) @ coef - int((d * d).sum())


def cc_objective_by_pairs(G: Graph, labels, lam, weights) -> Fraction | float:
    """Disagreements straight from the signed-graph definition, pair by pair."""
    total = 0
    for u, v in combinations(range(G.n), 2):
        p = int(weights[u]) * int(weights[v])
        together = labels[u] == labels[v]
        if G.has_edge(u, v):
            w = 1 - lam * p
            if w >= 0 and not together:
                total += w
            elif w < 0 and together:
                total += -w
        elif together:
            total += lam * p
    return total
