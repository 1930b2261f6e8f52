"""LambdaCC objective on an implicit signed graph, mistake profiles, modularity.

For a graph G, resolution lam and node weights w (1 for the standard
objective, degrees for the degree-weighted one) an edge (u, v) is a
positive pair of weight 1 - lam w_u w_v when that is non-negative and a
negative pair of weight lam w_u w_v - 1 otherwise; every non-edge is a
negative pair of weight lam w_u w_v. The negative non-edges are never
materialized.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from .graph import Clustering, Graph

log = logging.getLogger(__name__)

Mode = Literal["standard", "degree"]
MODES = ("standard", "degree")

BRUTE_FORCE_MAX_N = 12


class ParameterRangeError(ValueError):
    pass


def node_weights(G: Graph, mode: Mode) -> np.ndarray:
    if mode == "standard":
        return np.ones(G.n, dtype=np.int64)
    if mode == "degree":
        return G.degrees.astype(np.int64)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class SignedGraphView:
    graph: Graph
    lam: float | Fraction
    mode: Mode = "standard"

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise ParameterRangeError(f"lambda must lie in (0, 1), got {self.lam}")
        node_weights(self.graph, self.mode)

    @property
    def weights(self) -> np.ndarray:
        return node_weights(self.graph, self.mode)

    def edge_weights(self) -> np.ndarray:
        """Signed weight 1 - lam w_u w_v per edge, ordered as ``graph.edges()``."""
        e = self.graph.edges()
        w = self.weights
        return 1 - self.lam * (w[e[:, 0]] * w[e[:, 1]]).astype(float)


def eval_cc_objective(view: SignedGraphView, C: Clustering) -> float | Fraction:
    """Disagreement weight of ``C`` in O(m + n).

    Exact when ``view.lam`` is a Fraction: every aggregate below is an
    integer and lam enters only through scalar products.
    """
    G, lam = view.graph, view.lam
    if C.n != G.n:
        raise ValueError("clustering does not match graph")
    w = view.weights
    e = G.edges()
    lab = C.labels
    prod = w[e[:, 0]] * w[e[:, 1]]
    same = lab[e[:, 0]] == lab[e[:, 1]]
    negative = np.array([lam * int(p) > 1 for p in prod], dtype=bool) if len(prod) else np.zeros(0, bool)
    pos_cut = ~negative & ~same
    neg_in = negative & same
    s_pos_cut = int(prod[pos_cut].sum())
    s_neg_in = int(prod[neg_in].sum())
    s_edge_in = int(prod[same].sum())
    csum = np.zeros(C.k, dtype=np.int64)
    csq = np.zeros(C.k, dtype=np.int64)
    np.add.at(csum, lab, w)
    np.add.at(csq, lab, w * w)
    pair_in = sum((int(s) ** 2 - int(q)) // 2 for s, q in zip(csum, csq))
    total = (int(pos_cut.sum()) - lam * s_pos_cut) + (lam * s_neg_in - int(neg_in.sum()))
    total += lam * (pair_in - s_edge_in)
    return total


def eval_cc_objective_naive(view: SignedGraphView, C: Clustering):
    """O(n^2) double loop over all pairs; reference for the aggregated formula."""
    G, lam = view.graph, view.lam
    w = view.weights
    A = G.adjacency_matrix()
    lab = C.labels
    total = 0
    for u in range(G.n):
        for v in range(u + 1, G.n):
            p = int(w[u]) * int(w[v])
            together = lab[u] == lab[v]
            if A[u, v]:
                e = 1 - lam * p
                if e >= 0:
                    total += 0 if together else e
                else:
                    total += -e if together else 0
            elif together:
                total += lam * p
    return total


@dataclass(frozen=True)
class MistakeProfile:
    """Coefficients of the example clustering's objective as a function of lambda.

    Standard mode: F = (1 - lam) P_x + lam N_x. Degree mode: F = a + lam b
    on (0, 1 / d_max^2]; beyond that edges turn negative and ``exact_F``
    adds the clustering-independent correction sum(lam d_u d_v - 1).
    """

    mode: Mode
    P_x: int
    N_x: int
    a: int
    b: int
    valid_hi: float
    edge_products: np.ndarray  # w_u w_v for every edge, sorted

    def breakpoints(self, lo: float, hi: float) -> list[float]:
        """Lambdas in (lo, hi) where some edge changes sign."""
        if self.mode == "standard":
            return []
        pts = sorted({1.0 / float(p) for p in np.unique(self.edge_products) if p > 1})
        return [x for x in pts if lo < x < hi]

    def exact_F(self, lam: float) -> float:
        if not 0 < lam < 1:
            raise ParameterRangeError(f"lambda must lie in (0, 1), got {lam}")
        if self.mode == "standard":
            return (1 - lam) * self.P_x + lam * self.N_x
        flipped = self.edge_products[self.edge_products * lam > 1]
        return self.a + lam * self.b + float(np.sum(lam * flipped - 1.0))


def mistake_profile(G: Graph, C: Clustering, mode: Mode = "standard") -> MistakeProfile:
    """Count positive mistakes (cut edges) and negative mistakes (intra-cluster non-edges)."""
    w = node_weights(G, mode)
    deg = G.degrees.astype(np.int64)
    e = G.edges()
    lab = C.labels
    same = lab[e[:, 0]] == lab[e[:, 1]]
    P_x = int(np.count_nonzero(~same))
    sizes = np.bincount(lab, minlength=C.k)
    N_x = int((sizes * (sizes - 1) // 2).sum()) - int(np.count_nonzero(same))
    dprod = deg[e[:, 0]] * deg[e[:, 1]]
    dsum = np.bincount(lab, weights=deg, minlength=C.k).astype(np.int64)
    dsq = np.bincount(lab, weights=deg * deg, minlength=C.k).astype(np.int64)
    intra_pairs = int(((dsum * dsum - dsq) // 2).sum())
    intra_nonedge = intra_pairs - int(dprod[same].sum())
    b = intra_nonedge - int(dprod[~same].sum())
    dmax = int(deg.max()) if len(deg) else 1
    if mode == "standard":
        valid_hi = 1.0
        b = N_x - P_x
        if P_x == 0 or N_x == 0:
            log.warning("P_x=%d, N_x=%d: a zero coefficient voids the bisection guarantee", P_x, N_x)
    else:
        valid_hi = 1.0 / dmax ** 2
        if P_x == 0 or b == 0:
            log.warning("a=%d, b=%d: a zero coefficient voids the bisection guarantee", P_x, b)
    prods = np.sort(w[e[:, 0]] * w[e[:, 1]])
    return MistakeProfile(mode, P_x, N_x, P_x, b, valid_hi, prods)


def eval_F(profile: MistakeProfile, lam: float) -> float:
    """Linear-form F. Degree mode refuses lambda beyond 1/d_max^2; use ``exact_F``
    and split the range at ``breakpoints`` there."""
    if not 0 < lam < 1:
        raise ParameterRangeError(f"lambda must lie in (0, 1), got {lam}")
    if profile.mode == "standard":
        return (1 - lam) * profile.P_x + lam * profile.N_x
    if lam > profile.valid_hi:
        raise ParameterRangeError(
            f"lambda={lam} exceeds 1/d_max^2={profile.valid_hi}; F is only piecewise linear there, "
            "split the range at MistakeProfile.breakpoints and use exact_F")
    return profile.a + lam * profile.b


def eval_F_scaled(profile: MistakeProfile, gamma: float) -> float:
    """Standard objective divided by (1 - lam), with gamma = lam / (1 - lam)."""
    if profile.mode != "standard":
        raise ValueError("the scaled form is defined for the standard objective")
    return profile.P_x + gamma * profile.N_x


def modularity(G: Graph, C: Clustering, exact: bool = False) -> float | Fraction:
    """Newman-Girvan modularity sum_c [ in_c / m - (vol_c / 2m)^2 ]."""
    m = G.m
    e = G.edges()
    lab = C.labels
    inside = np.bincount(lab[e[:, 0]][lab[e[:, 0]] == lab[e[:, 1]]], minlength=C.k)
    vols = np.bincount(lab, weights=G.degrees, minlength=C.k).astype(np.int64)
    if exact:
        return sum(Fraction(int(i), m) - Fraction(int(v) ** 2, 4 * m * m) for i, v in zip(inside, vols))
    return float(np.sum(inside / m - (vols / (2 * m)) ** 2))


# -------------------------------------------------------------- brute force

@lru_cache(maxsize=16)
def enumerate_partitions(n: int) -> np.ndarray:
    """All set partitions of n items as restricted growth strings, lexicographic order."""
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"refusing to enumerate partitions of {n} > {BRUTE_FORCE_MAX_N} items")
    rgs = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)  # max label so far
    for _ in range(1, n):
        reps = (top + 2).astype(np.int64)
        parent = np.repeat(np.arange(len(rgs)), reps)
        offs = np.arange(len(parent)) - np.repeat(np.cumsum(reps) - reps, reps)
        new = offs.astype(np.int8)
        rgs = np.column_stack([rgs[parent], new])
        top = np.maximum(top[parent], new)
    rgs.setflags(write=False)
    return rgs


def pair_coefficients(G: Graph, lam, mode: Mode):
    """Objective as const + sum over pairs u<v of coef * together(u, v).

    Returns (iu, ju, coef, const) with pair order from ``np.triu_indices``.
    Entries are Fractions when lam is a Fraction, floats otherwise.
    """
    w = node_weights(G, mode)
    A = G.adjacency_matrix()
    iu, ju = np.triu_indices(G.n, k=1)
    coef = []
    const = 0
    for u, v in zip(iu.tolist(), ju.tolist()):
        p = int(w[u]) * int(w[v])
        if A[u, v]:
            e = 1 - lam * p
            if e >= 0:
                const += e
                coef.append(-e)
            else:
                coef.append(-e)
        else:
            coef.append(lam * p)
    return iu, ju, coef, const


def partition_objectives(G: Graph, lam, mode: Mode, chunk: int = 1 << 17):
    """Objective of every set partition (enumeration order); exact for Fraction lam.

    Returns (rgs, values) where values are Fractions or floats.
    """
    rgs = enumerate_partitions(G.n)
    iu, ju, coef, const = pair_coefficients(G, lam, mode)
    if isinstance(lam, Fraction):
        D = lam.denominator
        ints = [int(x * D) for x in coef]
        base = int(const * D)
        # int64 unless the scaled sums could overflow; then exact Python ints
        dtype = np.int64 if sum(map(abs, ints)) + abs(base) < 2 ** 62 else object
        c = np.array(ints, dtype=dtype)
        out = np.empty(len(rgs), dtype=dtype)
    else:
        c = np.array(coef, dtype=float)
        base = float(const)
        out = np.empty(len(rgs), dtype=float)
    for s in range(0, len(rgs), chunk):
        block = rgs[s:s + chunk]
        together = block[:, iu] == block[:, ju]
        out[s:s + chunk] = together.astype(c.dtype) @ c
    out += base
    if isinstance(lam, Fraction):
        return rgs, out, lam.denominator
    return rgs, out, None


def brute_force_opt(G: Graph, lam, mode: Mode = "standard") -> tuple[Clustering, float | Fraction]:
    """Globally optimal clustering over all set partitions (first in enumeration order on ties)."""
    if G.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    if not 0 < lam < 1:
        raise ParameterRangeError(f"lambda must lie in (0, 1), got {lam}")
    rgs, vals, D = partition_objectives(G, lam, mode)
    i = int(np.argmin(vals))
    value = Fraction(int(vals[i]), D) if D is not None else float(vals[i])
    return Clustering(rgs[i].astype(np.int64)), value
