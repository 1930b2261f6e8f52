"""Local flow clustering: f_alpha, local conductance, and the local fitness function."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .flow import build_local_network, max_flow_min_cut
from .graph import Graph, as_mask, bfs_grow, conductance, cut, vol
from .paramlearn import BisectionResult, FitnessDomainError, FitnessFunction, minimize_fitness

log = logging.getLogger(__name__)

_TERM_REL = 1e-9


class LocalDomainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LocalInstance:
    graph: Graph
    R: np.ndarray  # boolean mask
    epsilon: float = math.inf

    def __post_init__(self):
        R = as_mask(self.graph, self.R).copy()
        R.setflags(write=False)
        object.__setattr__(self, "R", R)
        if not R.any():
            raise ValueError("reference set R must be nonempty")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive or infinite")
        if math.isinf(self.epsilon) and self.vol_R > self.graph.total_volume - self.vol_R:
            raise ValueError("need vol(R) <= vol(complement of R) when epsilon is infinite")

    @property
    def vol_R(self) -> int:
        return vol(self.graph, self.R)

    @property
    def mqi(self) -> bool:
        return math.isinf(self.epsilon)


def flowimprove_epsilon(G: Graph, R) -> float:
    """The locality value vol(R) / vol(complement) used by FlowImprove."""
    vr = vol(G, R)
    return vr / (G.total_volume - vr)


def eval_f_alpha(inst: LocalInstance, alpha: float, S) -> float:
    """cut(S) + alpha vol(R - S) + alpha eps vol(S - R); inf if S leaves R under eps = inf."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    G, R = inst.graph, inst.R
    S = as_mask(G, S)
    outside = S & ~R
    if inst.mqi:
        if outside.any():
            return math.inf
        return cut(G, S) + alpha * vol(G, R & ~S)
    return cut(G, S) + alpha * vol(G, R & ~S) + alpha * inst.epsilon * vol(G, outside)


def min_f_alpha(inst: LocalInstance, alpha: float) -> tuple[np.ndarray, float]:
    """Exact minimum of f_alpha via min s-t cut; returns (node ids of the minimal minimizer, value)."""
    res = max_flow_min_cut(build_local_network(inst.graph, inst.R, alpha, inst.epsilon))
    return res.source_side, res.value


def local_conductance(inst: LocalInstance, S) -> float:
    G, R = inst.graph, inst.R
    S = as_mask(G, S)
    outside = S & ~R
    if inst.mqi:
        if outside.any():
            raise LocalDomainError("set leaves R while epsilon is infinite")
        denom = vol(G, R & S)
    else:
        denom = vol(G, R & S) - inst.epsilon * vol(G, outside)
    if not denom > 0:
        raise LocalDomainError(f"local conductance denominator {denom} is not positive")
    return cut(G, S) / denom


def solve_min_local_conductance(inst: LocalInstance, max_iter: int = 10_000) -> tuple[np.ndarray, float]:
    """Minimize local conductance by repeated f_alpha solves, starting from S = R.

    Each round sets alpha to the current set's score; a cut below
    alpha vol(R) yields a strictly better set.
    """
    G = inst.graph
    S = np.flatnonzero(inst.R)
    if cut(G, S) == 0:
        return S, 0.0
    alpha = local_conductance(inst, S)
    target = inst.vol_R
    for _ in range(max_iter):
        S_new, val = min_f_alpha(inst, alpha)
        if val >= alpha * target * (1 - _TERM_REL):
            return S, alpha
        a_new = local_conductance(inst, S_new)
        if not a_new < alpha:
            return S, alpha
        S, alpha = S_new, a_new
        if alpha == 0:
            return S, 0.0
    raise RuntimeError("local conductance loop did not terminate")


@dataclass
class LocalFitnessSpec:
    """F(alpha) = constant + slope * alpha for the example set X, G(alpha) = min f_alpha."""

    instance: LocalInstance
    X: np.ndarray
    lo: float
    hi: float
    constant: float
    slope: float
    alpha_star: float
    alpha_star_set: np.ndarray = field(repr=False, default=None)

    def F(self, alpha: float) -> float:
        return self.constant + self.slope * alpha

    def G(self, alpha: float) -> float:
        return min_f_alpha(self.instance, alpha)[1]

    def fitness(self, tau_eq: float = 1e-9) -> FitnessFunction:
        return FitnessFunction(self.F, self.G, self.lo, self.hi, tau_eq=tau_eq, name="local")


def make_local_fitness(inst: LocalInstance, X, lo: float | None = None, hi: float | None = None) -> LocalFitnessSpec:
    """Fitness of example cluster ``X`` for f_alpha.

    The default range is [alpha*, cut(R)] with alpha* the minimum local
    conductance. A tighter range may be passed in.
    """
    G, R = inst.graph, inst.R
    X = as_mask(G, X)
    if not X.any():
        raise ValueError("example set X must be nonempty")
    if inst.mqi:
        if (X & ~R).any():
            extra = [int(G.labels[v]) for v in np.flatnonzero(X & ~R)]
            raise ValueError(f"X is not a subset of R; extra nodes: {extra}")
        slope = float(inst.vol_R - vol(G, X))
    else:
        slope = vol(G, R & ~X) + inst.epsilon * vol(G, X & ~R)
    constant = float(cut(G, X))
    if constant == 0 and slope == 0:
        raise ValueError("degenerate fitness: F is identically zero")
    if constant == 0 or slope == 0:
        log.warning("F(alpha) = %g + %g alpha has a zero coefficient; no bisection guarantee", constant, slope)
    S_star, a_star = solve_min_local_conductance(inst)
    lo = a_star if lo is None else float(lo)
    hi = float(cut(G, R)) if hi is None else float(hi)
    if lo < a_star * (1 - _TERM_REL):
        log.warning("lower range %g is below the minimum local conductance %g", lo, a_star)
    if not 0 < lo < hi:
        raise ValueError(f"invalid alpha range [{lo}, {hi}]")
    spec = LocalFitnessSpec(inst, np.flatnonzero(X), lo, hi, constant, slope, a_star, S_star)
    for a in (lo, hi):
        f, g = spec.F(a), spec.G(a)
        if not f >= g * (1 - _TERM_REL) or g < 0:
            raise FitnessDomainError(f"F >= G >= 0 fails at alpha={a}: F={f}, G={g}")
    return spec


def query_local_fitness(spec: LocalFitnessSpec, alpha: float) -> tuple[float, float, float]:
    if not spec.lo <= alpha <= spec.hi:
        raise ValueError(f"alpha={alpha} outside [{spec.lo}, {spec.hi}]")
    f = spec.F(alpha)
    g = spec.G(alpha)
    if not g > 0:
        raise FitnessDomainError(f"G({alpha}) = {g} is not positive")
    return f, g, f / g


@dataclass
class LocalReport:
    alpha: float
    delta: float
    S: np.ndarray  # node ids of the f_alpha minimizer at alpha
    f1: float
    phi_X: float
    spec: LocalFitnessSpec
    result: BisectionResult

    def summary(self, G: Graph) -> dict:
        lab = G.labels
        return {"alpha": self.alpha, "delta": self.delta, "S": [int(lab[v]) for v in self.S],
                "f1": self.f1, "phi_X": self.phi_X, "alpha_star": self.spec.alpha_star,
                "range": [self.spec.lo, self.spec.hi], "R_size": int(self.spec.instance.R.sum()),
                "recursive_calls": self.result.recursive_calls, "queries": len(self.result.queries),
                "reason": self.result.reason}


def learn_local(G: Graph, X, R=None, grow: int = 5, epsilon: float = math.inf, tol: float | None = None,
                tau_eq: float = 1e-9, lo: float | None = None, hi: float | None = None) -> LocalReport:
    """Learn alpha for example set ``X``; R defaults to a BFS ball of grow * |X| nodes."""
    X = as_mask(G, X)
    if not X.any():
        raise ValueError("example set X must be nonempty")
    if R is None:
        R = bfs_grow(G, X, grow * int(X.sum()))
    inst = LocalInstance(G, as_mask(G, R), epsilon)
    spec = make_local_fitness(inst, X, lo, hi)
    tol = tol if tol is not None else (spec.hi - spec.lo) * 1e-9
    res = minimize_fitness(spec.fitness(tau_eq), tol)
    S, _ = min_f_alpha(inst, res.beta)
    hit = len(np.intersect1d(S, np.flatnonzero(X)))
    f1 = 0.0 if hit == 0 else 2 * hit / (len(S) + int(X.sum()))
    try:
        phi = float(conductance(G, X))
    except ValueError:
        phi = math.nan
    return LocalReport(res.beta, res.delta, S, f1, phi, spec, res)
