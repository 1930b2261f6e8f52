"""Global fitness for LambdaCC: F from the example's mistake profile, G from the metric LP."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .graph import Clustering, Graph
from .lambdacc import MistakeProfile, Mode, mistake_profile
from .metric_lp import LpConfig, LpOracle, interpolated_G, sample_G_grid
from .paramlearn import BisectionResult, FitnessFunction, minimize_fitness

log = logging.getLogger(__name__)


def default_lambda_range(G: Graph, mode: Mode) -> tuple[float, float]:
    """Degree mode: [1/(8m), 2/m], the band around modularity's 1/(2m). Standard: [1e-3, 0.999]."""
    if mode == "degree":
        return 1.0 / (8 * G.m), min(2.0 / G.m, 0.999)
    return 1e-3, 0.999


def global_fitness(G: Graph, C: Clustering, mode: Mode, lo: float, hi: float, lower_bound,
                   tau_eq: float) -> tuple[FitnessFunction, MistakeProfile]:
    profile = mistake_profile(G, C, mode)
    f = FitnessFunction(profile.exact_F, lower_bound, lo, hi, tau_eq=tau_eq,
                        breakpoints=profile.breakpoints(lo, hi), name=f"lambdacc-{mode}")
    return f, profile


@dataclass
class GlobalReport:
    lam: float
    delta: float
    profile: MistakeProfile
    result: BisectionResult
    lo: float
    hi: float
    samples: list[tuple[float, float]] = field(default_factory=list)

    def summary(self) -> dict:
        p = self.profile
        out = {"lambda": self.lam, "delta": self.delta, "mode": p.mode, "range": [self.lo, self.hi],
               "P_x": p.P_x, "N_x": p.N_x, "recursive_calls": self.result.recursive_calls,
               "queries": len(self.result.queries), "reason": self.result.reason}
        if p.mode == "degree":
            out.update(a=p.a, b=p.b)
        return out


def learn_global(G: Graph, C: Clustering, mode: Mode = "degree", lo: float | None = None,
                 hi: float | None = None, tol: float | None = None, lp: LpConfig | None = None,
                 tau_eq: float | None = None, oracle: LpOracle | None = None) -> GlobalReport:
    """Bisection with an LP solve at every queried lambda."""
    d_lo, d_hi = default_lambda_range(G, mode)
    lo = d_lo if lo is None else lo
    hi = d_hi if hi is None else hi
    lp = lp or LpConfig()
    tol = tol if tol is not None else (hi - lo) * 1e-4
    tau_eq = tau_eq if tau_eq is not None else 10 * lp.tol
    oracle = oracle or LpOracle(G, mode, lp)
    f, profile = global_fitness(G, C, mode, lo, hi, oracle, tau_eq)
    res = minimize_fitness(f, tol)
    return GlobalReport(res.beta, res.delta, profile, res, lo, hi)


def shared_grid(G: Graph, mode: Mode, lo: float, hi: float, points: int = 20, lp: LpConfig | None = None,
                cache_dir=None, jobs: int = 1) -> list[tuple[float, float]]:
    """LP lower bounds at equally spaced lambdas; reusable across example clusterings.

    In degree mode the edge-flip breakpoints 1/(d_u d_v) are added to the
    grid: the bound is concave only between them, so chords must not span one.
    """
    lams = np.linspace(lo, hi, points)
    lams[-1] = hi
    if mode == "degree":
        d = G.degrees.astype(np.int64)
        e = G.edges()
        prods = np.unique(d[e[:, 0]] * d[e[:, 1]])
        kinks = [1.0 / float(p) for p in prods if p > 1 and lo < 1.0 / float(p) < hi]
        lams = np.unique(np.concatenate([lams, kinks]))
    return [(lam, sol.value) for lam, sol in sample_G_grid(G, lams, mode, lp, cache_dir, jobs)]


def learn_global_from_grid(G: Graph, C: Clustering, samples: list[tuple[float, float]], mode: Mode = "degree",
                           tol: float | None = None, tau_eq: float = 1e-5) -> GlobalReport:
    """Minimize P against the piecewise-linear interpolant of shared LP samples."""
    lo, hi = samples[0][0], samples[-1][0]
    tol = tol if tol is not None else (hi - lo) * 1e-6
    f, profile = global_fitness(G, C, mode, lo, hi, interpolated_G(samples), tau_eq)
    res = minimize_fitness(f, tol)
    return GlobalReport(res.beta, res.delta, profile, res, lo, hi, samples)
