"""Parameter fitness functions P = F / G and their bisection-style minimization.

``F`` is the example clustering's objective as a function of the resolution
parameter (linear, or piecewise linear with known breakpoints). ``G`` is a
lower bound on the optimal objective that is concave and piecewise linear
in the parameter. Under those conditions P has no strict interior maximum,
and equal values at two points bracket a minimizer, which is what the
one-branch / two-branch search below relies on.
"""

from __future__ import annotations

import json
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class FitnessDomainError(ValueError):
    """G returned a non-positive value, or F < G at a query."""


@dataclass(frozen=True)
class Query:
    beta: float
    F: float
    G: float
    P: float


class FitnessFunction:
    """Queryable P(beta) = F(beta) / G(beta) on ``[lo, hi]`` with a per-beta cache.

    ``breakpoints`` are the points where F changes slope; minimization is
    run separately on each linear piece.
    """

    def __init__(self, F: Callable[[float], float], G: Callable[[float], float], lo: float, hi: float,
                 tau_eq: float = 1e-9, breakpoints: Sequence[float] = (), name: str = ""):
        if not lo < hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        self.F = F
        self.G = G
        self.lo = float(lo)
        self.hi = float(hi)
        self.tau_eq = tau_eq
        self.breakpoints = sorted(b for b in breakpoints if self.lo < b < self.hi)
        self.name = name
        self._cache: dict[float, Query] = {}
        self._lock = threading.Lock()
        self.log: list[Query] = []

    def query(self, beta: float) -> Query:
        beta = float(beta)
        with self._lock:
            hit = self._cache.get(beta)
        if hit is not None:
            return hit
        f = float(self.F(beta))
        g = float(self.G(beta))
        if not g > 0:
            raise FitnessDomainError(f"G({beta!r}) = {g!r} is not positive")
        if g > f + self.tau_eq * max(1.0, abs(f)):
            raise FitnessDomainError(f"lower bound exceeds F at beta={beta!r}: G={g!r} > F={f!r}")
        q = Query(beta, f, g, f / g)
        with self._lock:
            if beta not in self._cache:
                self._cache[beta] = q
                self.log.append(q)
        return self._cache[beta]

    def P(self, beta: float) -> float:
        return self.query(beta).P

    @property
    def evaluations(self) -> int:
        return len(self.log)

    def equal(self, p: float, q: float) -> bool:
        return abs(p - q) <= self.tau_eq * max(1.0, abs(p), abs(q))

    def sorted_log(self) -> list[Query]:
        return sorted(self.log, key=lambda q: q.beta)


@dataclass
class BisectionResult:
    beta: float
    delta: float
    recursive_calls: int
    queries: list[Query]
    reason: str  # "tolerance" or "equality-plateau"
    events: list[str] = field(default_factory=list)
    segments: list[tuple[float, float]] = field(default_factory=list)

    def to_json(self) -> str:
        d = asdict(self)
        d["queries"] = [asdict(q) for q in self.queries]
        return json.dumps(d, indent=2)


def write_query_log(queries: Sequence[Query], path) -> None:
    """TSV of (beta, F, G, P) sorted by beta."""
    rows = ["beta\tF\tG\tP"]
    rows += [f"{q.beta!r}\t{q.F!r}\t{q.G!r}\t{q.P!r}" for q in sorted(queries, key=lambda q: q.beta)]
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


class _Search:
    """One run of the one-branch / two-branch recursion on a single linear piece of F."""

    def __init__(self, f: FitnessFunction, tol: float):
        if not tol > 0:
            raise ValueError("tol must be positive")
        self.f = f
        self.tol = tol
        self.calls = 0
        self.events: list[str] = []
        self.reason = "tolerance"

    def eq(self, a, b):
        return self.f.equal(a, b)

    def lt(self, a, b):
        return a < b and not self.eq(a, b)

    def gt(self, a, b):
        return a > b and not self.eq(a, b)

    def note(self, msg):
        log.info(msg)
        self.events.append(msg)

    def one(self, l, r):
        if r - l < self.tol:
            return l
        P = self.f.P
        m = (l + r) / 2
        pl, pm, pr = P(l), P(m), P(r)
        eq, lt, gt = self.eq, self.lt, self.gt
        if eq(pl, pm) and eq(pm, pr):
            self.reason = "equality-plateau"
            return m
        if (lt(pl, pm) or eq(pl, pm)) and lt(pm, pr):
            return self._one(l, m)
        if gt(pl, pm) and (gt(pm, pr) or eq(pm, pr)):
            return self._one(m, r)
        if gt(pl, pm) and lt(pm, pr):
            # same bracket, now with a known interior point below both ends
            return self.two(l, m, r)
        if lt(pl, pm) and eq(pm, pr):
            self.note(f"one-branch: P(l) < P(m) = P(r) on [{l!r}, {r!r}]; keeping [m, r]")
            return self._one(m, r)
        if eq(pl, pm) and gt(pm, pr):
            self.note(f"one-branch: P(l) = P(m) > P(r) on [{l!r}, {r!r}]; keeping [l, m]")
            return self._one(l, m)
        self.note(f"one-branch: interior maximum at m={m!r} (G not concave to tolerance)")
        return self._one(l, m) if pl <= pr else self._one(m, r)

    def two(self, l, m, r):
        if r - l < self.tol:
            return m
        P = self.f.P
        lm, rm = (l + m) / 2, (m + r) / 2
        a, b, c = P(lm), P(m), P(rm)
        eq, lt, gt = self.eq, self.lt, self.gt
        if eq(a, b) and eq(b, c):
            self.reason = "equality-plateau"
            return m
        if eq(a, b):
            return self._one(lm, m)
        if eq(b, c):
            return self._one(m, rm)
        if lt(a, b) and lt(b, c):
            return self._two(l, lm, m)
        if gt(a, b) and gt(b, c):
            return self._two(m, rm, r)
        if gt(a, b) and lt(b, c):
            return self._two(lm, m, rm)
        self.note(f"two-branch: interior maximum at m={m!r} (G not concave to tolerance)")
        return self._two(l, lm, m) if a <= c else self._two(m, rm, r)

    def _one(self, l, r):
        self.calls += 1
        return self.one(l, r)

    def _two(self, l, m, r):
        self.calls += 1
        return self.two(l, m, r)


def _result(f: FitnessFunction, s: _Search, beta: float, start: int) -> BisectionResult:
    q = f.query(beta)
    return BisectionResult(beta, q.P, s.calls, f.log[start:], s.reason, s.events)


def check_one_branch(f: FitnessFunction, lo: float, hi: float, tol: float) -> BisectionResult:
    """Run the one-branch phase on ``[lo, hi]``.

    ``recursive_calls`` counts recursions onto a strictly smaller bracket;
    the hand-off from the one-branch to the two-branch phase keeps the same
    bracket and is not counted.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    start = len(f.log)
    s = _Search(f, tol)
    beta = s.one(lo, hi)
    return _result(f, s, beta, start)


def check_two_branches(f: FitnessFunction, lo: float, mid: float, hi: float, tol: float) -> BisectionResult:
    if not lo < mid < hi:
        raise ValueError("need lo < mid < hi")
    start = len(f.log)
    s = _Search(f, tol)
    beta = s.two(lo, mid, hi)
    return _result(f, s, beta, start)


def minimize_fitness(f: FitnessFunction, tol: float) -> BisectionResult:
    """Minimize P over ``[f.lo, f.hi]``, one linear piece of F at a time.

    Returns the best piece's result; ``recursive_calls`` is the maximum
    over pieces and ``queries`` is the full query log.
    """
    edges = [f.lo, *f.breakpoints, f.hi]
    best = None
    calls = 0
    events: list[str] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        res = check_one_branch(f, lo, hi, tol)
        calls = max(calls, res.recursive_calls)
        events += res.events
        if best is None or res.delta < best.delta:
            best = res
    best.recursive_calls = calls
    best.queries = list(f.log)
    best.events = events
    best.segments = list(zip(edges[:-1], edges[1:]))
    return best


def recursion_bound(lo: float, hi: float, tol: float) -> int:
    return math.ceil(math.log2((hi - lo) / tol))


@dataclass
class GridResult:
    betas: np.ndarray
    values: np.ndarray
    beta: float
    delta: float


def grid_minimize(f: FitnessFunction, points: int, jobs: int = 1) -> GridResult:
    """Evaluate P on a uniform grid over ``[f.lo, f.hi]``; ties go to the smallest beta."""
    if points < 2:
        raise ValueError("need at least two grid points")
    betas = np.linspace(f.lo, f.hi, points)
    betas[-1] = f.hi
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            qs = list(pool.map(f.query, betas))
    else:
        qs = [f.query(b) for b in betas]
    vals = np.array([q.P for q in qs])
    i = int(np.argmin(vals))
    return GridResult(betas, vals, float(betas[i]), float(vals[i]))


# ------------------------------------------------------------------- audits

def audit_lower_bound(queries: Sequence[Query], tau_eq: float) -> list[Query]:
    """Queries with P < 1 - tau_eq (empty when the bound is sound)."""
    return [q for q in queries if q.P < 1 - tau_eq]


def audit_no_interior_max(queries: Sequence[Query], tau_eq: float) -> list[Query]:
    """Queries (sorted by beta) strictly above both neighbours by more than 2 tau_eq."""
    qs = sorted(queries, key=lambda q: q.beta)
    bad = []
    for a, b, c in zip(qs, qs[1:], qs[2:]):
        slack = 2 * tau_eq * max(1.0, b.P)
        if b.P > a.P + slack and b.P > c.P + slack:
            bad.append(b)
    return bad
