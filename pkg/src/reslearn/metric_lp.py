"""Metric-constrained LP relaxation of LambdaCC.

    minimize  const + sum_{u<v} c_uv x_uv
    s.t.      x_uv <= x_uw + x_vw  for all triples,   0 <= x <= 1

with c_uv = 1 - lam w_u w_v on edges and c_uv = -lam w_u w_v on non-edges.

The solver is a proximal-point loop: each round projects ``x_ref - gamma c``
onto the metric polytope with Hildreth's method (Dykstra's algorithm for
half-spaces, swept in fixed lexicographic triple order) and grows gamma.
The reported value is a Lagrangian dual bound built from the triangle
multipliers, so it is a valid lower bound no matter how far the iterate
is from convergence.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .graph import Graph
from .lambdacc import Mode, node_weights

log = logging.getLogger(__name__)

MAX_N = 400
EXACT_MAX_N = 8


@dataclass
class LpConfig:
    tol: float = 1e-6          # relative primal-dual gap
    feas_tol: float = 1e-6     # max triangle / box violation
    max_rounds: int = 200
    max_sweeps: int = 20_000   # full sweeps per projection
    active_sweeps: int = 500   # sweeps over positive-multiplier rows between full sweeps
    gamma_growth: float = 4.0
    inner_tol: float | None = None  # Hildreth stopping change; default tied to feas_tol
    max_n: int = MAX_N


@dataclass
class LpSolution:
    value: float           # certified lower bound on the LP optimum
    x: np.ndarray          # (n, n) symmetric, zero diagonal
    value_raw: float       # objective at x (x may be slightly infeasible)
    max_violation: float
    gap: float             # value_raw - value
    iterations: int        # total Hildreth sweeps
    rounds: int
    converged: bool
    lam: float = 0.0
    mode: str = "standard"
    duals: np.ndarray | None = field(default=None, repr=False)
    gamma: float = 0.0


# ------------------------------------------------------------------ kernels

@njit(cache=True)
def _pair_index(n):
    idx = np.full((n, n), -1, dtype=np.int64)
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            idx[i, j] = p
            idx[j, i] = p
            p += 1
    return idx


@njit(cache=True)
def _apply_At(n, idx, z, out):
    """out += A^T z for the triangle rows (row order: per triple (i<j<k), the
    constraints whose left side is x_ij, x_ik, x_jk in turn)."""
    t = 0
    for i in range(n):
        for j in range(i + 1, n):
            ij = idx[i, j]
            for k in range(j + 1, n):
                ik = idx[i, k]
                jk = idx[j, k]
                z0 = z[t]
                z1 = z[t + 1]
                z2 = z[t + 2]
                out[ij] += z0 - z1 - z2
                out[ik] += z1 - z0 - z2
                out[jk] += z2 - z0 - z1
                t += 3


@njit(cache=True)
def _tri_update(x, z, t, a, b, c):
    theta = (x[a] - x[b] - x[c]) / 3.0
    znew = z[t] + theta
    if znew < 0.0:
        znew = 0.0
    d = znew - z[t]
    if d != 0.0:
        x[a] -= d
        x[b] += d
        x[c] += d
        z[t] = znew
    return abs(d)


@njit(cache=True)
def _box_sweep(x, zlo, zhi):
    change = 0.0
    for p in range(x.shape[0]):
        # 0 <= x_p
        znew = zlo[p] - x[p]
        if znew < 0.0:
            znew = 0.0
        d = znew - zlo[p]
        if d != 0.0:
            x[p] += d
            zlo[p] = znew
            if abs(d) > change:
                change = abs(d)
        # x_p <= 1
        znew = zhi[p] + x[p] - 1.0
        if znew < 0.0:
            znew = 0.0
        d = znew - zhi[p]
        if d != 0.0:
            x[p] -= d
            zhi[p] = znew
            if abs(d) > change:
                change = abs(d)
    return change


@njit(cache=True)
def _hildreth(n, idx, x, z, zlo, zhi, max_sweeps, tol, inner_cap):
    """Project in place: x is x0 - A^T z + zlo - zhi on entry and exit.

    Alternates one full lexicographic sweep over every triangle row with
    repeated sweeps over the rows whose multiplier is positive; a row with
    zero multiplier and no violation is a no-op in any sweep.
    Stops when a full sweep changes no multiplier by more than ``tol``.
    Returns (full sweeps, last max change).
    """
    T = z.shape[0]
    act_t = np.empty(T, dtype=np.int64)
    act_a = np.empty(T, dtype=np.int64)
    act_b = np.empty(T, dtype=np.int64)
    act_c = np.empty(T, dtype=np.int64)
    change = 0.0
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        change = 0.0
        na = 0
        t = 0
        for i in range(n):
            for j in range(i + 1, n):
                ij = idx[i, j]
                for k in range(j + 1, n):
                    ik = idx[i, k]
                    jk = idx[j, k]
                    for r in range(3):
                        if r == 0:
                            a = ij
                            b = ik
                            c = jk
                        elif r == 1:
                            a = ik
                            b = ij
                            c = jk
                        else:
                            a = jk
                            b = ij
                            c = ik
                        d = _tri_update(x, z, t, a, b, c)
                        if d > change:
                            change = d
                        if z[t] > 0.0:
                            act_t[na] = t
                            act_a[na] = a
                            act_b[na] = b
                            act_c[na] = c
                            na += 1
                        t += 1
        d = _box_sweep(x, zlo, zhi)
        if d > change:
            change = d
        if change <= tol:
            break
        for _ in range(inner_cap):
            inner = 0.0
            for q in range(na):
                d = _tri_update(x, z, act_t[q], act_a[q], act_b[q], act_c[q])
                if d > inner:
                    inner = d
            d = _box_sweep(x, zlo, zhi)
            if d > inner:
                inner = d
            if inner <= tol:
                break
    return sweeps, change


@njit(cache=True)
def _max_triangle_violation(n, idx, x):
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            ij = idx[i, j]
            for k in range(j + 1, n):
                ik = idx[i, k]
                jk = idx[j, k]
                a = x[ij] - x[ik] - x[jk]
                b = x[ik] - x[ij] - x[jk]
                c = x[jk] - x[ij] - x[ik]
                if a > worst:
                    worst = a
                if b > worst:
                    worst = b
                if c > worst:
                    worst = c
    return worst


# ---------------------------------------------------------------- objective

def lp_objective(G: Graph, lam: float, mode: Mode) -> tuple[np.ndarray, float]:
    """Per-pair cost vector (``np.triu_indices`` order) and constant."""
    w = node_weights(G, mode).astype(float)
    n = G.n
    iu, ju = np.triu_indices(n, k=1)
    prod = w[iu] * w[ju]
    A = G.adjacency_matrix().astype(bool)
    edge = A[iu, ju]
    c = np.where(edge, 1.0 - lam * prod, -lam * prod)
    # flipped edges contribute (lam p - 1)(1 - x); non-edges contribute lam p (1 - x)
    const = float(np.sum(np.where(edge, np.maximum(lam * prod - 1.0, 0.0), lam * prod)))
    return c, const


def dual_bound(n: int, c: np.ndarray, const: float, y: np.ndarray) -> float:
    """min over the box of the Lagrangian with triangle multipliers y >= 0."""
    red = c.copy()
    _apply_At(n, _pair_index(n), y, red)
    neg = np.minimum(red, 0.0)
    # allowance for floating-point rounding in the sums above
    slack = 1e-12 * (1.0 + abs(const) + float(np.abs(red).sum()))
    return const + float(neg.sum()) - slack


def primal_value(c: np.ndarray, const: float, xv: np.ndarray) -> float:
    return const + float(c @ xv)


def _to_matrix(n: int, xv: np.ndarray) -> np.ndarray:
    X = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    X[iu, ju] = xv
    X[ju, iu] = xv
    return X


def _to_vector(X: np.ndarray) -> np.ndarray:
    iu, ju = np.triu_indices(X.shape[0], k=1)
    return X[iu, ju].copy()


def solve_metric_lp(G: Graph, lam: float, mode: Mode = "standard", config: LpConfig | None = None,
                    warm: LpSolution | None = None) -> LpSolution:
    """Approximately solve the relaxation and return a certified lower bound.

    ``warm`` reuses a previous solution (typically at a nearby lambda) as
    the proximal centre and its multipliers as the starting dual point.
    """
    cfg = config or LpConfig()
    if not 0 < lam < 1:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    n = G.n
    if n > cfg.max_n:
        raise ValueError(f"n={n} exceeds the LP size cap {cfg.max_n}")
    c, const = lp_objective(G, lam, mode)
    N = len(c)
    T = 3 * (n * (n - 1) * (n - 2) // 6)
    if N == 0 or T == 0:
        xv = (c < 0).astype(float)
        val = primal_value(c, const, xv)
        return LpSolution(val, _to_matrix(n, xv), val, 0.0, 0.0, 0, 0, True, lam, mode)
    idx = _pair_index(n)
    scale = max(float(np.abs(c).max()), 1e-300)

    if warm is not None and warm.duals is not None and warm.x.shape == (n, n):
        x_ref = _to_vector(warm.x)
        z, zlo, zhi = (d.copy() for d in warm.duals)
        gamma = warm.gamma
    else:
        x_ref = np.zeros(N)
        z, zlo, zhi = np.zeros(T), np.zeros(N), np.zeros(N)
        gamma = 1.0 / scale

    best_lb = -math.inf
    best = None
    sweeps_total = 0
    converged = False
    rounds = 0
    inner_tol = cfg.inner_tol if cfg.inner_tol is not None else 1e-6 * cfg.feas_tol
    for rounds in range(1, cfg.max_rounds + 1):
        x = x_ref - gamma * c
        tmp = np.zeros(N)
        _apply_At(n, idx, z, tmp)
        x += zlo - zhi - tmp
        sw, _ = _hildreth(n, idx, x, z, zlo, zhi, cfg.max_sweeps, inner_tol, cfg.active_sweeps)
        sweeps_total += sw
        lb = dual_bound(n, c, const, z / gamma)
        raw = primal_value(c, const, x)
        viol = max(_max_triangle_violation(n, idx, x), float(-x.min()), float(x.max() - 1.0), 0.0)
        if lb > best_lb:
            best_lb = lb
        best = (x.copy(), raw, viol)
        gap = raw - best_lb
        if viol <= cfg.feas_tol and abs(gap) <= cfg.tol * (1.0 + abs(best_lb)):
            converged = True
            break
        x_ref = x
        gamma *= cfg.gamma_growth
        z *= cfg.gamma_growth
        zlo *= cfg.gamma_growth
        zhi *= cfg.gamma_growth
    x, raw, viol = best
    if not converged:
        log.warning("metric LP not converged at lam=%g: gap %.3g, violation %.3g", lam, raw - best_lb, viol)
    sol = LpSolution(best_lb, _to_matrix(n, np.clip(x, 0.0, 1.0)), raw, viol, raw - best_lb, sweeps_total,
                     rounds, converged, lam, mode, (z, zlo, zhi), gamma)
    return sol


def exact_small_lp(G: Graph, lam: float, mode: Mode = "standard", max_n: int = EXACT_MAX_N) -> LpSolution:
    """Solve the explicit LP with HiGHS (dual simplex); reference for small graphs."""
    n = G.n
    if n > max_n:
        raise ValueError(f"exact LP limited to n <= {max_n}")
    c, const = lp_objective(G, lam, mode)
    N = len(c)
    if N == 0:
        return LpSolution(const, np.zeros((n, n)), const, 0.0, 0.0, 0, 0, True, lam, mode)
    idx = _pair_index(n)
    rows, cols, vals = [], [], []
    r = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ij, ik, jk = idx[i, j], idx[i, k], idx[j, k]
                for a, b, cc in ((ij, ik, jk), (ik, ij, jk), (jk, ij, ik)):
                    rows += [r, r, r]
                    cols += [a, b, cc]
                    vals += [1.0, -1.0, -1.0]
                    r += 1
    if r:
        A = coo_matrix((vals, (rows, cols)), shape=(r, N)).tocsr()
        res = linprog(c, A_ub=A, b_ub=np.zeros(r), bounds=(0, 1), method="highs-ds")
    else:
        res = linprog(c, bounds=(0, 1), method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"HiGHS failed: {res.message}")
    xv = res.x
    val = const + float(res.fun)
    viol = max(_max_triangle_violation(n, idx, xv), 0.0)
    return LpSolution(val, _to_matrix(n, xv), val, viol, 0.0, int(res.nit), 1, True, lam, mode)


# ------------------------------------------------------------ grid + cache

def _cache_key(G: Graph, lam: float, mode: str, cfg: LpConfig) -> str:
    raw = json.dumps([G.digest(), float(lam).hex(), mode, cfg.tol, cfg.feas_tol])
    return hashlib.sha256(raw.encode()).hexdigest()[:24]


def _cache_load(cache_dir: Path, key: str, n: int):
    meta = cache_dir / f"{key}.json"
    if not meta.exists():
        return None
    info = json.loads(meta.read_text())
    X = np.load(cache_dir / f"{key}.npy")
    if X.shape != (n, n):
        return None
    return LpSolution(info["value"], X, info["value_raw"], info["max_violation"], info["gap"],
                      info["iterations"], info["rounds"], info["converged"], info["lam"], info["mode"])


def _cache_store(cache_dir: Path, key: str, G: Graph, sol: LpSolution) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    np.save(cache_dir / f"{key}.npy", sol.x)
    info = {"graph": G.digest(), "lam": sol.lam, "mode": sol.mode, "value": sol.value,
            "value_raw": sol.value_raw, "max_violation": sol.max_violation, "gap": sol.gap,
            "iterations": sol.iterations, "rounds": sol.rounds, "converged": sol.converged}
    (cache_dir / f"{key}.json").write_text(json.dumps(info, indent=1))


class LpOracle:
    """Lower-bound oracle lam -> G(lam), warm-starting from the nearest solved lambda."""

    def __init__(self, G: Graph, mode: Mode = "standard", config: LpConfig | None = None,
                 cache_dir: str | Path | None = None):
        self.graph = G
        self.mode = mode
        self.config = config or LpConfig()
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.solutions: dict[float, LpSolution] = {}

    def solve(self, lam: float) -> LpSolution:
        lam = float(lam)
        if lam in self.solutions:
            return self.solutions[lam]
        key = None
        if self.cache_dir is not None:
            key = _cache_key(self.graph, lam, self.mode, self.config)
            hit = _cache_load(self.cache_dir, key, self.graph.n)
            if hit is not None:
                self.solutions[lam] = hit
                return hit
        warm = None
        live = [s for s in self.solutions.values() if s.duals is not None]
        if live:
            warm = min(live, key=lambda s: abs(s.lam - lam))
        sol = solve_metric_lp(self.graph, lam, self.mode, self.config, warm=warm)
        self.solutions[lam] = sol
        if key is not None:
            _cache_store(self.cache_dir, key, self.graph, sol)
        return sol

    def __call__(self, lam: float) -> float:
        return self.solve(lam).value


def _solve_cold(G, lam, mode, config, cache_dir):
    return LpOracle(G, mode, config, cache_dir).solve(lam)


def sample_G_grid(G: Graph, lams, mode: Mode = "standard", config: LpConfig | None = None,
                  cache_dir=None, jobs: int = 1) -> list[tuple[float, LpSolution]]:
    """Solve the LP at each lambda in order, warm-starting from the previous point.

    With ``jobs > 1`` points are solved cold in separate processes, so the
    values do not depend on scheduling.
    """
    lams = [float(x) for x in lams]
    if lams != sorted(lams):
        raise ValueError("lambda list must be sorted")
    if jobs <= 1 or len(lams) < 2:
        oracle = LpOracle(G, mode, config, cache_dir)
        return [(lam, oracle.solve(lam)) for lam in lams]
    k = len(lams)
    with ProcessPoolExecutor(min(jobs, k)) as pool:
        sols = pool.map(_solve_cold, [G] * k, lams, [mode] * k, [config] * k, [cache_dir] * k)
        return list(zip(lams, sols))


def interpolated_G(samples: list[tuple[float, float]]):
    """Piecewise-linear interpolant of sampled lower bounds.

    For a concave G, chords lie below the curve, so the interpolant is still
    a lower bound between samples and is itself concave and piecewise linear.
    """
    xs = np.array([s[0] for s in samples], dtype=float)
    ys = np.array([s[1] for s in samples], dtype=float)

    def G(lam: float) -> float:
        if lam < xs[0] - 1e-15 or lam > xs[-1] + 1e-15:
            raise ValueError(f"lambda={lam} outside sampled range [{xs[0]}, {xs[-1]}]")
        return float(np.interp(lam, xs, ys))

    return G
