"""Learning resolution parameters for graph clustering from example clusters."""

from .graph import Clustering, Graph, conductance, cut, load_edge_list, parse_edge_list, vol
from .lambdacc import brute_force_opt, eval_cc_objective, mistake_profile, modularity
from .local import LocalInstance, learn_local, make_local_fitness, min_f_alpha
from .metric_lp import LpConfig, exact_small_lp, solve_metric_lp
from .paramlearn import FitnessFunction, minimize_fitness
from .globalfit import learn_global, learn_global_from_grid, shared_grid
from .community import LouvainConfig, ari, louvain, nmi

__version__ = "0.1.0"

__all__ = [
    "Clustering", "Graph", "conductance", "cut", "load_edge_list", "parse_edge_list", "vol",
    "brute_force_opt", "eval_cc_objective", "mistake_profile", "modularity",
    "LocalInstance", "learn_local", "make_local_fitness", "min_f_alpha",
    "LpConfig", "exact_small_lp", "solve_metric_lp",
    "FitnessFunction", "minimize_fitness",
    "learn_global", "learn_global_from_grid", "shared_grid",
    "LouvainConfig", "ari", "louvain", "nmi",
]
