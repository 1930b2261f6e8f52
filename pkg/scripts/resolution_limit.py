"""Ring of cliques: Louvain at the modularity resolution vs at a learned lambda.

    python scripts/resolution_limit.py --c 8 --k 5
    python scripts/resolution_limit.py --c 20 --k 3

Prints the learned lambda, its fitness, ARI against the planted cliques at
both resolutions, and the LambdaCC objective of the planted clustering vs
the clustering that merges adjacent cliques in pairs.
"""

import argparse
import time
from fractions import Fraction

from reslearn.community import LouvainConfig, ari, louvain
from reslearn.globalfit import learn_global
from reslearn.graph import Clustering
from reslearn.lambdacc import SignedGraphView, eval_cc_objective
from reslearn.synth import ring_of_cliques


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--c", type=int, default=8)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    G, truth = ring_of_cliques(args.c, args.k)
    lam_mod = Fraction(1, 2 * G.m)
    t = time.perf_counter()
    rep = learn_global(G, truth, "degree")
    print(f"ring({args.c},{args.k}): n={G.n} m={G.m}")
    print(f"learned lambda {rep.lam:.6g}, delta {rep.delta:.4f}, {rep.result.recursive_calls} recursive calls, "
          f"{time.perf_counter() - t:.1f}s")
    for name, lam in (("1/(2m)", float(lam_mod)), ("learned", rep.lam)):
        C = louvain(G, LouvainConfig(lam=lam, seed=args.seed))
        print(f"louvain at {name:8s} lambda={lam:.6g}: {C.k} clusters, ARI {ari(C, truth):.3f}")
    if args.c % 2 == 0:
        view = SignedGraphView(G, lam_mod, "degree")
        merged = Clustering(truth.labels // 2)
        print(f"objective at 1/(2m): planted {float(eval_cc_objective(view, truth)):.4f}, "
              f"merged pairs {float(eval_cc_objective(view, merged)):.4f}")


if __name__ == "__main__":
    main()
