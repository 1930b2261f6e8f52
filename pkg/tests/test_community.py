from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reslearn.community import LouvainConfig, ari, f1_set, louvain, nmi
from reslearn.graph import Clustering
from reslearn.lambdacc import SignedGraphView, brute_force_opt, eval_cc_objective
from reslearn.synth import PlantedSpec, barbell, connected_gnp, planted_partition, ring_of_cliques


def test_barbell_splits_at_bridge(bar):
    C = louvain(bar, LouvainConfig(lam=0.2, mode="standard"))
    assert C.same_partition(Clustering([0, 0, 0, 1, 1, 1]))


def test_ring_of_cliques_recovered_at_large_resolution():
    G, truth = ring_of_cliques(6, 4)
    C = louvain(G, LouvainConfig(lam=0.05, mode="degree"))
    assert ari(C, truth) == 1.0


def test_extreme_resolutions(bar):
    # triangles stay whole at any lambda < 1; only the bridge is cut
    assert louvain(bar, LouvainConfig(lam=0.99, mode="standard")).same_partition(Clustering([0, 0, 0, 1, 1, 1]))
    assert louvain(bar, LouvainConfig(lam=0.01, mode="standard")).k == 1


def test_seeded_determinism():
    G, _ = planted_partition(PlantedSpec((10, 10, 10), 0.5, 0.05, seed=3))
    a = louvain(G, LouvainConfig(lam=0.01, seed=7))
    b = louvain(G, LouvainConfig(lam=0.01, seed=7))
    assert np.array_equal(a.labels, b.labels)


def test_config_validation():
    with pytest.raises(ValueError):
        LouvainConfig(lam=0.0)


@given(st.integers(0, 2000), st.integers(3, 8), st.fractions(Fraction(1, 20), Fraction(19, 20)),
       st.sampled_from(["standard", "degree"]))
def test_louvain_never_beats_the_optimum(seed, n, lam, mode):
    G = connected_gnp(n, 0.4, seed)
    C = louvain(G, LouvainConfig(lam=float(lam), mode=mode, seed=seed))
    view = SignedGraphView(G, lam, mode)
    _, opt = brute_force_opt(G, lam, mode)
    val = eval_cc_objective(view, C)
    assert val >= opt
    # never worse than the two trivial clusterings
    assert val <= eval_cc_objective(view, Clustering(np.arange(n)))
    assert val <= eval_cc_objective(view, Clustering(np.zeros(n, int)))


def test_louvain_optimal_on_clear_structure():
    G, truth = ring_of_cliques(4, 4)
    lam = Fraction(1, 40)
    C = louvain(G, LouvainConfig(lam=float(lam)))
    view = SignedGraphView(G, lam, "degree")
    assert eval_cc_objective(view, C) <= eval_cc_objective(view, truth)


def test_scores():
    A = Clustering([0, 0, 1, 1])
    assert ari(A, Clustering([5, 5, 2, 2])) == 1.0
    assert nmi(A, Clustering([1, 1, 0, 0])) == pytest.approx(1.0)
    assert ari(A, Clustering([0, 1, 0, 1])) < 0.0 + 1e-12


@given(st.lists(st.integers(0, 4), min_size=2, max_size=30), st.lists(st.integers(0, 4), min_size=2, max_size=30))
def test_score_symmetry_and_range(a, b):
    k = min(len(a), len(b))
    A, B = Clustering(a[:k]), Clustering(b[:k])
    assert ari(A, B) == pytest.approx(ari(B, A))
    assert nmi(A, B) == pytest.approx(nmi(B, A))
    assert -1.0 <= ari(A, B) <= 1.0 + 1e-12
    assert -1e-12 <= nmi(A, B) <= 1.0 + 1e-12
    # invariant to relabeling
    perm = np.random.default_rng(k).permutation(5)
    assert ari(A, B) == pytest.approx(ari(Clustering(perm[A.labels]), B))


def test_f1_examples():
    assert f1_set([1, 2, 3], [1, 2, 3]) == 1.0
    assert f1_set([1, 2], [2, 3]) == pytest.approx(0.5)
    assert f1_set([1], [2]) == 0.0
    mask = np.array([True, True, False])
    assert f1_set(mask, [0, 1]) == 1.0
    with pytest.raises(ValueError):
        f1_set([], [1])


def test_barbell_fixture_has_seven_edges():
    assert barbell().m == 7
