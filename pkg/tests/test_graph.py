from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reslearn.graph import (Clustering, Graph, GraphParseError, UndefinedConductance, bfs_grow, conductance,
                            connected_components, cut, format_edge_list, induced_subgraph, largest_component,
                            load_edge_list, normalize_labels, parse_edge_list, read_clustering, read_node_set, vol,
                            write_clustering, write_node_set)
from reslearn.synth import gnp


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Graph.from_edges(n, pairs)


@st.composite
def graph_and_set(draw):
    G = draw(graphs())
    mask = np.array(draw(st.lists(st.booleans(), min_size=G.n, max_size=G.n)), dtype=bool)
    return G, mask


def test_parse_path():
    G = parse_edge_list("0 1\n1 2")
    assert (G.n, G.m) == (3, 2)
    assert G.neighbors(1) == [0, 2]


def test_parse_drops_duplicate_and_loop():
    G = parse_edge_list("0 1\n1 0\n0 0")
    assert (G.n, G.m) == (2, 1)
    assert G.dropped_loops == 1 and G.dropped_duplicates == 1


def test_parse_compacts_ids_and_keeps_labels():
    G = parse_edge_list("# header\n% other comment\n10 30\n30 20\n")
    assert G.n == 3
    assert G.labels.tolist() == [10, 20, 30]
    assert G.has_edge(0, 2) and G.has_edge(1, 2) and not G.has_edge(0, 1)


@pytest.mark.parametrize("text, where", [("0 1\nfoo bar\n", "line 2"), ("0 1\n3\n", "line 2"), ("0 -1\n", "line 1")])
def test_parse_errors_carry_line_numbers(text, where):
    with pytest.raises(GraphParseError, match=where):
        parse_edge_list(text)


def test_empty_input_is_an_error():
    with pytest.raises(GraphParseError):
        parse_edge_list("# nothing\n\n")


def test_load_error_mentions_path(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1 2\nx y\n")
    with pytest.raises(GraphParseError, match="bad.txt"):
        load_edge_list(p)


def test_cut_examples(bar, c4):
    assert cut(c4, [0, 1]) == 2
    assert cut(bar, [0, 1, 2]) == 1
    assert cut(bar, np.arange(6)) == 0


def test_vol_examples(bar, c4):
    assert vol(bar, [0, 1, 2]) == 7
    assert vol(bar, []) == 0
    assert vol(c4, np.arange(4)) == 8


def test_conductance_examples(bar, c4):
    assert conductance(bar, [0, 1, 2]) == Fraction(1, 7)
    assert conductance(c4, [0, 1]) == Fraction(1, 2)


@pytest.mark.parametrize("S", [[], [0, 1, 2, 3, 4, 5]])
def test_conductance_undefined(bar, S):
    with pytest.raises(UndefinedConductance):
        conductance(bar, S)


def test_bfs_grow_examples(bar):
    assert bfs_grow(bar, [2], 3).tolist() == [0, 1, 2]
    assert bfs_grow(bar, np.arange(6), 6).tolist() == list(range(6))
    assert bfs_grow(bar, [0], 100).tolist() == list(range(6))


def test_bfs_grow_partial_layer_lowest_id_first(bar):
    # layer 1 from node 4 (id 3) is {3, 5, 6} in labels; only two fit
    assert bfs_grow(bar, [3], 3).tolist() == [2, 3, 4]


def test_set_validation(bar):
    with pytest.raises(ValueError):
        cut(bar, [0, 0])
    with pytest.raises(ValueError):
        cut(bar, [6])


@given(graph_and_set())
def test_cut_symmetric(gs):
    G, S = gs
    assert cut(G, S) == cut(G, ~S)


@given(graph_and_set())
def test_volumes_sum_to_2m(gs):
    G, S = gs
    assert vol(G, S) + vol(G, ~S) == 2 * G.m == G.degrees.sum()


@given(graph_and_set())
def test_conductance_in_unit_interval(gs):
    G, S = gs
    try:
        phi = conductance(G, S)
    except UndefinedConductance:
        return
    assert 0 <= phi <= 1


@given(graphs())
def test_adjacency_invariants(G):
    for u in range(G.n):
        nb = G.neighbors(u)
        assert nb == sorted(set(nb)) and u not in nb
        assert all(u in G.neighbors(v) for v in nb)
    assert G.degrees.sum() == 2 * G.m


@given(graphs())
def test_serialize_round_trip(G):
    G = induced_subgraph(G, np.flatnonzero(G.degrees > 0)) if G.m else G
    if G.m == 0:
        return
    assert parse_edge_list(format_edge_list(G)) == G


def test_components_and_largest():
    G = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    comp = connected_components(G)
    assert comp.tolist() == [0, 0, 0, 1, 1, 2]
    L = largest_component(G)
    assert (L.n, L.m) == (3, 2)


def test_normalize_labels_first_appearance():
    assert normalize_labels(["b", "a", "b", "c"]).tolist() == [0, 1, 0, 2]
    C = Clustering([5, 5, 2, 9])
    assert C.k == 3 and C.labels.tolist() == [0, 0, 1, 2]
    assert Clustering.from_sets(4, [[2], [0, 1], [3]]) == Clustering([1, 1, 0, 2])


def test_clustering_needs_full_cover():
    with pytest.raises(ValueError):
        Clustering.from_sets(3, [[0], [1]])


def test_node_set_and_clustering_files(tmp_path):
    G = parse_edge_list("10 20\n20 30\n30 40\n")
    write_node_set(G, [1, 3], tmp_path / "s.txt")
    assert (tmp_path / "s.txt").read_text() == "20\n40\n"
    assert read_node_set(G, tmp_path / "s.txt").tolist() == [1, 3]
    C = Clustering([0, 0, 1, 1])
    write_clustering(G, C, tmp_path / "c.tsv")
    assert read_clustering(G, tmp_path / "c.tsv") == C


def test_clustering_file_errors(tmp_path):
    G = parse_edge_list("1 2\n2 3\n")
    (tmp_path / "c.tsv").write_text("1\ta\n2\ta\n")
    with pytest.raises(GraphParseError, match="no cluster label"):
        read_clustering(G, tmp_path / "c.tsv")
    (tmp_path / "s.txt").write_text("7\n")
    with pytest.raises(GraphParseError, match="not in graph"):
        read_node_set(G, tmp_path / "s.txt")


def test_digest_is_content_based():
    a, b = gnp(10, 0.4, 1), gnp(10, 0.4, 1)
    assert a.digest() == b.digest() and a == b
    assert gnp(10, 0.4, 2).digest() != a.digest()
