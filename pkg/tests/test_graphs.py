import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from indtrees.graphs import (
    Graph,
    VertexSet,
    complete_graph,
    cycle_graph,
    induced_subgraph,
    is_connected,
    is_forest,
    is_tree,
    path_graph,
    read_graph,
    sample_gnp,
    write_graph,
)
from indtrees.rng import Seed


def small_graphs():
    return st.integers(min_value=0, max_value=9).flatmap(
        lambda n: st.lists(
            st.tuples(
                st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))
            ).filter(lambda e: e[0] != e[1]),
            max_size=20,
        ).map(lambda edges: Graph(n, edges) if n else Graph(0))
    )


# --- VertexSet ---------------------------------------------------------------


def test_vertexset_basics():
    s = VertexSet.of([0, 3, 5])
    assert len(s) == 3
    assert list(s) == [0, 3, 5]
    assert 3 in s and 1 not in s
    assert VertexSet.full(4).vertices() == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        VertexSet.of([-1])


# --- Graph construction ------------------------------------------------------


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(-1)


def test_graph_deduplicates_and_symmetrizes():
    g = Graph(3, [(0, 1), (1, 0), (0, 1)])
    assert g.edge_count == 1
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert g.degree(0) == 1 and g.degree(2) == 0


def test_named_graphs():
    assert complete_graph(5).edge_count == 10
    assert path_graph(5).edge_count == 4
    assert cycle_graph(5).edge_count == 5
    assert is_tree(path_graph(5))
    assert not is_tree(cycle_graph(5))
    assert not is_forest(cycle_graph(3))


# --- sampling ----------------------------------------------------------------


def test_sample_deterministic():
    a = sample_gnp(50, 0.3, Seed(123, 7))
    b = sample_gnp(50, 0.3, Seed(123, 7))
    assert a == b
    c = sample_gnp(50, 0.3, Seed(123, 8))
    assert a != c  # different stream, different graph (a.s.)


def test_sample_extremes():
    assert sample_gnp(10, 0.0, Seed(1)).edge_count == 0
    assert sample_gnp(10, 1.0, Seed(1)) == complete_graph(10)
    assert sample_gnp(0, 0.5, Seed(1)).n == 0
    assert sample_gnp(1, 0.5, Seed(1)).edge_count == 0


def test_sample_rejects_bad_p():
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(ValueError):
            sample_gnp(5, bad, Seed(0))


def test_sample_density_matches_p():
    # mean degree over many pairs should be near p (binomial concentration)
    n, p = 200, 0.25
    g = sample_gnp(n, p, Seed(42))
    m = n * (n - 1) / 2
    observed = g.edge_count / m
    assert abs(observed - p) < 5 * math.sqrt(p * (1 - p) / m)


def test_sample_sparse_path_density():
    # n above the geometric-skip threshold exercises the run-length sampler
    n, p = 5000, 0.0008
    g = sample_gnp(n, p, Seed(9))
    m = n * (n - 1) / 2
    assert g == sample_gnp(n, p, Seed(9))
    assert abs(g.edge_count - p * m) < 5 * math.sqrt(m * p * (1 - p))
    for (u, v) in itertools.islice(g.edges(), 100):
        assert 0 <= u < v < n


# --- induced subgraphs and recognizers --------------------------------------


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_induced_full_is_identity(g):
    assert induced_subgraph(g, range(g.n)) == g


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_tree_implies_forest(g):
    if is_tree(g):
        assert is_forest(g)
    if is_forest(g) and g.n >= 1 and g.edge_count == g.n - 1:
        assert is_tree(g)


def test_induced_subgraph_relabels_increasing():
    g = path_graph(5)  # 0-1-2-3-4
    sub = induced_subgraph(g, [1, 3, 4])
    # vertices 1,3,4 -> 0,1,2; only edge 3-4 survives -> (1,2)
    assert sub.n == 3
    assert list(sub.edges()) == [(1, 2)]


def test_recognizer_edge_cases():
    empty = Graph(0)
    assert not is_tree(empty)
    assert is_forest(empty)  # vacuously acyclic
    assert not is_connected(empty)
    single = Graph(1)
    assert is_tree(single)
    assert is_forest(single)


# --- text format -------------------------------------------------------------


def test_graph_file_round_trip(tmp_path):
    g = sample_gnp(20, 0.4, Seed(5))
    path = tmp_path / "g.txt"
    write_graph(g, path)
    assert read_graph(path) == g
    first = path.read_text().splitlines()[0]
    assert first == f"{g.n} {g.edge_count}"


def test_read_graph_rejects_malformed(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n")
    with pytest.raises(ValueError):
        read_graph(path)
    path.write_text("3 1\n1 0\n")  # u < v violated
    with pytest.raises(ValueError):
        read_graph(path)
    path.write_text("3 2\n0 1\n")  # wrong edge count
    with pytest.raises(ValueError):
        read_graph(path)
