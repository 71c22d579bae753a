from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from critideals.treegraph import (
    J,
    GraphError,
    MultiGraph,
    Tree,
    TreeParseError,
    c5,
    depth2,
    enumerate_connected_graphs,
    enumerate_labeled_trees,
    is_path_graph,
    levine_wired,
    parse_family,
    parse_graph,
    path,
    prufer_decode,
    prufer_encode,
    random_tree,
    regular_branch,
    regular_tree,
    regular_tree_size,
    serialize_graph,
    star,
    wired_regular,
)


def test_parse_examples(caterpillar):
    assert parse_graph("3\n1 2\n2 3") == path(3)
    text = "9\n1 2\n2 3\n2 4\n2 5\n5 6\n6 7\n6 8\n6 9\n"
    assert parse_graph(text) == caterpillar
    assert serialize_graph(caterpillar) == text


@pytest.mark.parametrize(
    "text, message",
    [
        ("2\n1 2\n2 1", "duplicate"),
        ("3\n1 2\n2 3\n1 3", "cycle"),
        ("4\n1 2\n3 4", "disconnected"),
        ("2\n1 1", "self-loop"),
        ("2\n1 3", "out of range"),
        ("3\n1 2 2\n2 3", "multiplicities"),
        ("", "empty"),
        ("x\n1 2", "vertex count"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(TreeParseError, match=message):
        parse_graph(text)


def test_multigraph_round_trip():
    g = wired_regular(4, 2)
    assert parse_graph(serialize_graph(g), multigraph=True) == g
    assert g.multiplicity(2, 6) == 3


def test_basic_queries(caterpillar):
    assert J(5, 4, 3).leaves() == {1, 8, 10}
    assert caterpillar.path_between(3, 5) == [3, 2, 5]
    split = path(3).delete_vertex(2)
    assert split.vertices == {1, 3} and not split.edges
    assert len(split.components()) == 2
    assert caterpillar.delete_edge(5, 6).component_index()[1] != caterpillar.delete_edge(5, 6).component_index()[9]
    with pytest.raises(GraphError):
        caterpillar.delete_vertex(10)
    with pytest.raises(GraphError):
        caterpillar.delete_edge(1, 3)
    with pytest.raises(GraphError):
        caterpillar.path_between(1, 42)


def test_hull(caterpillar):
    assert caterpillar.hull([3, 9]) == {3, 2, 5, 6, 9}
    assert caterpillar.hull([7]) == {7}


def test_family_sizes():
    assert J(5, 4, 3).n == 10
    assert regular_tree(4, 2).n == 17 == regular_tree_size(4, 2)
    for m in range(2, 7):
        assert star(m).n == m + 1
        assert star(m).leaves() == set(range(1, m + 1))
    assert depth2(2, 3, 1).n == 1 + 3 + 6
    for m in range(1, 9):
        t = c5(m)
        assert t.n == m + 5
        assert t.leaves() == {1, 2, 3, 4}
    assert c5(2).has_edge(5, 7)


@pytest.mark.parametrize("d, h", [(d, h) for d in range(3, 6) for h in range(1, 6) if regular_tree_size(d, h) < 3000])
def test_regular_tree_counts(d, h):
    t = regular_tree(d, h)
    assert t.n == 1 + d * ((d - 1) ** h - 1) // (d - 2)
    assert len(t.leaves()) == d * (d - 1) ** (h - 1)


def test_branch_and_wired():
    b = regular_branch(4, 2)
    assert b.n == regular_tree(4, 2).n - (1 + 3)
    w = wired_regular(4, 3)
    assert w.n == regular_tree(4, 2).n + 1 and w.is_connected()
    lw = levine_wired(4, 3)
    assert lw.n == regular_branch(4, 2).n + 1
    assert lw.multiplicity(1, lw.n) >= 1


def test_family_errors():
    for bad in ("star:1", "J:1,4,3", "regular:2,3", "c5:0", "nosuch:3", "path:a"):
        with pytest.raises(GraphError):
            parse_family(bad)


def test_parse_family():
    assert parse_family("J:5,4,3") == J(5, 4, 3)
    assert parse_family("path:4") == path(4)
    assert isinstance(parse_family("wired:4,2"), MultiGraph)


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_labeled_trees(3)) == 3
    assert sum(1 for _ in enumerate_labeled_trees(5)) == 125
    trees = list(enumerate_labeled_trees(6))
    assert len(trees) == 6**4 == len(set(trees))
    with pytest.raises(ValueError, match="limited"):
        next(enumerate_labeled_trees(9))


def test_prufer_round_trip():
    for n in range(3, 7):
        for seq in product(range(1, n + 1), repeat=n - 2):
            assert prufer_encode(prufer_decode(seq, n)) == list(seq)


def test_random_tree_is_reproducible():
    assert random_tree(20, 7) == random_tree(20, 7)
    assert random_tree(20, 7).n == 20


def test_paths_are_recognised():
    assert is_path_graph(path(6))
    assert not is_path_graph(star(3))


def test_connected_graphs():
    graphs = list(enumerate_connected_graphs(4))
    assert len(graphs) == 38
    assert all(g.is_connected() for g in graphs)
    assert sum(1 for g in graphs if g.is_tree()) == 16


@given(st.integers(2, 30), st.integers(0, 10**6))
def test_random_tree_invariants(n, seed):
    t = random_tree(n, seed)
    assert isinstance(t, Tree)
    assert len(t.edges) == n - 1 and t.is_connected()
    u, v = 1, n
    assert t.path_between(u, v)[::-1] == t.path_between(v, u)
