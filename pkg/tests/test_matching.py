from __future__ import annotations

from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_trees
from critideals.matching import (
    MatchingError,
    TwoMatching,
    enumerate_minimal,
    enumerate_two_matchings,
    heads_tails,
    is_minimal,
    is_two_matching,
    leaf_pair_matchings,
    nu2,
    saturation,
    saturation_by_enumeration,
    structural_checks,
)
from critideals.treegraph import J, c5, enumerate_labeled_trees, path, random_tree, star


def brute_two_matchings(t, with_loops, j):
    """Filter every subset of edges (and loops) by the incidence rule."""
    items = [("e", e) for e in t.sorted_edges()]
    if with_loops:
        items += [("l", v) for v in t.sorted_vertices()]
    out = set()
    for chosen in combinations(items, j):
        deg = {}
        for kind, x in chosen:
            for v in (x if kind == "e" else (x, x)):
                deg[v] = deg.get(v, 0) + 1
        if all(c <= 2 for c in deg.values()):
            out.add(TwoMatching.of([x for k, x in chosen if k == "e"], [x for k, x in chosen if k == "l"]))
    return out


def brute_nu2(t):
    edges = t.sorted_edges()
    best = 0
    for mask in range(1 << len(edges)):
        deg = {}
        size = 0
        for i, (u, v) in enumerate(edges):
            if mask >> i & 1:
                size += 1
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
        if all(c <= 2 for c in deg.values()):
            best = max(best, size)
    return best


# -- validity ---------------------------------------------------------------


def test_validity_examples(caterpillar):
    assert is_two_matching(caterpillar, TwoMatching.of([(1, 2), (2, 5), (6, 7), (6, 8)]))
    assert not is_two_matching(caterpillar, TwoMatching.of([(1, 2), (2, 3), (2, 4), (6, 8)]))
    assert not is_two_matching(caterpillar, TwoMatching.of([(2, 3)], [3]))
    with pytest.raises(MatchingError):
        is_two_matching(caterpillar, TwoMatching.of([(1, 9)]))


def test_text_form():
    M = TwoMatching.of([(3, 2), (2, 5)], [9, 1])
    assert str(M) == "2-3,2-5,1!,9!"
    assert TwoMatching.parse(str(M)) == M
    assert len(M) == M.size == 4


# -- nu2 and saturation -------------------------------------------------------


def test_nu2_examples(caterpillar):
    assert nu2(caterpillar) == 4
    for n in range(1, 9):
        assert nu2(path(n)) == n - 1
    for m in range(2, 8):
        assert nu2(star(m)) == 2
    for m in range(2, 9):
        assert nu2(c5(m)) == m + 2
    # with no inner path vertex the two cherries give 4, not 3
    assert nu2(c5(1)) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 10**6))
def test_nu2_matches_subset_search(n, seed):
    t = random_tree(n, seed)
    assert nu2(t) == brute_nu2(t)


def test_saturation_examples():
    sv, se = saturation(path(3))
    assert sv == {2} and se == {(1, 2), (2, 3)}
    sv, se = saturation(path(2))
    assert sv == set() and se == {(1, 2)}


def test_saturation_agrees_with_enumeration():
    for t in small_trees(6):
        assert saturation(t) == saturation_by_enumeration(t)


@pytest.mark.slow
def test_edge_saturation_n7():
    for n in range(2, 8):
        for t in enumerate_labeled_trees(n):
            k = nu2(t)
            _, se = saturation(t)
            for e in t.sorted_edges():
                drop = k - nu2(t.delete_edges([e]))
                assert drop in (0, 1)
                assert (drop == 1) == (e in se)


def test_saturated_vertex_exists():
    for t in small_trees(7, min_n=3):
        assert saturation(t)[0]


# -- enumeration --------------------------------------------------------------


def test_enumeration_examples(caterpillar):
    assert len(list(enumerate_two_matchings(path(3), False, 2))) == 1
    example = TwoMatching.of([(3, 2), (2, 5), (7, 6), (6, 8)], [1, 9])
    assert example in set(enumerate_two_matchings(caterpillar, True, 6))


def test_enumeration_matches_subset_filter():
    for t in small_trees(6):
        for j in range(t.n + 1):
            for loops in (False, True):
                got = list(enumerate_two_matchings(t, loops, j))
                assert len(got) == len(set(got))
                assert set(got) == brute_two_matchings(t, loops, j)


def test_enumeration_is_deterministic(caterpillar):
    a = [str(M) for M in enumerate_two_matchings(caterpillar, True, 5)]
    b = [str(M) for M in enumerate_two_matchings(caterpillar, True, 5)]
    assert a == b


# -- minimal 2-matchings --------------------------------------------------------


def test_minimal_examples(caterpillar):
    M = TwoMatching.of([(1, 2), (2, 5), (5, 6), (6, 9)], [3])
    assert is_minimal(caterpillar, M)
    assert M in set(enumerate_minimal(caterpillar, 5))
    assert len(list(enumerate_minimal(J(5, 4, 3), 9))) == 3
    assert not is_minimal(caterpillar, TwoMatching.of([], [1, 2, 3, 4, 5, 6]))


def test_minimal_matches_definitional_scan():
    for t in small_trees(6):
        for j in range(1, t.n + 1):
            everything = brute_two_matchings(t, True, j)
            loop_sets = {M.loops for M in everything}
            minimal_sets = {L for L in loop_sets if not any(K < L for K in loop_sets)}
            expected = {M for M in everything if M.loops in minimal_sets}
            got = list(enumerate_minimal(t, j))
            assert set(got) == expected
            assert all(is_minimal(t, M) for M in got[:5])


def test_small_sizes_are_loopless():
    for t in small_trees(6):
        k = nu2(t)
        for j in range(1, k + 1):
            assert set(enumerate_minimal(t, j)) == set(enumerate_two_matchings(t, False, j))
        assert all(not M.loops for M in enumerate_minimal(t, k))
        assert any(True for _ in enumerate_two_matchings(t, False, k))


def test_leaf_pairs():
    for t in small_trees(6):
        L = leaf_pair_matchings(t)
        assert len(L) == comb(len(t.leaves()), 2)
        assert set(L) == set(enumerate_minimal(t, t.n - 1))


def test_edge_deletion_range():
    for t in small_trees(6):
        k = nu2(t)
        for e in t.sorted_edges():
            assert nu2(t.delete_edges([e])) in (k - 1, k)


# -- heads and tails ----------------------------------------------------------------


def test_heads_tails_examples(caterpillar):
    M = TwoMatching.of([(3, 2), (2, 5), (7, 6), (6, 8)], [1, 9])
    ht = heads_tails(caterpillar, M)
    assert ht.heads == {1, 2, 5, 6, 8, 9}
    assert ht.tails == {1, 2, 3, 6, 7, 9}
    single = heads_tails(path(3), TwoMatching.of([], [2]))
    assert single.heads == single.tails == {2}
    arc = heads_tails(path(3), TwoMatching.of([(1, 2)]))
    assert arc.heads == {2} and arc.tails == {1}


def test_heads_tails_sizes():
    for t in small_trees(5):
        for j in range(t.n + 1):
            for M in enumerate_two_matchings(t, True, j):
                ht = heads_tails(t, M)
                assert len(ht.heads) == len(ht.tails) == len(M)
                assert M.loops <= ht.heads & ht.tails


# -- structural statements ------------------------------------------------------


def _no_violations(trees):
    for t in trees:
        rep = structural_checks(t)
        assert not rep["violations"], rep["violations"][:3]
        yield rep


def test_structural_checks_small():
    reports = list(_no_violations(small_trees(5)))
    names = set().union(*(r["checks"] for r in reports))
    assert {"maximal_contains_leaf_path", "edge_deletion", "vertex_deletion", "saturation_extends",
            "has_saturated_vertex", "padded_maximal_is_minimal", "recursive_containment"} <= names


@pytest.mark.slow
def test_structural_checks_n6():
    assert sum(1 for _ in _no_violations(enumerate_labeled_trees(6))) == 1296
