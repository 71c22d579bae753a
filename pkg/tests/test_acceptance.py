"""The fourteen acceptance criteria, each at its stated scale and tolerance.

Every test records a line through ``record_criterion``; the terminal summary
prints one PASS/FAIL line per criterion at the end of the run.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from math import comb

import pytest

from conftest import record_criterion, small_trees
from critideals import cli
from critideals.ideals import (
    all_minor_ideal,
    conjecture_scan,
    critical_ideal,
    depth2_pattern,
    expand_nonminimal,
    leaf_pair_basis,
    recombine,
    same_ideal,
    star_ideal,
    triviality_boundary,
    verify_identities,
)
from critideals.intalg import (
    c5_arithmetical,
    critical_group,
    evaluate_ideal,
    invariant_factor_products,
    laplacian_matrix,
    nu2_closed_form_check,
    spanning_tree_count,
    validate_arithmetical,
    wired_tree_report,
)
from critideals.laplacian import d_of_matching
from critideals.matching import TwoMatching, enumerate_minimal, nu2
from critideals.polyring import (
    CompletionBudgetExhausted,
    format_poly,
    groebner_complete,
    is_groebner_basis,
    is_reduced_groebner_basis,
    parse_poly,
    strong_reduce,
    x,
)
from critideals.treegraph import (
    MultiGraph,
    depth2,
    enumerate_connected_graphs,
    enumerate_labeled_trees,
    is_path_graph,
    random_tree,
    star,
)

pytestmark = pytest.mark.acceptance


def test_criterion_01_j543_fixture(capsys):
    code = cli.main(["ideal", "--family", "J:5,4,3", "--j", "9"])
    out = capsys.readouterr().out.splitlines()
    expected = {
        parse_poly("x1*x2*x3*x4 - x1*x2 - x3*x4 - x1*x4 + 1"),
        parse_poly("x6*x7*x8 - x6 - x8"),
        parse_poly("x9*x10 - 1"),
    }
    got = {parse_poly(line) for line in out}
    ok = code == 0 and got == expected and len(out) == 3
    record_criterion(1, "I_9(J(5,4,3))", ok, f"{len(out)} generators")
    assert ok


def test_criterion_02_caterpillar_example(caterpillar):
    t = caterpillar
    M = TwoMatching.of([(3, 2), (2, 5), (7, 6), (6, 8)], [1, 9])
    minor_ok = d_of_matching(t, M) == x(1) * x(9)

    big = TwoMatching.of([], [1, 2, 3, 4, 5, 6])
    P = [(2, 5), (5, 6), (6, 9)]
    M4 = TwoMatching.of([(1, 2), *P], [3, 4])
    M5 = TwoMatching.of([(2, 3), *P], [1, 4])
    M6 = TwoMatching.of([(2, 4), *P], [1, 3])
    p256 = x(2) * x(5) * x(6) - x(2) - x(6)
    p56 = x(5) * x(6) - 1
    d = lambda N: d_of_matching(t, N)  # noqa: E731
    worked = (x(1) * p256 - p56) * d(M4) - p56 * d(M5) - p56 * d(M6)
    alt4 = (x(4) * p256 - p56) * d(M6) - p56 * d(M4) - p56 * d(M5)
    alt3 = (x(3) * p256 - p56) * d(M5) - p56 * d(M4) - p56 * d(M6)
    target = d(big)
    expansion_ok = worked == target and alt4 == target and alt3 == target
    ours_ok = recombine(t, expand_nonminimal(t, big)) == target
    ok = minor_ok and expansion_ok and ours_ok
    record_criterion(2, "caterpillar", ok, f"d(M)={format_poly(d(M))}")
    assert ok


@pytest.mark.slow
def test_criterion_03_gamma_equals_nu2_n7():
    trees = violations = 0
    for t in enumerate_labeled_trees(7):
        trees += 1
        try:
            lo, hi = triviality_boundary(t, max_pairs=20_000)
        except CompletionBudgetExhausted:
            lo, hi = False, True
        if not lo or hi:
            violations += 1
    ok = trees == 16807 and violations == 0
    record_criterion(3, "gamma=nu2 n=7", ok, f"{trees} trees, {violations} violations")
    assert ok


@pytest.mark.slow
def test_criterion_04_oracle_equivalence():
    checked = violations = 0
    for t in small_trees(6):
        memo: dict = {}
        for j in range(1, t.n + 1):
            C = critical_ideal(t, j).generators
            A = all_minor_ideal(t, j, memo)
            # C is a subset of A, so A reduces C trivially; the other way needs completion
            contained = set(C) <= set(A)
            G = groebner_complete(C)
            reduced = all(strong_reduce(a, G)[1] for a in A)
            checked += 1
            violations += not (contained and reduced)
    ok = violations == 0
    record_criterion(4, "oracle n<=6", ok, f"{checked} (tree, j) pairs, {violations} violations")
    assert ok


@pytest.mark.slow
def test_criterion_05_leaf_pair_groebner():
    rng = random.Random(20261019)
    trees = list(small_trees(7))
    trees += [random_tree(rng.randint(2, 12), rng.randrange(2**32)) for _ in range(100)]
    violations = 0
    for t in trees:
        B = leaf_pair_basis(t)
        good = len(B) == comb(len(t.leaves()), 2) and is_groebner_basis(B) and is_reduced_groebner_basis(B)
        violations += not good
    ok = violations == 0
    record_criterion(5, "B_{n-1}", ok, f"{len(trees)} trees, {violations} violations")
    assert ok


@pytest.mark.slow
def test_criterion_06_identity_suites():
    counts: Counter = Counter()
    failures: Counter = Counter()
    for t in small_trees(6):
        for rec in verify_identities(t):
            counts[rec["check"]] += rec["instances"]
            failures[rec["check"]] += rec["status"] != "pass"
    ok = not sum(failures.values()) and len(counts) == 4 and all(counts.values())
    detail = ", ".join(f"{k}={counts[k]}" for k in sorted(counts))
    record_criterion(6, "identities n<=6", ok, f"instances {detail}; violations {sum(failures.values())}")
    assert ok


def test_criterion_07_star_ideals():
    mismatches = []
    for m in range(3, 7):
        for j in range(3, m + 2):
            if set(star_ideal(m, j)) != set(critical_ideal(star(m), j).generators):
                mismatches.append((m, j))
    ok = not mismatches
    record_criterion(7, "star ideals", ok, f"mismatches {mismatches}" if mismatches else "m=3..6")
    assert ok


def test_criterion_08_nu2_closed_forms():
    bad = []
    for d in (3, 4, 5):
        for h in range(2, 7):
            r = nu2_closed_form_check(d, h)
            if r["branch_formula"] != r["branch_dp"]:
                bad.append(("branch", d, h))
            if h >= 3 and r["full_formula"] != r["full_dp"]:
                bad.append(("full", d, h))
    ok = not bad
    record_criterion(8, "nu2 closed forms", ok, f"mismatches {bad}" if bad else "15 (d, h) pairs")
    assert ok


def test_criterion_09_c5_arithmetical():
    bad = []
    for m in range(5, 11):
        a = c5_arithmetical(m)
        group = critical_group(a)
        expect = (2, 2) if m % 2 == 0 else (4,)
        if not validate_arithmetical(a.graph, a.d, a.r) or group.torsion != expect or group.order != 4:
            bad.append((m, str(group)))
    ok = not bad
    record_criterion(9, "C5 arithmetical", ok, f"bad {bad}" if bad else "m=5..10")
    assert ok


def test_criterion_10_wired_trees():
    notes, ok = [], True
    for d in (4, 5):
        rep = wired_tree_report(d, 3)
        ok &= rep["rank"] == rep["predicted_rank_n_minus_nu2"]
        ok &= rep["first_nontrivial_factor"] == d
        # the (d-1)^h figure is data only
        notes.append(f"d={d}: rank {rep['rank']} vs (d-1)^h={rep['claimed_rank_d_minus_1_pow_h']}")
    record_criterion(10, "wired trees", ok, "; ".join(notes))
    assert ok


@pytest.mark.slow
def test_criterion_11_path_characterization():
    tree_bad = graphs = graph_bad = 0
    for n in range(2, 9):
        for t in enumerate_labeled_trees(n):
            tree_bad += (nu2(t) == n - 1) != is_path_graph(t)
    for n in range(3, 7):
        for g in enumerate_connected_graphs(n, min_edges=n):
            graphs += 1
            graph_bad += spanning_tree_count(g) <= 1
    ok = tree_bad == 0 and graph_bad == 0
    record_criterion(11, "paths", ok, f"{graphs} non-tree graphs; violations {tree_bad + graph_bad}")
    assert ok


DEPTH2 = [(2, 2), (2, 3), (2, 2, 2)]


def test_criterion_12_depth2_patterns():
    unmatched = []
    for counts in DEPTH2:
        t = depth2(*counts)
        for j in range(nu2(t) + 1, t.n + 1):
            for M in enumerate_minimal(t, j):
                if depth2_pattern(t, M) is None:
                    unmatched.append((counts, str(M)))
    ok = not unmatched
    record_criterion(12, "patterns", ok, f"unmatched {unmatched[:3]}" if unmatched else "")
    assert ok


@pytest.mark.xfail(strict=True, reason="x_root lies in I_{2s+1}; see the decisions ledger")
def test_criterion_12_leaf_variable_display():
    results = []
    for counts in DEPTH2:
        t = depth2(*counts)
        s = len(counts)
        leaves = [x(v) for v in sorted(t.leaves())]
        results.append(same_ideal(critical_ideal(t, 2 * s + 1).generators, leaves))
    ok = all(results)
    record_criterion(12, "I_{2s+1} = <leaf variables>", ok,
                     "" if ok else "x_root is in the ideal, so the leaf-only ideal is too small")
    assert ok


def test_criterion_12_root_and_leaves():
    # the ideal that the minimal 2-matchings actually give
    t = depth2(2, 2)
    expected = [x(1)] + [x(v) for v in sorted(t.leaves())]
    oracle_ok = same_ideal(all_minor_ideal(t, 5), expected)
    ok = oracle_ok
    for counts in DEPTH2:
        t = depth2(*counts)
        want = {x(1)} | {x(v) for v in t.leaves()}
        ok &= set(critical_ideal(t, 2 * len(counts) + 1).generators) == want
    assert ok


@pytest.mark.slow
def test_criterion_13_conjecture_scan(tmp_path):
    report = tmp_path / "conjecture.jsonl"
    records = 0
    findings = []
    with report.open("w") as fh:
        for t in small_trees(6):
            for rec in conjecture_scan(t):
                records += 1
                if rec["status"] != "pass":
                    findings.append(rec)
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    lines = report.read_text().splitlines()
    expected = sum(t.n for t in small_trees(6))
    ok = records == expected and len(lines) == records
    record_criterion(13, "conjecture scan", ok, f"{records} (tree, j) records, {len(findings)} findings")
    assert ok


@pytest.mark.slow
def test_criterion_14_evaluation_bridge():
    checked = bad = 0
    for t in small_trees(6):
        g = MultiGraph.from_tree(t)
        deg = g.degrees()
        products = invariant_factor_products(laplacian_matrix(g))
        point = {v: deg[v - 1] for v in range(1, t.n + 1)}
        for j in range(1, t.n + 1):
            checked += 1
            bad += evaluate_ideal(critical_ideal(t, j).generators, point) != products[j - 1]
    ok = bad == 0
    record_criterion(14, "evaluation bridge", ok, f"{checked} (tree, j) pairs, {bad} violations")
    assert ok
