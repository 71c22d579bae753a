"""Generalized Laplacians of trees and multigraphs and their symbolic minors."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .matching import TwoMatching, heads_tails, is_two_matching, MatchingError
from .polyring import ONE, ZERO, Polynomial, mono
from .treegraph import Forest, MultiGraph


class SymbolicMatrix:
    """Sparse symmetric matrix with polynomial entries indexed by vertex labels.

    Only the generalized Laplacian is ever built, so an entry is either the
    variable ``x_u`` on the diagonal or an integer ``-m_uv`` off it.
    """

    __slots__ = ("labels", "_off", "_support")

    def __init__(self, labels: Iterable[int], off: dict[tuple[int, int], int]):
        self.labels = tuple(sorted(labels))
        self._off = {}
        support = {v: {v} for v in self.labels}
        for (u, v), m in off.items():
            if m:
                self._off[(u, v)] = m
                self._off[(v, u)] = m
                support[u].add(v)
                support[v].add(u)
        self._support = {v: frozenset(s) for v, s in support.items()}

    def entry(self, u: int, v: int) -> Polynomial:
        if u == v:
            return Polynomial.var(u)
        return Polynomial.constant(-self._off.get((u, v), 0))

    def support(self, v: int) -> frozenset:
        """Column labels with a nonzero entry in row ``v``."""
        return self._support[v]

    def rows(self) -> list[list[Polynomial]]:
        return [[self.entry(u, v) for v in self.labels] for u in self.labels]

    def __str__(self) -> str:
        from .polyring import format_poly

        return "\n".join("[" + ", ".join(format_poly(p) for p in row) + "]" for row in self.rows())


def generalized_laplacian(g: Forest | MultiGraph) -> SymbolicMatrix:
    if isinstance(g, MultiGraph):
        off = {}
        for u in range(1, g.n + 1):
            for v in range(u + 1, g.n + 1):
                m = g.multiplicity(u, v)
                if m:
                    off[(u, v)] = m
        return SymbolicMatrix(range(1, g.n + 1), off)
    return SymbolicMatrix(g.vertices, {e: 1 for e in g.edges})


def _times_entry(L: SymbolicMatrix, r: int, c: int, p: Polynomial) -> Polynomial:
    if r == c:
        return p.mul_term(1, mono({r: 1}))
    return p.scale(-L._off[(r, c)])


def minor(L: SymbolicMatrix, rows: Sequence[int], cols: Sequence[int], memo: dict | None = None) -> Polynomial:
    """det L[rows, cols] with both index lists sorted ascending.

    Cofactor expansion along whichever row or column has the fewest nonzero
    entries; sub-determinants are memoized on their (rows, cols) pair. Pass the
    same ``memo`` dict across calls on one matrix to share that work.
    """
    if len(rows) != len(cols):
        raise ValueError(f"size mismatch: {len(rows)} rows, {len(cols)} columns")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ValueError("repeated index")
    memo = {} if memo is None else memo

    def det(R: tuple, C: tuple) -> Polynomial:
        if not R:
            return ONE
        key = (R, C)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = None
        for i, r in enumerate(R):
            nz = [(k, c) for k, c in enumerate(C) if c in L.support(r)]
            if best is None or len(nz) < len(best[2]):
                best = ("row", i, nz)
        for k, c in enumerate(C):
            nz = [(i, r) for i, r in enumerate(R) if r in L.support(c)]
            if len(nz) < len(best[2]):
                best = ("col", k, nz)
        kind, pos, nz = best
        total = ZERO
        for other_pos, other in nz:
            if kind == "row":
                r, c = R[pos], other
                sub = det(R[:pos] + R[pos + 1 :], C[:other_pos] + C[other_pos + 1 :])
                sign = -1 if (pos + other_pos) % 2 else 1
            else:
                r, c = other, C[pos]
                sub = det(R[:other_pos] + R[other_pos + 1 :], C[:pos] + C[pos + 1 :])
                sign = -1 if (pos + other_pos) % 2 else 1
            if sub.is_zero():
                continue
            term = _times_entry(L, r, c, sub)
            total = total + term if sign > 0 else total - term
        memo[key] = total
        return total

    return det(tuple(sorted(rows)), tuple(sorted(cols)))


def minor_by_permutations(L: SymbolicMatrix, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    """Leibniz-formula determinant; exponential, used as an oracle."""
    R, C = sorted(rows), sorted(cols)
    if len(R) != len(C):
        raise ValueError("size mismatch")
    total = ZERO
    for perm in permutations(range(len(C))):
        inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
        term = ONE
        for i, k in enumerate(perm):
            e = L.entry(R[i], C[k])
            if e.is_zero():
                term = ZERO
                break
            term = term * e
        if not term.is_zero():
            total = total - term if inv % 2 else total + term
    return total


def _matchings_of(g: Forest) -> list[list[tuple[int, int]]]:
    edges = g.sorted_edges()
    out: list[list] = []

    def rec(i: int, used: set, chosen: list):
        if i == len(edges):
            out.append(list(chosen))
            return
        rec(i + 1, used, chosen)
        u, v = edges[i]
        if u not in used and v not in used:
            used |= {u, v}
            chosen.append(edges[i])
            rec(i + 1, used, chosen)
            chosen.pop()
            used -= {u, v}

    rec(0, set(), [])
    return out


def matching_expansion(g: Forest) -> Polynomial:
    """Sum over matchings ``mu`` of ``(-1)^|mu|`` times the variables off ``V(mu)``."""
    total = ZERO
    for mu in _matchings_of(g):
        covered = {v for e in mu for v in e}
        term = Polynomial.product_of_vars(g.vertices - covered)
        total = total - term if len(mu) % 2 else total + term
    return total


@lru_cache(maxsize=1 << 16)
def matching_determinant(g: Forest) -> Polynomial:
    """det L(g, X) of a forest, computed by a leaf-to-root recursion.

    Equal to :func:`matching_expansion`; the recursion keeps, for each vertex,
    the determinant of its subtree with and without the vertex itself.
    """
    result = ONE
    seen: set[int] = set()
    for root in g.sorted_vertices():
        if root in seen:
            continue
        parent = {root: None}
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in g.neighbors(v):
                if w != parent[v]:
                    parent[w] = v
                    stack.append(w)
        seen.update(order)
        with_v: dict[int, Polynomial] = {}
        without_v: dict[int, Polynomial] = {}
        for v in reversed(order):
            kids = [w for w in g.neighbors(v) if w != parent[v]]
            prod = ONE
            for w in kids:
                prod = prod * with_v[w]
            acc = prod.mul_term(1, mono({v: 1}))
            for w in kids:
                rest = without_v[w]
                for w2 in kids:
                    if w2 != w:
                        rest = rest * with_v[w2]
                acc = acc - rest
            with_v[v] = acc
            without_v[v] = prod
        result = result * with_v[root]
    return result


def loop_set_determinant(t: Forest, loops: Iterable[int]) -> Polynomial:
    """det L[loops, loops], the value shared by every 2-matching with that loop set."""
    return matching_determinant(t.induced_subgraph(loops))


def d_of_matching(t: Forest, M: TwoMatching, memo: dict | None = None) -> Polynomial:
    """The minor on tails and heads of ``M``, signed so its leading coefficient is positive."""
    if not is_two_matching(t, M):
        raise MatchingError("not a 2-matching")
    ht = heads_tails(t, M)
    L = generalized_laplacian(t)
    return minor(L, ht.sorted_tails(), ht.sorted_heads(), memo).normalized_sign()


def _perfect_assignment(L: SymbolicMatrix, R: list[int], C: list[int]) -> dict[int, int] | None:
    cset = set(C)
    match_col: dict[int, int] = {}

    def augment(r: int, seen: set) -> bool:
        for c in sorted(L.support(r) & cset):
            if c in seen:
                continue
            seen.add(c)
            if c not in match_col or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in R:
        if not augment(r, set()):
            return None
    return {r: c for c, r in match_col.items()}


def minor_to_matching(t: Forest, rows: Sequence[int], cols: Sequence[int]) -> TwoMatching | None:
    """A 2-matching of the looped tree behind a nonvanishing minor, else ``None``.

    A permutation with all entries nonzero pairs each row with itself (a loop)
    or a neighbour (an arc). Opposite arcs on one edge are swapped into two
    loops. The arcs then run from ``rows`` to ``cols``.
    """
    if len(rows) != len(cols):
        raise ValueError(f"size mismatch: {len(rows)} rows, {len(cols)} columns")
    L = generalized_laplacian(t)
    if minor(L, rows, cols).is_zero():
        return None
    sigma = _perfect_assignment(L, sorted(rows), sorted(cols))
    assert sigma is not None, "nonzero minor without a nonzero diagonal"
    loops = set()
    edges = set()
    for r, c in sigma.items():
        if r == c:
            loops.add(r)
        elif sigma.get(c) == r:
            loops.update((r, c))
        else:
            edges.add((r, c))
    return TwoMatching.of(edges, loops)

