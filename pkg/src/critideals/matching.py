"""2-matchings of trees and of their looped versions.

A :class:`TwoMatching` holds tree edges and a set of looped vertices. A loop
adds two to its vertex's incidence count but only one to the size.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .treegraph import Forest, Tree, _edge


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class TwoMatching:
    edges: frozenset
    loops: frozenset

    @classmethod
    def of(cls, edges: Iterable[tuple[int, int]] = (), loops: Iterable[int] = ()) -> "TwoMatching":
        return cls(frozenset(_edge(u, v) for u, v in edges), frozenset(loops))

    def __len__(self) -> int:
        return len(self.edges) + len(self.loops)

    @property
    def size(self) -> int:
        return len(self)

    def vertices(self) -> set[int]:
        """Vertices touched by an edge of the matching (loops excluded)."""
        return {v for e in self.edges for v in e}

    def incidence(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        for v in self.loops:
            deg[v] = deg.get(v, 0) + 2
        return deg

    def __str__(self) -> str:
        parts = [f"{u}-{v}" for u, v in sorted(self.edges)] + [f"{v}!" for v in sorted(self.loops)]
        return ",".join(parts)

    @classmethod
    def parse(cls, text: str) -> "TwoMatching":
        edges, loops = [], []
        for tok in (t.strip() for t in text.split(",")):
            if not tok:
                continue
            if tok.endswith("!"):
                loops.append(int(tok[:-1]))
            else:
                a, _, b = tok.partition("-")
                edges.append((int(a), int(b)))
        return cls.of(edges, loops)


@dataclass(frozen=True)
class HeadsTails:
    heads: frozenset
    tails: frozenset

    def sorted_heads(self) -> list[int]:
        return sorted(self.heads)

    def sorted_tails(self) -> list[int]:
        return sorted(self.tails)


def _check_refs(g: Forest, M: TwoMatching) -> None:
    for e in M.edges:
        if e not in g.edges:
            raise MatchingError(f"no edge {e[0]}-{e[1]}")
    for v in M.loops:
        if v not in g.vertices:
            raise MatchingError(f"no vertex {v}")


def is_two_matching(g: Forest, M: TwoMatching) -> bool:
    _check_refs(g, M)
    return all(c <= 2 for c in M.incidence().values())


# ---------------------------------------------------------------------------
# 2-matching number


def nu2(g: Forest, caps: dict[int, int] | None = None) -> int:
    """Maximum 2-matching size of a forest.

    ``caps`` optionally lowers the allowed incidence of selected vertices
    (default 2). Rooted DP: for each vertex the best subtree value when it may
    still take 2 or 1 child edges.
    """
    caps = caps or {}
    total = 0
    seen: set[int] = set()
    for root in g.sorted_vertices():
        if root in seen:
            continue
        order = []
        parent = {root: None}
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in g.neighbors(v):
                if w != parent[v]:
                    parent[w] = v
                    stack.append(w)
        seen.update(order)
        # best[v] = (value with parent edge unused, value with parent edge used or None)
        best: dict[int, tuple[int, int | None]] = {}
        for v in reversed(order):
            cap = min(2, caps.get(v, 2))
            base = 0
            gains = []
            for w in g.neighbors(v):
                if w == parent[v]:
                    continue
                free, used = best[w]
                base += free
                if used is not None and used + 1 > free:
                    gains.append(used + 1 - free)
            gains.sort(reverse=True)
            free_v = base + sum(gains[:cap])
            used_v = base + sum(gains[: cap - 1]) if cap >= 1 else None
            best[v] = (free_v, used_v)
        total += best[root][0]
    return total


def saturation(g: Forest) -> tuple[set[int], set[tuple[int, int]]]:
    """Vertices of degree 2 and edges present in every maximum 2-matching."""
    top = nu2(g)
    verts = {v for v in g.vertices if nu2(g, {v: 1}) < top}
    edges = {e for e in g.edges if nu2(g.delete_edges([e])) < top}
    return verts, edges


def saturation_by_enumeration(g: Forest) -> tuple[set[int], set[tuple[int, int]]]:
    """Same as :func:`saturation` from the list of all maximum 2-matchings."""
    top = nu2(g)
    maxima = list(enumerate_two_matchings(g, False, top))
    verts = set(g.vertices)
    edges = set(g.edges)
    for M in maxima:
        deg = M.incidence()
        verts = {v for v in verts if deg.get(v, 0) == 2}
        edges &= M.edges
    return verts, edges


# ---------------------------------------------------------------------------
# enumeration


def _items(g: Forest, with_loops: bool, loop_vertices: Iterable[int] | None = None) -> list:
    items: list = [("e", e) for e in g.sorted_edges()]
    if with_loops:
        lv = g.sorted_vertices() if loop_vertices is None else sorted(loop_vertices)
        items += [("l", v) for v in lv]
    return items


def enumerate_two_matchings(
    g: Forest, with_loops: bool, j: int, loop_vertices: Iterable[int] | None = None
) -> Iterator[TwoMatching]:
    """All 2-matchings of size ``j``, each once, in lexicographic order.

    The underlying item order is the sorted tree edges followed by the loops
    in vertex order. ``loop_vertices`` restricts which vertices carry a loop.
    """
    items = _items(g, with_loops, loop_vertices)
    if j < 0 or j > len(items):
        return
    deg = {v: 0 for v in g.vertices}
    chosen: list = []

    def rec(start: int, need: int):
        if need == 0:
            edges = [x for k, x in chosen if k == "e"]
            loops = [x for k, x in chosen if k == "l"]
            yield TwoMatching.of(edges, loops)
            return
        for i in range(start, len(items) - need + 1):
            kind, x = items[i]
            if kind == "e":
                u, v = x
                if deg[u] >= 2 or deg[v] >= 2:
                    continue
                deg[u] += 1
                deg[v] += 1
                chosen.append(items[i])
                yield from rec(i + 1, need - 1)
                chosen.pop()
                deg[u] -= 1
                deg[v] -= 1
            else:
                if deg[x]:
                    continue
                deg[x] = 2
                chosen.append(items[i])
                yield from rec(i + 1, need - 1)
                chosen.pop()
                deg[x] = 0

    yield from rec(0, j)


def matching_order_key(g: Forest, M: TwoMatching) -> tuple[int, ...]:
    """Position of ``M`` in the enumeration order (sorted item indices)."""
    index = {it: i for i, it in enumerate(_items(g, True))}
    return tuple(sorted([index[("e", e)] for e in M.edges] + [index[("l", v)] for v in M.loops]))


def is_maximal(g: Forest, M: TwoMatching) -> bool:
    """No edge of ``g`` can be added to the loopless matching ``M``."""
    deg = M.incidence()
    return all(e in M.edges or deg.get(e[0], 0) >= 2 or deg.get(e[1], 0) >= 2 for e in g.edges)


# ---------------------------------------------------------------------------
# minimal 2-matchings of the looped tree


def _feasible(g: Forest, loops: frozenset, j: int) -> bool:
    k = j - len(loops)
    return k >= 0 and nu2(g.delete_vertices(loops)) >= k


def minimal_loop_sets(g: Forest, j: int, loop_vertices: Iterable[int] | None = None) -> list[frozenset]:
    """Inclusion-minimal loop sets among the size-``j`` 2-matchings.

    A loop set ``L`` occurs at size ``j`` exactly when ``|L| <= j`` and the
    forest left after deleting ``L`` has 2-matching number at least ``j-|L|``.
    """
    lv = g.sorted_vertices() if loop_vertices is None else sorted(loop_vertices)
    if j <= nu2(g):
        return [frozenset()] if j >= 0 else []
    found: list[frozenset] = []
    for size in range(1, min(j, len(lv)) + 1):
        for L in combinations(lv, size):
            Ls = frozenset(L)
            if any(m <= Ls for m in found):
                continue
            if _feasible(g, Ls, j):
                found.append(Ls)
    return found


def leaf_pair_matchings(t: Forest) -> list[TwoMatching]:
    """The minimal 2-matchings of size ``n-1``: a leaf-to-leaf path plus loops elsewhere."""
    leaves = sorted(t.leaves())
    out = []
    for u, v in combinations(leaves, 2):
        p = t.path_between(u, v)
        rest = t.vertices - set(p)
        out.append(TwoMatching.of(zip(p, p[1:]), rest))
    if t.n == 1:
        out.append(TwoMatching.of())
    return sorted(out, key=lambda M: matching_order_key(t, M))


def enumerate_minimal(t: Forest, j: int) -> Iterator[TwoMatching]:
    """Minimal 2-matchings of size ``j`` of the looped tree, in enumeration order."""
    if j < 0 or j > t.n:
        raise MatchingError(f"size {j} out of range 0..{t.n}")
    if j == t.n - 1 and t.n >= 2:
        yield from leaf_pair_matchings(t)
        return
    if j <= nu2(t):
        yield from enumerate_two_matchings(t, False, j)
        return
    minimal = set(minimal_loop_sets(t, j))
    for M in enumerate_two_matchings(t, True, j):
        if M.loops in minimal:
            yield M


def first_matching_with_loops(g: Forest, loops: frozenset, j: int) -> TwoMatching | None:
    """Enumeration-first size-``j`` 2-matching whose loop set is exactly ``loops``."""
    rest = g.delete_vertices(loops)
    for E in enumerate_two_matchings(rest, False, j - len(loops)):
        return TwoMatching(E.edges, frozenset(loops))
    return None


def is_minimal(g: Forest, M: TwoMatching, loop_vertices: Iterable[int] | None = None) -> bool:
    """Definitional check: no same-size 2-matching has a strictly smaller loop set.

    Scans every proper subset of the loop set and searches by enumeration for a
    matching realising it; ``loop_vertices`` limits where loops may sit.
    """
    _check_refs(g, M)
    if not is_two_matching(g, M):
        raise MatchingError("not a 2-matching")
    j = len(M)
    L = sorted(M.loops)
    for size in range(len(L)):
        for sub in combinations(L, size):
            if first_matching_with_loops(g, frozenset(sub), j) is not None:
                return False
    return True


# ---------------------------------------------------------------------------
# heads and tails


def path_components(M: TwoMatching) -> list[list[int]]:
    """Each edge component of ``M`` as a vertex sequence starting at its smaller endpoint."""
    adj: dict[int, list[int]] = {}
    for u, v in M.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    out = []
    for start in sorted(adj):
        if start in seen or len(adj[start]) != 1:
            continue
        seq = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seq.append(cur)
            seen.add(cur)
        out.append(seq)
    if len(seen) != len(adj):
        raise MatchingError("matching contains a cycle")
    return out


def heads_tails(g: Forest, M: TwoMatching) -> HeadsTails:
    """Arc heads and tails after orienting each path from its smaller-label end."""
    if not is_two_matching(g, M):
        raise MatchingError("not a 2-matching")
    heads: set[int] = set(M.loops)
    tails: set[int] = set(M.loops)
    for seq in path_components(M):
        tails.update(seq[:-1])
        heads.update(seq[1:])
    return HeadsTails(frozenset(heads), frozenset(tails))


# ---------------------------------------------------------------------------
# structural statements checked by enumeration


def maximal_two_matchings(g: Forest) -> Iterator[TwoMatching]:
    for j in range(len(g.edges) + 1):
        for M in enumerate_two_matchings(g, False, j):
            if is_maximal(g, M):
                yield M


def _component_of(g: Forest, v: int) -> Forest:
    for comp in g.components():
        if v in comp:
            return g.induced_subgraph(comp)
    raise MatchingError(f"no vertex {v}")


def structural_checks(t: Tree) -> dict:
    """Exhaustively test the 2-matching statements on ``t``; returns counts and violations."""
    report = {"tree": [t.n, t.sorted_edges()], "checks": {}, "violations": []}

    def record(name, ok, witness):
        c = report["checks"].setdefault(name, {"instances": 0, "violations": 0})
        c["instances"] += 1
        if not ok:
            c["violations"] += 1
            report["violations"].append({"check": name, "witness": witness})

    top = nu2(t)
    sat_v, sat_e = saturation(t)
    leaves = sorted(t.leaves())

    # every maximal 2-matching contains a whole leaf-to-leaf path
    if t.n >= 2:
        paths = [set(zip(*(lambda p: (p, p[1:]))(t.path_between(u, v)))) for u, v in combinations(leaves, 2)]
        paths = [{_edge(a, b) for a, b in p} for p in paths]
        for M in maximal_two_matchings(t):
            ok = any(p <= M.edges for p in paths)
            record("maximal_contains_leaf_path", ok, str(M))

    # deleting an edge
    for e in t.sorted_edges():
        u, v = e
        te = t.delete_edges([e])
        diff = top - nu2(te)
        sv, _ = saturation(te)
        ok = diff in (0, 1)
        ok &= (diff == 1) == (e in sat_e)
        ok &= (diff == 0) == (u in sv or v in sv)
        record("edge_deletion", ok, {"edge": e, "diff": diff})

    # deleting a vertex
    for v in t.sorted_vertices():
        tv = t.delete_vertex(v)
        diff = top - nu2(tv)
        nbrs = t.neighbors(v)
        comp_sat = {}
        for w in nbrs:
            ti = _component_of(tv, w)
            comp_sat[w] = w in saturation(ti)[0]
        case2 = v in sat_v
        case0 = all(comp_sat.values())
        case1 = any(
            _edge(v, wj) in sat_e and all(comp_sat[wi] for wi in nbrs if wi != wj) for wj in nbrs
        )
        ok = diff in (0, 1, 2) and (diff == 2) == case2 and (diff == 0) == case0
        ok &= (diff == 1) == (case1 and not case0)
        record("vertex_deletion", ok, {"vertex": v, "diff": diff})

    # saturation in a branch extends to the whole tree
    for a, b in t.sorted_edges():
        split = t.delete_edges([(a, b)])
        for u in (a, b):
            tu = _component_of(split, u)
            if u in saturation(tu)[0]:
                record("saturation_extends", u in sat_v, {"edge": (a, b), "vertex": u})

    if t.n >= 3:
        record("has_saturated_vertex", bool(sat_v), None)

    # maximal-on-neighbourhood matchings padded with loops are minimal
    for jj in range(len(t.edges) + 1):
        for M in enumerate_two_matchings(t, False, jj):
            vm = M.vertices()
            closed = set(vm) | {w for x in vm for w in t.neighbors(x)}
            sub = t.induced_subgraph(closed)
            if not is_maximal(sub, M):
                continue
            N = TwoMatching(M.edges, frozenset(t.vertices - vm))
            record("padded_maximal_is_minimal", is_minimal(t, N), str(N))

    # recursive containment across every edge
    minimal_all = [M for j in range(1, t.n + 1) for M in enumerate_minimal(t, j)]
    for a, b in t.sorted_edges():
        split = t.delete_edges([(a, b)])
        sides = {a: _component_of(split, a), b: _component_of(split, b)}
        for M in minimal_all:
            if (a, b) in M.edges:
                ok = True
                for x, y in ((a, b), (b, a)):
                    side = sides[x]
                    g = Forest(side.vertices | {y}, side.edges | {(a, b)})
                    part = TwoMatching(
                        frozenset(e for e in M.edges if e in g.edges), frozenset(M.loops & side.vertices)
                    )
                    ok &= is_minimal(g, part, loop_vertices=side.vertices)
            else:
                ok = True
                for x in (a, b):
                    side = sides[x]
                    part = TwoMatching(
                        frozenset(e for e in M.edges if e in side.edges), frozenset(M.loops & side.vertices)
                    )
                    ok &= is_minimal(side, part)
            record("recursive_containment", ok, {"edge": (a, b), "matching": str(M)})
    return report


def count_leaf_pairs(t: Forest) -> int:
    return comb(len(t.leaves()), 2)
