"""Critical ideals of trees built from minimal 2-matchings, plus executable identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .laplacian import (
    d_of_matching,
    generalized_laplacian,
    loop_set_determinant,
    matching_determinant,
    minor,
)
from .matching import (
    MatchingError,
    TwoMatching,
    enumerate_two_matchings,
    first_matching_with_loops,
    heads_tails,
    leaf_pair_matchings,
    minimal_loop_sets,
    nu2,
)
from .polyring import (
    ONE,
    ZERO,
    Polynomial,
    contains_one,
    format_poly,
    generator_set,
    groebner_complete,
    ideal_contains,
    is_groebner_basis,
    is_reduced_groebner_basis,
    strong_reduce,
)
from .treegraph import Forest, Tree, _edge


@dataclass(frozen=True)
class CriticalIdeal:
    tree: Forest
    j: int
    generators: tuple
    provenance: dict = field(compare=False)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def lines(self, with_provenance: bool = False) -> list[str]:
        if not with_provenance:
            return [format_poly(p) for p in self.generators]
        return [f"{format_poly(p)}\t[{self.provenance[p]}]" for p in self.generators]


def _check_j(t: Forest, j: int) -> None:
    if not 1 <= j <= t.n:
        raise ValueError(f"j must lie in 1..{t.n}, got {j}")


def critical_ideal(t: Forest, j: int) -> CriticalIdeal:
    """Generators ``d(M, X)`` over the minimal 2-matchings ``M`` of size ``j``.

    Every 2-matching with loop set ``L`` has ``d(M, X) = det L[L, L]``, so one
    determinant per minimal loop set suffices; the recorded provenance is the
    enumeration-first matching carrying that loop set.
    """
    _check_j(t, j)
    prov: dict[Polynomial, TwoMatching] = {}
    for L in minimal_loop_sets(t, j):
        M = first_matching_with_loops(t, L, j)
        assert M is not None
        p = loop_set_determinant(t, L)
        prov.setdefault(p, M)
    gens = tuple(generator_set(prov))
    return CriticalIdeal(t, j, gens, prov)


def leaf_pair_basis(t: Forest) -> list[Polynomial]:
    """Generators of the size ``n-1`` ideal, one per pair of leaves."""
    return generator_set(loop_set_determinant(t, M.loops) for M in leaf_pair_matchings(t))


def all_minor_ideal(t: Forest, j: int, memo: dict | None = None) -> list[Polynomial]:
    """Every nonzero ``j``-minor of the generalized Laplacian, sign-normalized."""
    _check_j(t, j)
    L = generalized_laplacian(t)
    memo = {} if memo is None else memo
    V = t.sorted_vertices()
    out = set()
    for I in combinations(V, j):
        for J in combinations(V, j):
            p = minor(L, I, J, memo)
            if not p.is_zero():
                out.add(p.normalized_sign())
    return generator_set(out)


def same_ideal(A: Iterable[Polynomial], B: Iterable[Polynomial], *, structural: bool = False,
               max_pairs: int | None = 200_000) -> bool:
    """Ideal equality over the integers.

    With ``structural=True`` the caller guarantees ``A`` lies in the ideal of
    ``B`` and only ``B`` is reduced modulo a completed basis of ``A``.
    """
    A, B = list(A), list(B)
    GA = groebner_complete(A, max_pairs)
    if not all(ideal_contains(GA, b) for b in B):
        return False
    if structural:
        return True
    GB = groebner_complete(B, max_pairs)
    return all(ideal_contains(GB, a) for a in A)


# ---------------------------------------------------------------------------
# algebraic corank


class GammaMismatch(AssertionError):
    pass


def gamma(t: Forest, verify: bool = False, max_pairs: int | None = 200_000) -> int:
    """The largest ``j`` with trivial critical ideal, which is ``nu2(t)``.

    ``verify`` independently checks the boundary by Groebner completion: the
    ideal at ``nu2`` contains 1 and the one above it does not.
    """
    k = nu2(t)
    if verify:
        lo, hi = triviality_boundary(t, max_pairs)
        if not lo or hi:
            raise GammaMismatch(f"completion disagrees with nu2={k}: unit at nu2 {lo}, unit above {hi}")
    return k


def triviality_boundary(t: Forest, max_pairs: int | None = 200_000) -> tuple[bool, bool]:
    """(1 in completed I_nu2, 1 in completed I_{nu2+1}); the second is False past n."""
    k = nu2(t)
    lo = contains_one(groebner_complete(critical_ideal(t, k).generators, max_pairs)) if k >= 1 else True
    hi = False
    if k + 1 <= t.n:
        hi = contains_one(groebner_complete(critical_ideal(t, k + 1).generators, max_pairs))
    return lo, hi


# ---------------------------------------------------------------------------
# expressing a nonminimal d(M, X) through minimal ones


def expand_nonminimal(t: Forest, M: TwoMatching) -> list[tuple[Polynomial, TwoMatching]]:
    """Write ``d(M, X)`` as a polynomial combination of minimal ``d(N, X)``.

    Works on loop sets. A nonminimal loop set ``L`` loses one loop vertex ``w``
    through ``D(L) = x_w D(L - w) - sum D(L - {w, v})`` over looped neighbours
    ``v`` of ``w``, where every smaller set must still carry a 2-matching of
    size ``j``. Candidates ``w`` are tried from the highest label down.
    """
    j = len(M)
    minimal = set(minimal_loop_sets(t, j))
    if M.loops in minimal:
        raise MatchingError("already minimal")
    feasible: dict[frozenset, bool] = {}

    def ok(L: frozenset) -> bool:
        if L not in feasible:
            feasible[L] = len(L) <= j and nu2(t.delete_vertices(L)) >= j - len(L)
        return feasible[L]

    memo: dict[frozenset, dict[frozenset, Polynomial]] = {}

    def expand(L: frozenset) -> dict[frozenset, Polynomial]:
        if L in minimal:
            return {L: ONE}
        if L in memo:
            return memo[L]
        for w in sorted(L, reverse=True):
            N = L - {w}
            if not ok(N):
                continue
            nbrs = [v for v in t.neighbors(w) if v in N]
            if not all(ok(N - {v}) for v in nbrs):
                continue
            out: dict[frozenset, Polynomial] = {}
            xw = Polynomial.var(w)
            for K, c in expand(N).items():
                out[K] = out.get(K, ZERO) + xw * c
            for v in nbrs:
                for K, c in expand(N - {v}).items():
                    out[K] = out.get(K, ZERO) - c
            out = {K: c for K, c in out.items() if not c.is_zero()}
            memo[L] = out
            return out
        raise MatchingError(f"no elimination vertex for loop set {sorted(L)}")

    terms = expand(M.loops)
    rows = [(c, first_matching_with_loops(t, K, j)) for K, c in terms.items()]
    gens = {id(m): loop_set_determinant(t, m.loops) for _, m in rows}
    rows.sort(key=lambda cm: gens[id(cm[1])].sort_key(), reverse=True)
    return rows


def recombine(t: Forest, terms: list[tuple[Polynomial, TwoMatching]]) -> Polynomial:
    """Sum of coefficient times ``d(N, X)``; used to re-expand an expansion."""
    total = ZERO
    for c, N in terms:
        total = total + c * d_of_matching(t, N)
    return total


# ---------------------------------------------------------------------------
# identities


def _vertex_set(edges: Iterable[tuple[int, int]]) -> set[int]:
    return {v for e in edges for v in e}


def one_matchings(edges: Iterable[tuple[int, int]]) -> Iterator[list[tuple[int, int]]]:
    """Ordinary matchings (pairwise disjoint edge sets) inside ``edges``, empty one included."""
    es = sorted(edges)

    def rec(i, used, chosen):
        if i == len(es):
            yield list(chosen)
            return
        yield from rec(i + 1, used, chosen)
        u, v = es[i]
        if u not in used and v not in used:
            chosen.append(es[i])
            yield from rec(i + 1, used | {u, v}, chosen)
            chosen.pop()

    yield from rec(0, frozenset(), [])


def deletion_identity(t: Forest, S: Iterable[tuple[int, int]]) -> tuple[Polynomial, Polynomial]:
    """Both sides of ``d(T - S) = sum over matchings mu in S of d(T - V(mu))``."""
    S = [_edge(*e) for e in S]
    lhs = matching_determinant(t.delete_edges(S))
    rhs = ZERO
    for mu in one_matchings(S):
        rhs = rhs + matching_determinant(t.delete_vertices(_vertex_set(mu)))
    return lhs, rhs


def _incident_edges(g: Forest, verts: set[int]) -> list[tuple[int, int]]:
    return sorted(e for e in g.edges if e[0] in verts or e[1] in verts)


def path_product_identity(t: Forest, P: list[int]) -> tuple[Polynomial, Polynomial]:
    """Both sides of the expansion of ``x_P d(T - P)``.

    ``S`` is the set of edges touching ``P``. The right side is ``d(T)``, plus
    ``d(T - V(e))`` for each ``e`` in ``S``, plus one term per pair of disjoint
    ``e1, e2`` in ``S``: the variables strictly between them on the joining
    path times ``d`` of ``T`` minus that whole path.
    """
    VP = set(P)
    lhs = Polynomial.product_of_vars(VP) * matching_determinant(t.delete_vertices(VP))
    S = _incident_edges(t, VP)
    rhs = matching_determinant(t)
    for e in S:
        rhs = rhs + matching_determinant(t.delete_vertices(e))
    for e1, e2 in combinations(S, 2):
        if set(e1) & set(e2):
            continue
        hull = t.hull(set(e1) | set(e2))
        inner = hull - set(e1) - set(e2)
        rhs = rhs + Polynomial.product_of_vars(inner) * matching_determinant(t.delete_vertices(hull))
    return lhs, rhs


def path_subpath_identity(t: Forest, P: list[int], Q: list[int]) -> tuple[Polynomial, Polynomial]:
    """Both sides of the expansion of ``(x_P / x_Q) d(T - P)`` for a subpath ``Q`` of ``P``.

    ``P - Q`` splits into pieces ``P_l`` and ``P_r`` (either may be empty);
    ``L`` and ``R`` collect the edges of ``T - Q`` touching each piece.
    """
    VP, VQ = set(P), set(Q)
    if not VQ or not VQ <= VP:
        raise ValueError("Q must be a nonempty subpath of P")
    i0 = P.index(Q[0]) if P.index(Q[0]) <= P.index(Q[-1]) else P.index(Q[-1])
    left, right = set(P[:i0]), set(P[i0 + len(Q):])
    tq = t.delete_vertices(VQ)
    lhs = Polynomial.product_of_vars(VP - VQ) * matching_determinant(t.delete_vertices(VP))
    Ls = _incident_edges(tq, left)
    Rs = _incident_edges(tq, right)
    rhs = matching_determinant(tq)

    def term(es):
        ends = set(VQ)
        for e in es:
            ends |= set(e)
        hull = t.hull(ends)
        return Polynomial.product_of_vars(hull - ends) * matching_determinant(t.delete_vertices(hull))

    for e in Ls + Rs:
        rhs = rhs + term([e])
    for el in Ls:
        for er in Rs:
            rhs = rhs + term([el, er])
    return lhs, rhs


def all_paths(t: Forest) -> Iterator[list[int]]:
    """Every nonempty path, once, as a vertex list from its smaller end."""
    V = t.sorted_vertices()
    for u in V:
        for v in V:
            if u <= v:
                try:
                    yield t.path_between(u, v)
                except Exception:
                    continue


def _record(tree: Forest, j, check: str, ok: bool, witness=None) -> dict:
    rec = {"tree": [tree.n, [list(e) for e in tree.sorted_edges()]], "j": j, "check": check,
           "status": "pass" if ok else "fail"}
    if not ok and witness is not None:
        rec["witness"] = witness
    return rec


def verify_identities(t: Forest, max_subsets: int | None = None) -> list[dict]:
    """Check the four identities on every admissible instance; one record per identity."""
    out = []
    L = generalized_laplacian(t)
    memo: dict = {}
    dcache: dict[TwoMatching, Polynomial] = {}

    def d(M):
        if M not in dcache:
            ht = heads_tails(t, M)
            dcache[M] = minor(L, ht.sorted_tails(), ht.sorted_heads(), memo).normalized_sign()
        return dcache[M]

    # deletion identity over edge subsets
    edges = t.sorted_edges()
    count = bad = 0
    witness = None
    for k in range(len(edges) + 1):
        for S in combinations(edges, k):
            if max_subsets is not None and count >= max_subsets:
                break
            lhs, rhs = deletion_identity(t, S)
            count += 1
            if lhs != rhs:
                bad += 1
                witness = witness or {"S": [list(e) for e in S]}
    out.append(dict(_record(t, None, "deletion", bad == 0, witness), instances=count))

    # multiply by a variable: w uncovered by M
    count = bad = 0
    witness = None
    for j in range(0, t.n):
        for M in enumerate_two_matchings(t, True, j):
            deg = M.incidence()
            for w in t.sorted_vertices():
                if deg.get(w, 0):
                    continue
                N = TwoMatching(M.edges, M.loops | {w})
                rhs = d(N)
                for v in t.neighbors(w):
                    if v in M.loops:
                        Nv = TwoMatching(M.edges | {_edge(v, w)}, M.loops - {v})
                        rhs = rhs + d(Nv)
                count += 1
                if Polynomial.var(w) * d(M) != rhs:
                    bad += 1
                    witness = witness or {"matching": str(M), "w": w}
    out.append(dict(_record(t, None, "multiply_by_variable", bad == 0, witness), instances=count))

    # path product
    count = bad = 0
    witness = None
    paths = list(all_paths(t))
    for P in paths:
        lhs, rhs = path_product_identity(t, P)
        count += 1
        if lhs != rhs:
            bad += 1
            witness = witness or {"P": P}
    out.append(dict(_record(t, None, "path_product", bad == 0, witness), instances=count))

    # path over a proper subpath
    count = bad = 0
    witness = None
    for P in paths:
        for a in range(len(P)):
            for b in range(a, len(P)):
                Q = P[a : b + 1]
                if len(Q) == len(P):
                    continue
                lhs, rhs = path_subpath_identity(t, P, Q)
                count += 1
                if lhs != rhs:
                    bad += 1
                    witness = witness or {"P": P, "Q": Q}
    out.append(dict(_record(t, None, "path_subpath", bad == 0, witness), instances=count))
    return out


# ---------------------------------------------------------------------------
# Groebner statements


def groebner_check_paths(t: Forest) -> bool:
    """The leaf-pair generators form a reduced Groebner basis of the size ``n-1`` ideal."""
    B = leaf_pair_basis(t)
    if len(B) != comb(len(t.leaves()), 2):
        return False
    return is_groebner_basis(B) and is_reduced_groebner_basis(B)


def conjecture_scan(t: Forest, js: Iterable[int] | None = None) -> list[dict]:
    """Run the Buchberger check on each requested generator set; failures are data."""
    out = []
    for j in js if js is not None else range(1, t.n + 1):
        B = list(critical_ideal(t, j).generators)
        gb = is_groebner_basis(B)
        red = gb and is_reduced_groebner_basis(B)
        rec = _record(t, j, "conjecture", gb and red)
        rec["groebner"] = gb
        rec["reduced"] = red
        rec["size"] = len(B)
        if not (gb and red):
            rec["witness"] = [format_poly(p) for p in B]
        out.append(rec)
    return out


# ---------------------------------------------------------------------------
# stars and depth-two trees


def star_ideal(m: int, j: int) -> list[Polynomial]:
    """Closed-form generators for the star with leaves ``1..m`` and root ``m+1``."""
    if m < 3:
        raise ValueError("star_ideal needs m >= 3")
    if not 3 <= j <= m + 1:
        raise ValueError(f"j must lie in 3..{m + 1}")
    leaves = range(1, m + 1)
    if j == m + 1:
        r = m + 1
        p = Polynomial.product_of_vars([r, *leaves])
        for i in leaves:
            p = p - Polynomial.product_of_vars(l for l in leaves if l != i)
        return [p]
    return generator_set(Polynomial.product_of_vars(c) for c in combinations(leaves, j - 2))


@dataclass(frozen=True)
class Depth2Shape:
    root: int
    branches: dict  # child -> tuple of its leaves


def depth2_shape(t: Forest, root: int = 1) -> Depth2Shape:
    branches = {}
    for c in t.neighbors(root):
        leaves = tuple(w for w in t.neighbors(c) if w != root)
        if any(t.degree(w) != 1 for w in leaves):
            raise ValueError("not a depth-two tree from this root")
        branches[c] = leaves
    return Depth2Shape(root, branches)


def depth2_pattern(t: Forest, M: TwoMatching, root: int = 1) -> int | None:
    """Which of the five minimal shapes ``M`` has on a depth-two tree, or ``None``.

    Each branch must be one of: crossing (edge to the root plus one leaf edge),
    inner (two leaf edges), or fully looped (centre and all leaves looped);
    leftover loops may sit only on branch leaves. The third shape also admits
    a root loop.
    """
    shape = depth2_shape(t, root)
    r = root
    rr = r in M.loops
    to_root = []
    kinds = {}
    for c, leaves in shape.branches.items():
        leaf_edges = [w for w in leaves if _edge(c, w) in M.edges]
        up = _edge(r, c) in M.edges
        if up and len(leaf_edges) == 1 and c not in M.loops:
            kinds[c] = "cross"
            to_root.append(c)
        elif not up and len(leaf_edges) == 2 and c not in M.loops:
            kinds[c] = "inner"
        elif not up and not leaf_edges and c in M.loops and set(leaves) <= M.loops:
            kinds[c] = "full"
        else:
            return None
    extra = M.loops - {r} - set(shape.branches)
    for c, leaves in shape.branches.items():
        if kinds[c] != "full" and not extra.isdisjoint({w for w in leaves if _edge(c, w) in M.edges}):
            return None
    full = [c for c in kinds if kinds[c] == "full"]
    k = len(to_root)
    if k == 2 and not rr:
        return 4 if full else 1
    if k == 1 and not rr and not full:
        return 2
    if k == 0 and not full:
        return 3
    if k == 0 and rr and full:
        return 5
    return None


def reduce_all_to_zero(G: list[Polynomial], polys: Iterable[Polynomial]) -> bool:
    return all(strong_reduce(p, G)[1] for p in polys)
