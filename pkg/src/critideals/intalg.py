"""Integer matrices, Smith normal form and critical groups.

Also holds the regular-tree formulas and the wired-tree experiment that
compare symbolic results with integer ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .matching import nu2
from .polyring import Polynomial
from .treegraph import Forest, GraphError, MultiGraph, levine_wired, regular_branch, regular_tree, regular_tree_size, wired_regular

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def determinant(A: Matrix) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SmithNormalForm:
    factors: tuple
    U: tuple | None = None
    V: tuple | None = None

    @property
    def rank(self) -> int:
        return sum(1 for f in self.factors if f)

    def diagonal(self, rows: int, cols: int) -> Matrix:
        D = [[0] * cols for _ in range(rows)]
        for i, f in enumerate(self.factors):
            D[i][i] = f
        return D


def smith_normal_form(M: Sequence[Sequence[int]], want_transforms: bool = False) -> SmithNormalForm:
    """Invariant factors of ``M``, optionally with unimodular ``U``, ``V`` such that ``U M V`` is diagonal.

    Pivot on the smallest nonzero entry of the remaining block, clear its row
    and column by division with remainder, and before moving on fold in any
    row whose entries the pivot does not divide.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(r) != n for r in A):
        raise ValueError("ragged matrix")
    U = identity(m) if want_transforms else None
    V = identity(n) if want_transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for r in A:
            r[dst] += q * r[src]
        if V is not None:
            for r in V:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                nz = [(abs(A[i][t]), i, "r") for i in range(t, m) if A[i][t]]
                nz += [(abs(A[t][j]), j, "c") for j in range(t, n) if A[t][j]]
                _, k, kind = min(nz)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
        t += 1
    factors = tuple(A[i][i] for i in range(min(m, n)))
    if want_transforms:
        return SmithNormalForm(factors, tuple(map(tuple, U)), tuple(map(tuple, V)))
    return SmithNormalForm(factors)


def minor_gcd(M: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all ``k x k`` minors; the brute-force oracle for invariant factors."""
    m, n = len(M), len(M[0])
    g = 0
    for I in combinations(range(m), k):
        for J in combinations(range(n), k):
            g = math.gcd(g, determinant([[M[i][j] for j in J] for i in I]))
    return g


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class AbelianGroup:
    torsion: tuple
    free_rank: int = 0

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "AbelianGroup":
        fs = list(factors)
        return cls(tuple(f for f in fs if f > 1), sum(1 for f in fs if f == 0))

    @property
    def rank(self) -> int:
        """Number of nontrivial invariant factors."""
        return len(self.torsion)

    @property
    def order(self) -> int:
        return math.prod(self.torsion)

    def torsion_part(self) -> "AbelianGroup":
        return AbelianGroup(self.torsion, 0)

    def __str__(self) -> str:
        parts = [f"Z_{a}" for a in self.torsion]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}


@dataclass(frozen=True)
class ArithmeticalGraph:
    graph: MultiGraph
    d: tuple
    r: tuple

    def __post_init__(self):
        if not validate_arithmetical(self.graph, self.d, self.r):
            raise ValueError("(Diag(d) - A) r is not zero")


def validate_arithmetical(g: MultiGraph, d: Sequence[int], r: Sequence[int]) -> bool:
    if len(d) != g.n or len(r) != g.n:
        raise ValueError(f"vectors must have length {g.n}")
    A = g.adjacency()
    return all(d[i] * r[i] - sum(A[i][k] * r[k] for k in range(g.n)) == 0 for i in range(g.n))


def laplacian_matrix(g: MultiGraph, d: Sequence[int] | None = None) -> Matrix:
    """``Diag(d) - A``; ``d`` defaults to the degree vector."""
    d = g.degrees() if d is None else list(d)
    A = g.adjacency()
    return [[(d[i] if i == k else 0) - A[i][k] for k in range(g.n)] for i in range(g.n)]


def _as_multigraph(g) -> MultiGraph:
    if isinstance(g, MultiGraph):
        return g
    if isinstance(g, Forest):
        return MultiGraph.from_tree(g)
    raise TypeError(f"not a graph: {type(g).__name__}")


def critical_group(g) -> AbelianGroup:
    """Invariant factors of ``Diag(d) - A``: those above 1 and the count of zeros."""
    if isinstance(g, ArithmeticalGraph):
        G, d = g.graph, g.d
    else:
        G, d = _as_multigraph(g), None
    if not G.is_connected():
        raise GraphError("critical group needs a connected graph")
    return AbelianGroup.from_factors(smith_normal_form(laplacian_matrix(G, d)).factors)


def c5_arithmetical(m: int) -> ArithmeticalGraph:
    from .treegraph import c5

    t = c5(m)
    n = t.n
    return ArithmeticalGraph(MultiGraph.from_tree(t), (2,) * n, (1, 1, 1, 1) + (2,) * (n - 4))


def spanning_tree_count(g) -> int:
    G = _as_multigraph(g)
    if not G.is_connected():
        raise GraphError("spanning trees need a connected graph")
    L = laplacian_matrix(G)
    return determinant([row[1:] for row in L[1:]])


# ---------------------------------------------------------------------------
# regular trees


def nu2_closed_forms(d: int, h: int) -> tuple[int | None, int | None]:
    """Closed-form 2-matching numbers of the branch tree and of the full regular tree.

    The branch value needs ``h >= 2`` and the full value ``h >= 3``; each is
    ``None`` outside its range.
    """
    if d < 3:
        raise ValueError("d must be at least 3")
    if h < 2:
        raise ValueError("h must be at least 2")
    q = d - 1
    if h % 2 == 0:
        branch = 2 * (q ** (h + 1) - q) // (q * q - 1)
    else:
        branch = 2 * (q ** (h + 1) - 1) // (q * q - 1)
    full = 2 * (q**h - 1) // (d - 2) if h >= 3 else None
    return branch, full


def nu2_closed_form_check(d: int, h: int) -> dict:
    branch, full = nu2_closed_forms(d, h)
    out = {"d": d, "h": h, "branch_formula": branch, "branch_dp": nu2(regular_branch(d, h))}
    if full is not None:
        out["full_formula"] = full
        out["full_dp"] = nu2(regular_tree(d, h))
    return out


def wired_tree_report(d: int, h: int, levine: bool = False, max_vertices: int = 400) -> dict:
    """Measured critical group of a wired regular tree next to the predicted ranks."""
    if d < 4 or h < 2:
        raise ValueError("wired trees need d >= 4 and h >= 2")
    base = regular_branch(d, h - 1) if levine else regular_tree(d, h - 1)
    if base.n + 1 > max_vertices:
        raise ValueError(f"wired tree has {base.n + 1} vertices, above the cap {max_vertices}")
    g = levine_wired(d, h) if levine else wired_regular(d, h)
    group = critical_group(g)
    first = group.torsion[0] if group.torsion else None
    return {
        "d": d,
        "h": h,
        "kind": "levine" if levine else "wired",
        "vertices": g.n,
        "rank": group.rank,
        "first_nontrivial_factor": first,
        "factors": list(group.torsion),
        "predicted_rank_n_minus_nu2": base.n - nu2(base),
        "claimed_rank_d_minus_1_pow_h": (d - 1) ** h,
    }


# ---------------------------------------------------------------------------
# evaluation


def evaluate_ideal(gens: Iterable[Polynomial], assignment: Mapping[int, int] | Sequence[int]) -> int:
    """gcd of the generators evaluated at an integer point."""
    g = 0
    for p in gens:
        g = math.gcd(g, p.evaluate(assignment))
    return g


def invariant_factor_products(M: Sequence[Sequence[int]]) -> list[int]:
    """``[f1, f1*f2, ...]`` for the Smith form of ``M``."""
    out, acc = [], 1
    for f in smith_normal_form(M).factors:
        acc *= f
        out.append(acc)
    return out

