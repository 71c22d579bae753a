"""Trees, forests, multigraphs, the named families, and labeled-tree generation."""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

MAX_EXHAUSTIVE_N = 8


class TreeParseError(ValueError):
    pass


class GraphError(ValueError):
    pass


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Forest:
    """Simple acyclic graph on an arbitrary set of integer vertex labels.

    Deleting vertices or edges from a :class:`Tree` lands here; labels of the
    surviving vertices are kept.
    """

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge {u}-{v} references a missing vertex")
            adj[u].append(v)
            adj[v].append(u)
        for v in adj:
            adj[v].sort()
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "Forest":
        return cls(frozenset(vertices), frozenset(_edge(u, v) for u, v in edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> list[int]:
        if v not in self._adj:
            raise GraphError(f"no vertex {v}")
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def leaves(self) -> set[int]:
        return {v for v, nb in self._adj.items() if len(nb) == 1}

    def components(self) -> list[frozenset[int]]:
        """Vertex sets of the connected components, ordered by smallest label."""
        seen: set[int] = set()
        out = []
        for s in self.sorted_vertices():
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def component_index(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components()) for v in comp}

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def path_between(self, u: int, v: int) -> list[int]:
        """Vertices of the unique path from ``u`` to ``v``."""
        if u not in self._adj or v not in self._adj:
            raise GraphError(f"no vertex {u if u not in self._adj else v}")
        parent = {u: None}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            if a == v:
                break
            for b in self._adj[a]:
                if b not in parent:
                    parent[b] = a
                    queue.append(b)
        if v not in parent:
            raise GraphError(f"{u} and {v} lie in different components")
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        return path[::-1]

    def hull(self, vertices: Iterable[int]) -> set[int]:
        """Smallest vertex set spanning a connected subtree containing ``vertices``."""
        vs = list(vertices)
        if not vs:
            return set()
        out = {vs[0]}
        for w in vs[1:]:
            out.update(self.path_between(vs[0], w))
        return out

    def delete_vertices(self, removed: Iterable[int]) -> "Forest":
        removed = set(removed)
        missing = removed - self.vertices
        if missing:
            raise GraphError(f"no vertex {min(missing)}")
        keep = self.vertices - removed
        return Forest(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def delete_vertex(self, v: int) -> "Forest":
        return self.delete_vertices([v])

    def delete_edges(self, removed: Iterable[tuple[int, int]]) -> "Forest":
        removed = {_edge(u, v) for u, v in removed}
        missing = removed - self.edges
        if missing:
            u, v = min(missing)
            raise GraphError(f"no edge {u}-{v}")
        return Forest(self.vertices, self.edges - removed)

    def delete_edge(self, u: int, v: int) -> "Forest":
        return self.delete_edges([(u, v)])

    def induced_subgraph(self, vertices: Iterable[int]) -> "Forest":
        keep = set(vertices)
        missing = keep - self.vertices
        if missing:
            raise GraphError(f"no vertex {min(missing)}")
        return Forest(frozenset(keep), frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def as_forest(self) -> "Forest":
        return Forest(self.vertices, self.edges)


class Tree(Forest):
    """Connected forest on vertices ``1..n``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        edges = frozenset(_edge(u, v) for u, v in edges)
        super().__init__(frozenset(range(1, n + 1)), edges)
        if len(edges) != n - 1:
            raise GraphError(f"a tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        if n and not self.is_connected():
            raise GraphError("tree is disconnected")

    def __reduce__(self):
        return (Tree, (self.n, tuple(self.sorted_edges())))

    def __repr__(self) -> str:
        return f"Tree({self.n}, {self.sorted_edges()})"


@dataclass(frozen=True)
class MultiGraph:
    """Loopless multigraph on ``1..n`` with positive edge multiplicities."""

    n: int
    mult: dict

    def __post_init__(self):
        clean = {}
        for (u, v), m in self.mult.items():
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {u}-{v} out of range")
            if m <= 0:
                raise GraphError("multiplicities must be positive")
            e = _edge(u, v)
            clean[e] = clean.get(e, 0) + m
        object.__setattr__(self, "mult", clean)

    @classmethod
    def from_tree(cls, tree: Forest) -> "MultiGraph":
        if tree.vertices != frozenset(range(1, tree.n + 1)):
            raise GraphError("multigraph vertices must be 1..n")
        return cls(tree.n, {e: 1 for e in tree.edges})

    def multiplicity(self, u: int, v: int) -> int:
        return self.mult.get(_edge(u, v), 0)

    def degree(self, v: int) -> int:
        return sum(m for e, m in self.mult.items() if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v), m in self.mult.items():
            deg[u - 1] += m
            deg[v - 1] += m
        return deg

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n for _ in range(self.n)]
        for (u, v), m in self.mult.items():
            A[u - 1][v - 1] = m
            A[v - 1][u - 1] = m
        return A

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.mult:
            adj[u].add(v)
            adj[v].add(u)
        seen = {1}
        stack = [1]
        while stack:
            u = stack.pop()
            for w in adj[u] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return all(m == 1 for m in self.mult.values()) and len(self.mult) == self.n - 1 and self.is_connected()

    def to_tree(self) -> Tree:
        if not self.is_tree():
            raise GraphError("graph is not a simple tree")
        return Tree(self.n, self.mult)


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str, multigraph: bool = False) -> Tree | MultiGraph:
    """Read ``n`` followed by one ``u v [mult]`` line per edge.

    Multiplicities are only accepted with ``multigraph=True``, which returns a
    :class:`MultiGraph`; otherwise the result is a validated :class:`Tree`.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TreeParseError("empty input")
    try:
        n = int(lines[0])
    except ValueError:
        raise TreeParseError(f"first line must be the vertex count, got {lines[0]!r}") from None
    if n < 1:
        raise TreeParseError("vertex count must be positive")
    mult: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise TreeParseError(f"bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            m = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise TreeParseError(f"bad edge line {ln!r}") from None
        if len(parts) == 3 and not multigraph:
            raise TreeParseError("edge multiplicities are only allowed for multigraphs")
        if not (1 <= u <= n and 1 <= v <= n):
            raise TreeParseError(f"label out of range in edge {u}-{v}")
        if u == v:
            raise TreeParseError(f"self-loop at {u}")
        if m < 1:
            raise TreeParseError(f"multiplicity must be positive in edge {u}-{v}")
        e = _edge(u, v)
        if e in mult:
            raise TreeParseError(f"duplicate edge {e[0]}-{e[1]}")
        mult[e] = m
    if multigraph:
        return MultiGraph(n, mult)
    if len(mult) > n - 1:
        raise TreeParseError("cycle: too many edges for a tree")
    _check_acyclic(n, mult)
    if len(mult) < n - 1:
        raise TreeParseError("disconnected: too few edges for a tree")
    return Tree(n, mult)


def _check_acyclic(n: int, edges) -> None:
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeParseError(f"cycle through edge {u}-{v}")
        parent[ru] = rv


def serialize_graph(g: Tree | MultiGraph) -> str:
    if isinstance(g, MultiGraph):
        lines = [str(g.n)]
        for (u, v), m in sorted(g.mult.items()):
            lines.append(f"{u} {v}" if m == 1 else f"{u} {v} {m}")
        return "\n".join(lines) + "\n"
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]) + "\n"


parse_tree = parse_graph
serialize_tree = serialize_graph


# ---------------------------------------------------------------------------
# families


def path(n: int) -> Tree:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Tree(n, [(i, i + 1) for i in range(1, n)])


def star(m: int) -> Tree:
    """Leaves ``1..m`` and root ``m+1``."""
    if m < 2:
        raise GraphError("star needs m >= 2")
    return Tree(m + 1, [(i, m + 1) for i in range(1, m + 1)])


def depth2(*leaf_counts: int) -> Tree:
    """Root 1, its children ``2..s+1``, then each child's leaves in order."""
    if not leaf_counts or any(m < 1 for m in leaf_counts):
        raise GraphError("depth2 needs at least one branch and m_i >= 1")
    s = len(leaf_counts)
    edges = [(1, 2 + i) for i in range(s)]
    nxt = s + 2
    for i, m in enumerate(leaf_counts):
        for _ in range(m):
            edges.append((2 + i, nxt))
            nxt += 1
    return Tree(nxt - 1, edges)


def J(n1: int, n2: int, n3: int) -> Tree:
    """Three paths of ``n1, n2, n3`` vertices sharing the root ``n1``.

    Left path ``1..n1-1`` ends at the root, the right path continues
    ``n1+1..n1+n2-1`` and the lower path is ``n1+n2..n1+n2+n3-2``.
    """
    if min(n1, n2, n3) < 2:
        raise GraphError("J needs n_i >= 2")
    r = n1
    edges = [(i, i + 1) for i in range(1, n1)]
    prev = r
    for v in range(n1 + 1, n1 + n2):
        edges.append((prev, v))
        prev = v
    prev = r
    for v in range(n1 + n2, n1 + n2 + n3 - 1):
        edges.append((prev, v))
        prev = v
    return Tree(n1 + n2 + n3 - 2, edges)


def _rooted_regular(root_children: int, d: int, h: int) -> Tree:
    # breadth-first labelling from the root
    if h < 0:
        raise GraphError("depth must be nonnegative")
    edges = []
    level = [1]
    nxt = 2
    for depth in range(h):
        new = []
        for v in level:
            k = root_children if depth == 0 else d - 1
            for _ in range(k):
                edges.append((v, nxt))
                new.append(nxt)
                nxt += 1
        level = new
    return Tree(nxt - 1, edges)


def regular_tree(d: int, h: int) -> Tree:
    """The d-regular tree of depth ``h``: root of degree ``d``, inner vertices of degree ``d``."""
    if d < 3 or h < 1:
        raise GraphError("regular_tree needs d >= 3 and h >= 1")
    return _rooted_regular(d, d, h)


def regular_branch(d: int, h: int) -> Tree:
    """``regular_tree(d, h)`` with one principal branch removed (root degree ``d-1``)."""
    if d < 3 or h < 1:
        raise GraphError("regular_branch needs d >= 3 and h >= 1")
    return _rooted_regular(d - 1, d, h)


def regular_tree_size(d: int, h: int) -> int:
    return 1 + d * ((d - 1) ** h - 1) // (d - 2)


def c5(m: int) -> Tree:
    """Two cherries joined by a path of ``m+1`` vertices.

    Leaves 1, 2 hang from centre 5 and leaves 3, 4 from centre 6. The
    ``m-1`` inner path vertices are numbered alternately from both ends:
    ``5 - 7 - 9 - ... - 10 - 8 - 6``.
    """
    if m < 1:
        raise GraphError("c5 needs m >= 1")
    inner = m - 1
    left = [7 + 2 * i for i in range((inner + 1) // 2)]
    right = [8 + 2 * i for i in range(inner // 2)]
    chain = [5] + left + right[::-1] + [6]
    edges = [(1, 5), (2, 5), (3, 6), (4, 6)]
    edges += list(zip(chain, chain[1:]))
    return Tree(m + 5, edges)


def _wire(base: Tree, d: int) -> tuple[int, dict]:
    v = base.n + 1
    mult = {e: 1 for e in base.edges}
    for leaf in base.leaves() if base.n > 1 else {1}:
        mult[_edge(leaf, v)] = d - 1
    return v, mult


def wired_regular(d: int, h: int) -> MultiGraph:
    """``regular_tree(d, h)`` with its leaves collapsed to one new vertex ``n+1``.

    Built as ``regular_tree(d, h-1)`` plus ``d-1`` parallel edges from each of
    its leaves to the new vertex.
    """
    if d < 3 or h < 2:
        raise GraphError("wired_regular needs d >= 3 and h >= 2")
    base = regular_tree(d, h - 1)
    v, mult = _wire(base, d)
    return MultiGraph(v, mult)


def levine_wired(d: int, h: int) -> MultiGraph:
    """``regular_branch(d, h)`` with leaves collapsed to a new vertex joined to the root."""
    if d < 3 or h < 2:
        raise GraphError("levine_wired needs d >= 3 and h >= 2")
    base = regular_branch(d, h - 1)
    v, mult = _wire(base, d)
    mult[_edge(1, v)] = mult.get(_edge(1, v), 0) + 1
    return MultiGraph(v, mult)


FAMILY_KINDS = ("path", "star", "depth2", "J", "regular", "branch", "c5", "wired", "levine")


def family(kind: str, *params: int) -> Tree | MultiGraph:
    builders = {
        "path": path,
        "star": star,
        "depth2": depth2,
        "J": J,
        "regular": regular_tree,
        "branch": regular_branch,
        "c5": c5,
        "wired": wired_regular,
        "levine": levine_wired,
    }
    key = kind if kind in builders else kind.lower()
    if key == "j":
        key = "J"
    if key not in builders:
        raise GraphError(f"unknown family {kind!r}")
    try:
        return builders[key](*params)
    except TypeError:
        raise GraphError(f"wrong number of parameters for {kind!r}") from None


def parse_family(spec: str) -> Tree | MultiGraph:
    """``kind:p1,p2,...`` as in ``J:5,4,3`` or ``c5:7``."""
    kind, _, rest = spec.partition(":")
    try:
        params = [int(p) for p in rest.split(",") if p.strip()]
    except ValueError:
        raise GraphError(f"bad family parameters in {spec!r}") from None
    return family(kind.strip(), *params)


# ---------------------------------------------------------------------------
# labeled tree generation


def prufer_decode(seq: Iterable[int], n: int) -> Tree:
    seq = list(seq)
    if len(seq) != n - 2:
        raise ValueError("Pruefer sequence must have length n-2")
    degree = [1] * (n + 1)
    for a in seq:
        degree[a] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        degree[a] -= 1
        if degree[a] == 1:
            heapq.heappush(leaves, a)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Tree(n, edges)


def prufer_encode(tree: Tree) -> list[int]:
    n = tree.n
    degree = {v: tree.degree(v) for v in tree.vertices}
    removed: set[int] = set()
    leaves = [v for v in tree.vertices if degree[v] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        removed.add(leaf)
        (nb,) = [w for w in tree.neighbors(leaf) if w not in removed]
        seq.append(nb)
        degree[nb] -= 1
        if degree[nb] == 1:
            heapq.heappush(leaves, nb)
    return seq


def enumerate_labeled_trees(n: int) -> Iterator[Tree]:
    """All ``n**(n-2)`` labeled trees, in lexicographic Pruefer order."""
    if n < 2:
        raise ValueError("need n >= 2")
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}")
    if n == 2:
        yield Tree(2, [(1, 2)])
        return
    for seq in product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(seq, n)


def random_tree(n: int, seed: int) -> Tree:
    """Uniform labeled tree on ``n`` vertices, deterministic in ``seed``."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = random.Random(seed)
    if n == 2:
        return Tree(2, [(1, 2)])
    return prufer_decode([rng.randint(1, n) for _ in range(n - 2)], n)


def is_path_graph(tree: Forest) -> bool:
    return tree.is_connected() and all(tree.degree(v) <= 2 for v in tree.vertices)


def enumerate_connected_graphs(n: int, min_edges: int = 0) -> Iterator[MultiGraph]:
    """Connected simple labeled graphs on ``1..n`` with at least ``min_edges`` edges."""
    if n > 6:
        raise ValueError("graph enumeration is limited to n <= 6")
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        if mask.bit_count() < max(min_edges, n - 1):
            continue
        g = MultiGraph(n, {pairs[i]: 1 for i in range(len(pairs)) if mask >> i & 1})
        if g.is_connected():
            yield g
