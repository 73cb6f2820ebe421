"""Undirected simple graphs and the structural machinery the broadcast game runs on.

A :class:`Graph` is an immutable value: a vertex count plus a frozenset of
``(u, v)`` pairs with ``u < v``.  Vertices are 0-indexed integers.  Everything
in this module is a pure function of its inputs, so graphs can be shared
freely between threads and memoised by identity of their edge sets.

Besides the representation this module provides:

* the standard graph families used throughout (paths, cycles, cliques, grids,
  generalized theta graphs, complete binary trees),
* structural queries (connectivity, articulation vertices, bridges, distance
  matrices, clique number, circumference),
* enumeration of spanning trees and of connected spanning subgraphs, and
* the strategy-preserving constructions: vertex sums, pendant-path
  attachment, and bridge contraction.

The exhaustive queries (``clique_number``, ``circumference``,
``is_hamiltonian``) are exponential and guarded by a size cap; they exist for
desk-scale verification, not for large graphs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

__all__ = [
    "Graph",
    "GraphError",
    "FamilySpec",
    "ContractionMap",
    "generate",
    "parse_edge_list",
    "format_edge_list",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "grid_graph",
    "theta_graph",
    "binary_tree_graph",
    "is_connected",
    "connected_components",
    "cut_vertices",
    "bridges",
    "all_pairs_distances",
    "diameter",
    "spanning_trees",
    "connected_spanning_subgraphs",
    "clique_number",
    "circumference",
    "is_hamiltonian",
    "vertex_sum",
    "attach_paths",
    "contract_bridges",
]

#: Vertex-count cap for the exponential queries below.
EXHAUSTIVE_CAP = 12

#: Edge-count cap for full subgraph enumeration.
SUBGRAPH_EDGE_CAP = 16


class GraphError(ValueError):
    """Raised when a graph operation's preconditions are violated."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """An immutable undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "labels", "_adj")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Optional[Mapping[int, str]] = None,
    ):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        normed = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            normed.add(_norm_edge(u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(normed))
        object.__setattr__(self, "labels", dict(labels) if labels else None)
        object.__setattr__(self, "_adj", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Graph is immutable")

    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour tuples per vertex, each sorted ascending."""
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            object.__setattr__(
                self, "_adj", tuple(tuple(sorted(a)) for a in adj)
            )
        return self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency()[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def label(self, v: int) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class FamilySpec:
    """A named graph family with parameters, e.g. ``FamilySpec('theta', (3, 3, 3))``.

    Families: ``path``, ``cycle``, ``clique``, ``grid``, ``theta``, ``btree``,
    ``file`` (parameter is the edge-list path).
    """

    family: str
    params: tuple = ()

    def __str__(self) -> str:
        if self.family == "grid":
            return f"grid:{self.params[0]}x{self.params[1]}"
        if self.family == "file":
            return f"file:{self.params[0]}"
        return f"{self.family}:{','.join(str(p) for p in self.params)}"


def path_graph(n: int) -> Graph:
    """P_n: n vertices in a line."""
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    """C_n: requires n >= 3 to stay simple."""
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("clique needs n >= 1")
    return Graph(n, itertools.combinations(range(n), 2))


def grid_graph(rows: int, cols: int) -> Graph:
    """rows x cols grid; vertex id = row * cols + col."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs rows, cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def theta_graph(lengths: Sequence[int]) -> Graph:
    """Two hub vertices joined by internally disjoint paths of d_i edges each.

    Hub A is vertex 0, hub B is vertex 1; internal vertices are numbered
    path by path.  At most one d_i may equal 1, otherwise a parallel hub-hub
    edge would arise.
    """
    lengths = tuple(lengths)
    if not lengths:
        raise GraphError("theta needs at least one path")
    if any(d < 1 for d in lengths):
        raise GraphError("theta path lengths must be >= 1")
    if sum(1 for d in lengths if d == 1) > 1:
        raise GraphError("theta admits at most one length-1 path (parallel edge)")
    edges = []
    nxt = 2
    for d in lengths:
        prev = 0
        for _ in range(d - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph(nxt, edges)


def binary_tree_graph(depth: int) -> Graph:
    """Complete binary tree of the given depth, heap-ordered vertex ids."""
    if depth < 1:
        raise GraphError("binary tree needs depth >= 1")
    n = 2 ** (depth + 1) - 1
    edges = [(v, (v - 1) // 2) for v in range(1, n)]
    return Graph(n, edges)


def generate(spec: FamilySpec) -> Graph:
    """Build the graph named by ``spec``."""
    fam, p = spec.family, spec.params
    if fam == "path":
        return path_graph(p[0])
    if fam == "cycle":
        return cycle_graph(p[0])
    if fam == "clique":
        return complete_graph(p[0])
    if fam == "grid":
        return grid_graph(p[0], p[1])
    if fam == "theta":
        return theta_graph(p)
    if fam == "btree":
        return binary_tree_graph(p[0])
    if fam == "file":
        with open(p[0], "r", encoding="utf-8") as fh:
            return parse_edge_list(fh.read())
    raise GraphError(f"unknown family {fam!r}")


# ---------------------------------------------------------------------------
# Edge-list text format


def parse_edge_list(text: str) -> Graph:
    """Parse lines of ``u v`` into a graph; ``#`` starts a comment.

    The vertex count is one plus the largest index seen; duplicate edges are
    merged.  Self-loops and malformed lines raise :class:`GraphError`.
    """
    edges = []
    hi = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer vertex in {raw!r}") from exc
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex in {raw!r}")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {u}")
        edges.append((u, v))
        hi = max(hi, u, v)
    return Graph(hi + 1, edges)


def format_edge_list(g: Graph) -> str:
    """Inverse of :func:`parse_edge_list` (isolated vertices are not representable)."""
    return "\n".join(f"{u} {v}" for u, v in g.edge_list()) + "\n"


# ---------------------------------------------------------------------------
# Connectivity and distances


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    adj = g.adjacency()
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    """True iff the graph has at most one component (so K_0 and K_1 count)."""
    if g.n <= 1:
        return True
    return len(connected_components(g)) == 1


def _require_connected(g: Graph, what: str) -> None:
    if not is_connected(g):
        raise GraphError(f"{what} requires a connected graph")


def all_pairs_distances(g: Graph) -> tuple[tuple[int, ...], ...]:
    """Hop-count distance matrix via BFS from every vertex."""
    _require_connected(g, "all_pairs_distances")
    adj = g.adjacency()
    rows = []
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        rows.append(tuple(dist))
    return tuple(rows)


def diameter(g: Graph) -> int:
    return max(max(row) for row in all_pairs_distances(g))


# ---------------------------------------------------------------------------
# Articulation vertices and bridges (Hopcroft-Tarjan lowpoints)


def cut_vertices(g: Graph) -> frozenset[int]:
    """The articulation vertices of a connected graph."""
    _require_connected(g, "cut_vertices")
    adj = g.adjacency()
    disc = [-1] * g.n
    low = [0] * g.n
    result: set[int] = set()
    timer = itertools.count()
    # Iterative DFS so long pendant paths cannot hit the recursion limit.
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        root_children = 0
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = next(timer)
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    parent = -2  # skip the tree edge to the parent exactly once
                    stack[-1] = (v, parent, it)
                    continue
                if disc[u] < 0:
                    disc[u] = low[u] = next(timer)
                    stack.append((u, v, iter(adj[u])))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                low[v] = min(low[v], disc[u])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if pv != root and low[v] >= disc[pv]:
                        result.add(pv)
        if root_children >= 2:
            result.add(root)
    return frozenset(result)


def bridges(g: Graph) -> frozenset[tuple[int, int]]:
    """The cut edges of a connected graph."""
    _require_connected(g, "bridges")
    adj = g.adjacency()
    disc = [-1] * g.n
    low = [0] * g.n
    result: set[tuple[int, int]] = set()
    timer = itertools.count()
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = next(timer)
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    parent = -2
                    stack[-1] = (v, parent, it)
                    continue
                if disc[u] < 0:
                    disc[u] = low[u] = next(timer)
                    stack.append((u, v, iter(adj[u])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[u])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if low[v] > disc[pv]:
                        result.add(_norm_edge(pv, v))
    return frozenset(result)


# ---------------------------------------------------------------------------
# Spanning structure enumeration


def spanning_trees(g: Graph) -> Iterator[frozenset[tuple[int, int]]]:
    """Yield every spanning tree of a connected graph exactly once.

    Trees are emitted as frozensets of edges, in the deterministic order
    given by include/exclude branching over the sorted edge list (include
    first).  Both branches are pruned: inclusion by cycle detection,
    exclusion by connectivity of what remains.
    """
    _require_connected(g, "spanning_trees")
    n = g.n
    if n <= 1:
        yield frozenset()
        return
    edges = sorted(g.edges)
    m = len(edges)

    def connected_with(avail_idx: list[int], chosen: list[tuple[int, int]]) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for u, v in chosen:
            adj[u].append(v)
            adj[v].append(u)
        for i in avail_idx:
            u, v = edges[i]
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == n

    def find(parent: dict[int, int], x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def rec(idx: int, parent: dict[int, int], chosen: list[tuple[int, int]]):
        if len(chosen) == n - 1:
            yield frozenset(chosen)
            return
        if idx == m or m - idx < (n - 1) - len(chosen):
            return
        u, v = edges[idx]
        ru, rv = find(parent, u), find(parent, v)
        if ru != rv:
            child = dict(parent)
            child[ru] = rv
            chosen.append(edges[idx])
            yield from rec(idx + 1, child, chosen)
            chosen.pop()
        # exclude edges[idx] only if the rest can still span
        rest = list(range(idx + 1, m))
        if connected_with(rest, chosen):
            yield from rec(idx + 1, parent, chosen)

    yield from rec(0, {v: v for v in range(n)}, [])


def connected_spanning_subgraphs(g: Graph) -> Iterator[frozenset[tuple[int, int]]]:
    """All edge subsets that are connected and touch every vertex, each once.

    Brute force over the 2^m edge subsets; intended for small graphs (the
    spanning-tree reduction check), hence the hard cap on edge count.
    """
    _require_connected(g, "connected_spanning_subgraphs")
    edges = sorted(g.edges)
    m = len(edges)
    if m > SUBGRAPH_EDGE_CAP:
        raise GraphError(
            f"connected_spanning_subgraphs capped at {SUBGRAPH_EDGE_CAP} edges, got {m}"
        )
    n = g.n
    if n <= 1:
        yield frozenset()
        return
    for mask in range(1 << m):
        subset = [edges[i] for i in range(m) if mask >> i & 1]
        if len(subset) < n - 1:
            continue
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for u, v in subset:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) == n:
            yield frozenset(subset)


# ---------------------------------------------------------------------------
# Exhaustive structural queries (small graphs only)


def _check_cap(g: Graph, what: str) -> None:
    if g.n > EXHAUSTIVE_CAP:
        raise GraphError(f"{what} is exhaustive; capped at {EXHAUSTIVE_CAP} vertices")


def _adj_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def clique_number(g: Graph) -> int:
    """Size of a maximum clique, by scanning all vertex subsets."""
    _check_cap(g, "clique_number")
    if g.n == 0:
        return 0
    masks = _adj_masks(g)
    best = 1
    for subset in range(1, 1 << g.n):
        size = subset.bit_count()
        if size <= best:
            continue
        ok = True
        s = subset
        while s:
            v = (s & -s).bit_length() - 1
            if subset & ~masks[v] != 1 << v:
                ok = False
                break
            s &= s - 1
        if ok:
            best = size
    return best


def circumference(g: Graph) -> int:
    """Length of a longest simple cycle, 0 if the graph is acyclic.

    Subset dynamic programming over (visited set, endpoint) states, anchored
    at the smallest vertex on the cycle so each cycle is found once.
    """
    _check_cap(g, "circumference")
    masks = _adj_masks(g)
    best = 0
    for s in range(g.n):
        start_bit = 1 << s
        seen = {(start_bit, s)}
        stack = [(start_bit, s)]
        while stack:
            mask, v = stack.pop()
            for u in g.neighbors(v):
                if u < s:
                    continue
                if u == s:
                    size = mask.bit_count()
                    if size >= 3 and size > best:
                        best = size
                elif not mask >> u & 1:
                    nxt = (mask | 1 << u, u)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        if best == g.n:
            break
    return best


def is_hamiltonian(g: Graph) -> bool:
    """True iff some simple cycle visits every vertex (needs n >= 3)."""
    return g.n >= 3 and circumference(g) == g.n


# ---------------------------------------------------------------------------
# Strategy-preserving constructions


def vertex_sum(g: Graph, v: int, h: Graph, u: int) -> Graph:
    """Disjoint union of ``g`` and ``h`` with ``u`` identified to ``v``.

    Vertices of ``g`` keep their ids; vertices of ``h`` other than ``u`` are
    appended after ``g`` in ascending order of their id in ``h``.
    """
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range for the first summand")
    if not 0 <= u < h.n:
        raise GraphError(f"vertex {u} out of range for the second summand")
    mapping = {}
    nxt = g.n
    for w in range(h.n):
        if w == u:
            mapping[w] = v
        else:
            mapping[w] = nxt
            nxt += 1
    edges = list(g.edges) + [(mapping[a], mapping[b]) for a, b in h.edges]
    return Graph(g.n + h.n - 1, edges)


def attach_paths(g: Graph, lengths: Mapping[int, int]) -> Graph:
    """Hang a pendant path of ``lengths[v]`` edges on each vertex ``v``.

    Length 0 (or a missing key) attaches nothing.  New vertices are appended
    in ascending order of the anchor vertex, then along each path.
    """
    edges = list(g.edges)
    nxt = g.n
    for v in sorted(lengths):
        ell = lengths[v]
        if ell < 0:
            raise GraphError("path lengths must be non-negative")
        if not 0 <= v < g.n:
            raise GraphError(f"anchor vertex {v} out of range")
        prev = v
        for _ in range(ell):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt, edges)


@dataclass(frozen=True)
class ContractionMap:
    """Record of a bridge contraction: which old vertex became which new one.

    ``vertex_map[w]`` is the contracted-graph id of source vertex ``w``;
    ``contracted`` lists the source edges that were collapsed.
    """

    source: Graph
    target: Graph
    vertex_map: tuple[int, ...]
    contracted: frozenset[tuple[int, int]]

    def classes(self) -> dict[int, tuple[int, ...]]:
        """Target vertex -> tuple of the source vertices merged into it."""
        out: dict[int, list[int]] = {}
        for w, t in enumerate(self.vertex_map):
            out.setdefault(t, []).append(w)
        return {t: tuple(ws) for t, ws in out.items()}

    def validate(self) -> None:
        """Check the recorded map against both graphs (used by tests)."""
        br = bridges(self.source)
        for e in self.contracted:
            if e not in br:
                raise GraphError(f"contracted edge {e} is not a bridge")
        mapped = set()
        for a, b in self.source.edges - self.contracted:
            ma, mb = self.vertex_map[a], self.vertex_map[b]
            if ma == mb:
                raise GraphError(f"non-contracted edge ({a}, {b}) collapsed")
            mapped.add(_norm_edge(ma, mb))
        if mapped != set(self.target.edges):
            raise GraphError("contracted graph edges do not match the map")


def contract_bridges(
    g: Graph, subset: Iterable[tuple[int, int]]
) -> tuple[Graph, ContractionMap]:
    """Contract the given bridges of a connected graph.

    Every edge in ``subset`` must be a bridge of ``g``.  Contracting bridges
    can never create parallel edges or self-loops, so the result is simple,
    and it stays connected.  New ids follow the smallest source vertex in
    each merged class.
    """
    subset = frozenset(_norm_edge(u, v) for u, v in subset)
    br = bridges(g)
    bad = subset - br
    if bad:
        raise GraphError(f"not bridges of the graph: {sorted(bad)}")

    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in subset:
        parent[find(u)] = find(v)

    roots = sorted({find(v) for v in range(g.n)}, key=lambda r: min(
        w for w in range(g.n) if find(w) == r
    ))
    new_id = {r: i for i, r in enumerate(roots)}
    vmap = tuple(new_id[find(v)] for v in range(g.n))
    new_edges = {
        _norm_edge(vmap[a], vmap[b]) for a, b in g.edges - subset
    }
    target = Graph(len(roots), new_edges)
    cmap = ContractionMap(source=g, target=target, vertex_map=vmap, contracted=subset)
    return target, cmap
