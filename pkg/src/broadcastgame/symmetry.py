"""One-step sets, spanning-tree symmetry, and witness construction.

A graph has k-spanning-tree symmetry when every k-set of positions S admits
a spanning tree T_S such that every one-step function on T_S (each agent
holds or crosses one T_S edge) extends to an injective re-embedding of T_S
onto a spanning tree of the base graph.  Extensions are isomorphisms, hence
injective, so a qualifying T_S can never allow two S-vertices to reach a
common vertex in one step; equivalently all pairwise T_S distances within S
are at least three.  A witness of this property hands the adversary a
perpetual trap: see :class:`~broadcastgame.strategies.StsAdversary`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Optional

from .graphs import Graph, GraphError, spanning_trees
from .solver import BudgetExceeded, TREE_BUDGET

__all__ = [
    "one_step_functions",
    "extends_to_tree_isomorphism",
    "StsWitness",
    "has_k_sts",
]

STS_VERTEX_CAP = 8


def one_step_functions(
    s: tuple[int, ...], h: Graph
) -> Iterator[dict[int, int]]:
    """All maps t on S with t(v) = v or {v, t(v)} an edge of h, each once."""
    s = tuple(sorted(set(s)))
    for v in s:
        if not 0 <= v < h.n:
            raise GraphError(f"vertex {v} not in the graph")
    choice_sets = [(v,) + h.neighbors(v) for v in s]
    for combo in itertools.product(*choice_sets):
        yield dict(zip(s, combo))


def extends_to_tree_isomorphism(
    tree: Graph, t: dict[int, int], g: Graph
) -> Optional[dict[int, int]]:
    """An injective map on all vertices extending ``t`` that carries the
    tree's edges onto edges of ``g`` (hence onto an isomorphic spanning
    tree), or None.  Non-injective ``t`` can never extend.

    Backtracking: vertices are assigned outward from the pinned ones, each
    new vertex constrained to the base-graph neighbours of its already
    placed tree neighbour.
    """
    n = tree.n
    if n != g.n:
        raise GraphError("tree and graph must share the vertex set")
    if len(set(t.values())) != len(t):
        return None
    assign = dict(t)
    for v, w in assign.items():
        if tree.degree(v) > g.degree(w):
            return None
    # assignment order: BFS outward from the pinned set (tree is connected)
    order = []
    seen = set(assign)
    frontier = sorted(assign) or [0]
    if not assign:
        order.append(0)
        seen.add(0)
    queue = list(frontier)
    while queue:
        v = queue.pop(0)
        for u in tree.neighbors(v):
            if u not in seen:
                seen.add(u)
                order.append(u)
                queue.append(u)
    used = set(assign.values())

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        anchors = [u for u in tree.neighbors(v) if u in assign]
        if anchors:
            candidates = set(g.neighbors(assign[anchors[0]]))
            for u in anchors[1:]:
                candidates &= set(g.neighbors(assign[u]))
            candidates = sorted(candidates - used)
        else:
            candidates = [w for w in range(n) if w not in used]
        for w in candidates:
            if tree.degree(v) > g.degree(w):
                continue
            assign[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            del assign[v]
            used.discard(w)
        return False

    if rec(0):
        return dict(assign)
    return None


@dataclass(frozen=True)
class StsWitness:
    """For every position set S of size k: the chosen tree and one extension
    per one-step function."""

    n: int
    k: int
    entries: dict  # frozenset(S) -> (tree edge frozenset, {t items tuple: phi tuple})

    def tree_for(self, s: frozenset) -> frozenset:
        return self.entries[s][0]

    def extension(self, s: frozenset, t_items: tuple) -> tuple[int, ...]:
        return self.entries[s][1][tuple(sorted(t_items))]

    def validate(self, g: Graph) -> None:
        """Machine-check every stored map against the witness invariants."""
        if g.n != self.n:
            raise GraphError("witness built for a different graph size")
        for s, (tree_edges, extensions) in self.entries.items():
            tree = Graph(g.n, tree_edges)
            if len(tree_edges) != g.n - 1 or not tree_edges <= g.edges:
                raise GraphError("stored tree is not a spanning tree of the graph")
            expected = {
                tuple(sorted(t.items()))
                for t in one_step_functions(tuple(s), tree)
            }
            if set(extensions) != expected:
                raise GraphError("extensions do not cover the one-step functions")
            for t_items, phi in extensions.items():
                if len(set(phi)) != g.n:
                    raise GraphError("extension is not injective")
                for v, tv in t_items:
                    if phi[v] != tv:
                        raise GraphError("extension does not restrict to t")
                for a, b in tree_edges:
                    if (min(phi[a], phi[b]), max(phi[a], phi[b])) not in g.edges:
                        raise GraphError("extension does not map tree edges to edges")

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "k": self.k,
            "entries": [
                {
                    "s": sorted(s),
                    "tree": sorted(list(e) for e in tree_edges),
                    "extensions": [
                        {"t": [list(p) for p in t_items], "phi": list(phi)}
                        for t_items, phi in sorted(extensions.items())
                    ],
                }
                for s, (tree_edges, extensions) in sorted(
                    self.entries.items(), key=lambda kv: sorted(kv[0])
                )
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "StsWitness":
        payload = json.loads(text)
        entries = {}
        for item in payload["entries"]:
            s = frozenset(item["s"])
            tree_edges = frozenset((u, v) for u, v in item["tree"])
            extensions = {
                tuple(sorted((v, tv) for v, tv in ext["t"])): tuple(ext["phi"])
                for ext in item["extensions"]
            }
            entries[s] = (tree_edges, extensions)
        return StsWitness(payload["n"], payload["k"], entries)


def _tree_distances_ok(tree: Graph, s: tuple[int, ...]) -> bool:
    """No two S-vertices within distance 2: otherwise a merging (hence
    non-injective, hence non-extending) one-step function exists."""
    for v in s:
        seen = {v: 0}
        frontier = [v]
        for _ in range(2):
            nxt = []
            for a in frontier:
                for b in tree.neighbors(a):
                    if b not in seen:
                        seen[b] = seen[a] + 1
                        nxt.append(b)
            frontier = nxt
        for w in s:
            if w != v and w in seen:
                return False
    return True


def has_k_sts(
    g: Graph, k: int, tree_budget: int = TREE_BUDGET
) -> Optional[StsWitness]:
    """Search a complete spanning-tree-symmetry witness for (g, k).

    For each S the spanning trees are scanned in canonical edge order and
    the first tree all of whose one-step functions extend is kept, with the
    extensions memoised into the witness.  Returns None as soon as some S
    admits no such tree.
    """
    if g.n > STS_VERTEX_CAP:
        raise GraphError(f"has_k_sts capped at {STS_VERTEX_CAP} vertices")
    if not 1 <= k <= g.n:
        raise GraphError(f"need 1 <= k <= {g.n}")
    trees = []
    for count, t in enumerate(spanning_trees(g)):
        if count >= tree_budget:
            raise BudgetExceeded(f"spanning tree budget {tree_budget} exceeded")
        trees.append(t)
    entries = {}
    for s in itertools.combinations(range(g.n), k):
        found = None
        for tree_edges in trees:
            tree = Graph(g.n, tree_edges)
            if not _tree_distances_ok(tree, s):
                continue
            extensions = {}
            good = True
            for t in one_step_functions(s, tree):
                phi = extends_to_tree_isomorphism(tree, t, g)
                if phi is None:
                    good = False
                    break
                extensions[tuple(sorted(t.items()))] = tuple(
                    phi[v] for v in range(g.n)
                )
            if good:
                found = (tree_edges, extensions)
                break
        if found is None:
            return None
        entries[frozenset(s)] = found
    return StsWitness(g.n, k, entries)
