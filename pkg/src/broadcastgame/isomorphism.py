"""Isomorphism tests, canonical forms, and small-graph catalogues.

Everything here is desk scale.  Canonical forms are exact (minimum edge
bitmask over all vertex permutations); the bulk variant vectorises the
permutation sweep with numpy so that the catalogue of connected graphs on
up to seven vertices builds in seconds.  Trees get the cheaper
centre-rooted encoding, which lets us walk all labelled trees (via Pruefer
sequences) and keep one representative per shape.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .graphs import Graph, GraphError, is_connected

__all__ = [
    "is_isomorphic",
    "automorphisms",
    "canonical_key",
    "tree_canonical_key",
    "all_trees",
    "connected_graph_classes",
]

CANONICAL_CAP = 8


def _edge_index(n: int) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(itertools.combinations(range(n), 2))}


def _mask_of(g: Graph) -> int:
    idx = _edge_index(g.n)
    mask = 0
    for e in g.edges:
        mask |= 1 << idx[e]
    return mask


def _graph_of_mask(n: int, mask: int) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


@lru_cache(maxsize=None)
def _perm_edge_maps(n: int) -> list[tuple[int, ...]]:
    """For each permutation of range(n), where each edge-bit position lands."""
    pairs = list(itertools.combinations(range(n), 2))
    idx = {e: i for i, e in enumerate(pairs)}
    maps = []
    for perm in itertools.permutations(range(n)):
        maps.append(
            tuple(
                idx[(perm[u], perm[v])] if perm[u] < perm[v] else idx[(perm[v], perm[u])]
                for u, v in pairs
            )
        )
    return maps


def canonical_key(g: Graph) -> tuple[int, int]:
    """(n, minimum edge bitmask over all relabelings): equal iff isomorphic."""
    if g.n > CANONICAL_CAP:
        raise GraphError(f"canonical_key capped at {CANONICAL_CAP} vertices")
    mask = _mask_of(g)
    best = None
    for emap in _perm_edge_maps(g.n):
        pm = 0
        rest = mask
        while rest:
            b = (rest & -rest).bit_length() - 1
            pm |= 1 << emap[b]
            rest &= rest - 1
        if best is None or pm < best:
            best = pm
    return (g.n, best if best is not None else 0)


def _bulk_canonical(n: int, masks: np.ndarray) -> np.ndarray:
    """Vectorised canonical masks for many graphs on n vertices at once."""
    m = n * (n - 1) // 2
    canon = masks.copy()
    for emap in _perm_edge_maps(n):
        out = np.zeros_like(masks)
        for b in range(m):
            out |= ((masks >> b) & 1) << emap[b]
        np.minimum(canon, out, out=canon)
    return canon


# ---------------------------------------------------------------------------
# Backtracking isomorphism / automorphism search


def _iso_search(
    g: Graph, h: Graph, pinned: Optional[dict[int, int]] = None
) -> Iterator[dict[int, int]]:
    """Yield isomorphisms g -> h extending ``pinned`` (bijections preserving
    edges both ways)."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return
    if sorted(g.degree(v) for v in range(g.n)) != sorted(
        h.degree(v) for v in range(h.n)
    ):
        return
    n = g.n
    assign: dict[int, int] = dict(pinned or {})
    if any(not (0 <= v < n) for v in assign) or len(set(assign.values())) != len(assign):
        return
    for u, w in assign.items():
        if g.degree(u) != h.degree(w):
            return
    # order unassigned vertices to touch already-assigned neighbourhoods early
    order = sorted(
        (v for v in range(n) if v not in assign),
        key=lambda v: (-g.degree(v), v),
    )
    used = set(assign.values())

    def consistent(v: int, w: int) -> bool:
        if g.degree(v) != h.degree(w):
            return False
        # edges to assigned vertices must map to edges, non-edges to non-edges
        for u, img in assign.items():
            if g.has_edge(u, v) != h.has_edge(img, w):
                return False
        return True

    def rec(i: int) -> Iterator[dict[int, int]]:
        if i == len(order):
            yield dict(assign)
            return
        v = order[i]
        for w in range(n):
            if w in used:
                continue
            if consistent(v, w):
                assign[v] = w
                used.add(w)
                yield from rec(i + 1)
                del assign[v]
                used.discard(w)

    yield from rec(0)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return next(_iso_search(g, h), None) is not None


def automorphisms(g: Graph) -> Iterator[dict[int, int]]:
    """All vertex permutations preserving the edge set."""
    yield from _iso_search(g, g)


# ---------------------------------------------------------------------------
# Trees: centre-rooted canonical encoding and shape enumeration


def _tree_centers(g: Graph) -> list[int]:
    if g.n == 1:
        return [0]
    deg = {v: g.degree(v) for v in range(g.n)}
    leaves = [v for v, d in deg.items() if d == 1]
    remaining = g.n
    adj = g.adjacency()
    removed = set()
    while remaining > 2:
        nxt = []
        for leaf in leaves:
            removed.add(leaf)
            remaining -= 1
            for u in adj[leaf]:
                if u in removed:
                    continue
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        leaves = nxt
    return sorted(v for v in range(g.n) if v not in removed)


def _rooted_encoding(g: Graph, root: int, parent: int) -> str:
    children = sorted(
        _rooted_encoding(g, u, root) for u in g.neighbors(root) if u != parent
    )
    return "(" + "".join(children) + ")"


def tree_canonical_key(g: Graph) -> str:
    """Canonical string for a tree: isomorphic trees get equal keys."""
    if len(g.edges) != g.n - 1 or not is_connected(g):
        raise GraphError("tree_canonical_key requires a tree")
    return min(_rooted_encoding(g, c, -1) for c in _tree_centers(g))


def _tree_from_pruefer(seq: tuple[int, ...], n: int) -> Graph:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return Graph(n, edges)


@lru_cache(maxsize=None)
def all_trees(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of trees on n vertices."""
    if n < 1:
        raise GraphError("trees need n >= 1")
    if n == 1:
        return (Graph(1, []),)
    if n == 2:
        return (Graph(2, [(0, 1)]),)
    seen: dict[str, Graph] = {}
    for seq in itertools.product(range(n), repeat=n - 2):
        t = _tree_from_pruefer(seq, n)
        key = tree_canonical_key(t)
        if key not in seen:
            seen[key] = t
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------------------
# Catalogue of connected graphs up to isomorphism


@lru_cache(maxsize=None)
def connected_graph_classes(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of connected graphs on n vertices.

    Built by extension: every connected graph has a non-cut vertex, so gluing
    a new vertex onto every class on n-1 vertices by every non-empty
    neighbourhood reaches every class on n.  Duplicates are removed by exact
    canonical masks (numpy-vectorised permutation sweep).
    """
    if n < 1:
        raise GraphError("need n >= 1")
    if n > 7:
        raise GraphError("connected_graph_classes capped at 7 vertices")
    if n == 1:
        return (Graph(1, []),)
    smaller = connected_graph_classes(n - 1)
    pairs = list(itertools.combinations(range(n), 2))
    idx = {e: i for i, e in enumerate(pairs)}
    candidates = set()
    for base in smaller:
        base_mask = 0
        for e in base.edges:
            base_mask |= 1 << idx[e]
        for nbhd in range(1, 1 << (n - 1)):
            mask = base_mask
            for v in range(n - 1):
                if nbhd >> v & 1:
                    mask |= 1 << idx[(v, n - 1)]
            candidates.add(mask)
    arr = np.array(sorted(candidates), dtype=np.int64)
    canon = np.unique(_bulk_canonical(n, arr))
    return tuple(_graph_of_mask(n, int(m)) for m in canon)
