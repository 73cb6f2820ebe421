"""Executable strategies for both sides, plus the lifting combinators.

An adversary strategy maps (graph, state, internal phase) to a spanning
choice; an agents strategy maps (graph, state, choice) to one destination
per agent slot.  Phase is exposed through ``phase_key``/``set_phase`` so the
search harnesses can snapshot and restore strategy state while exploring a
game tree; stateless strategies just report ``None``.

A strategy may designate the initial placement it was built for (the cycle
and grid adversaries do); the refutation harness then starts there.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Optional, Sequence

from .engine import (
    GameState,
    SpanningChoice,
    apply_moves,
    iter_move_vectors,
    make_state,
)
from .graphs import (
    Graph,
    GraphError,
    ContractionMap,
    cut_vertices as graph_cut_vertices,
    is_connected,
)

__all__ = [
    "AdversaryStrategy",
    "AgentsStrategy",
    "RendezvousTreeAgents",
    "GreedyToSourceAgents",
    "CycleAdversary",
    "GridAlternatingAdversary",
    "RestrictToSubgraph",
    "CutVertexLift",
    "ContractLiftAgents",
    "ExpandLiftAgents",
    "StsAdversary",
    "OptimalAdversary",
    "OptimalAgents",
    "rendezvous_tree_agents",
    "cycle_adversary",
    "greedy_to_source_agents",
    "grid_alternating_adversary",
    "restrict_to_subgraph",
    "cut_vertex_lift",
    "contract_lift_agents",
    "expand_lift_agents",
    "sts_adversary",
]


class AdversaryStrategy:
    """Base: stateless, no designated placement."""

    def reset(self) -> None:
        pass

    def phase_key(self):
        return None

    def set_phase(self, phase) -> None:
        if phase is not None:
            raise GraphError("stateless strategy cannot restore a phase")

    def placement(self, g: Graph) -> Optional[GameState]:
        return None

    def choose(self, g: Graph, state: GameState) -> SpanningChoice:
        raise NotImplementedError


class AgentsStrategy:
    """Base: stateless agents strategy."""

    def reset(self) -> None:
        pass

    def phase_key(self):
        return None

    def set_phase(self, phase) -> None:
        if phase is not None:
            raise GraphError("stateless strategy cannot restore a phase")

    def moves(
        self, g: Graph, state: GameState, choice: SpanningChoice
    ) -> tuple[int, ...]:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Tree-path helpers


def _bfs_parents(choice: SpanningChoice, root: int) -> list[int]:
    """Parent pointers toward ``root``; lowest-id parent wins on ties, so a
    non-tree choice still yields deterministic shortest-path steps."""
    parent = [-1] * choice.n
    dist = [-1] * choice.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in choice.neighbors(v):
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                parent[u] = v
                queue.append(u)
    return parent


def _step_toward(parent: list[int], v: int, root: int) -> int:
    if v == root:
        return v
    return parent[v]


class RendezvousTreeAgents(AgentsStrategy):
    """Every agent walks one step along the (tree) path toward a fixed
    meeting vertex; agents already there hold."""

    def __init__(self, target: int):
        self.target = target

    def moves(self, g, state, choice):
        if not 0 <= self.target < g.n:
            raise GraphError(f"rendezvous target {self.target} out of range")
        parent = _bfs_parents(choice, self.target)
        return tuple(
            _step_toward(parent, v, self.target) for v in state.positions()
        )


class GreedyToSourceAgents(AgentsStrategy):
    """Distance-decreasing chase toward the informed agent on the current tree.

    Pick the ignorant agent whose tree path to the source carries the most
    ignorant agents (lowest vertex id on ties).  Every ignorant agent steps
    one vertex toward the source along its own tree path, and the
    knowledgeable agents step one vertex toward the chosen agent.
    """

    def moves(self, g, state, choice):
        if not choice.is_tree():
            raise GraphError("greedy-to-source needs a spanning tree choice")
        if not state.ignorant:
            return state.positions()
        source = state.knowledgeable[0]
        parent = _bfs_parents(choice, source)

        def path_to_source(v: int) -> list[int]:
            path = [v]
            while path[-1] != source:
                path.append(parent[path[-1]])
            return path

        ign_count: dict[int, int] = {}
        for v in state.ignorant:
            ign_count[v] = ign_count.get(v, 0) + 1
        best_vertex = None
        best_count = -1
        for v in sorted(set(state.ignorant)):
            cnt = sum(ign_count.get(u, 0) for u in path_to_source(v))
            if cnt > best_count:
                best_count = cnt
                best_vertex = v
        target_parent = _bfs_parents(choice, best_vertex)
        know_dest = tuple(
            _step_toward(target_parent, v, best_vertex)
            for v in state.knowledgeable
        )
        ign_dest = tuple(
            _step_toward(parent, v, source) for v in state.ignorant
        )
        return know_dest + ign_dest


# ---------------------------------------------------------------------------
# Cycle adversary


def _cycle_order(g: Graph) -> list[int]:
    if g.n < 3 or len(g.edges) != g.n or any(g.degree(v) != 2 for v in range(g.n)):
        raise GraphError("base graph is not a cycle")
    if not is_connected(g):
        raise GraphError("base graph is not a cycle")
    order = [0, min(g.neighbors(0))]
    while len(order) < g.n:
        a, b = order[-2], order[-1]
        nxt = [u for u in g.neighbors(b) if u != a]
        order.append(nxt[0])
    return order


class CycleAdversary(AdversaryStrategy):
    """On a cycle with two agents: drop the edge next to the informed agent
    on the shorter arc toward the ignorant one.

    The designated placement puts the informed agent at the start of the
    cycle walk and the ignorant one half way around.  Arc ties break to the
    lower-numbered neighbour unless a seeded RNG is supplied.
    """

    def __init__(self, rng: Optional[random.Random] = None):
        self.rng = rng

    def placement(self, g):
        order = _cycle_order(g)
        return make_state([order[0]], [order[len(order) // 2]])

    def choose(self, g, state):
        order = _cycle_order(g)
        m = g.n
        pos = {v: i for i, v in enumerate(order)}
        a = state.knowledgeable[0]
        ia = pos[a]
        succ = order[(ia + 1) % m]
        pred = order[(ia - 1) % m]
        if state.ignorant:
            b = state.ignorant[0]
            fwd = (pos[b] - ia) % m
            bwd = (ia - pos[b]) % m
            if fwd < bwd:
                drop = (a, succ)
            elif bwd < fwd:
                drop = (a, pred)
            elif self.rng is not None:
                drop = (a, succ) if self.rng.random() < 0.5 else (a, pred)
            else:
                drop = (a, min(succ, pred))
        else:
            drop = (a, succ)
        drop = (min(drop), max(drop))
        return SpanningChoice(g, g.edges - {drop})


# ---------------------------------------------------------------------------
# Grid alternating adversary


class GridAlternatingAdversary(AdversaryStrategy):
    """Alternate a snake path with its vertical mirror on a grid.

    Phase 0 plays a path winding up and down every column; after the chase
    strategy advances everyone one step, phase 1 plays the mirrored snake
    (seams flipped to the other end of each column, with the stranded
    top-of-first-column vertex attached sideways), which sends every agent
    straight back.  The configuration therefore repeats with period two and
    the informed agent never meets anyone.
    """

    def __init__(self, rows: int, cols: int):
        if max(rows, cols) <= 2:
            raise GraphError("grid trap needs rows > 2 or cols > 2")
        self.rows = rows
        self.cols = cols
        # wind within the dimension of size >= 3
        if rows >= 3:
            self._R, self._C = rows, cols
            self._pos = lambda k, j: j * cols + k
        else:
            self._R, self._C = cols, rows
            self._pos = lambda k, j: k * cols + j
        self._phase = 0

    # -- trees ---------------------------------------------------------------

    def _snake_sequence(self) -> list[int]:
        seq = []
        for k in range(self._C):
            js = range(self._R) if k % 2 == 0 else range(self._R - 1, -1, -1)
            seq.extend(self._pos(k, j) for j in js)
        return seq

    def snake_edges(self) -> frozenset:
        seq = self._snake_sequence()
        return frozenset(
            (min(a, b), max(a, b)) for a, b in zip(seq, seq[1:])
        )

    def flipped_edges(self) -> frozenset:
        R, C, pos = self._R, self._C, self._pos
        edges = set()
        for k in range(C):
            top = R - 1 if k == 0 else R
            for j in range(top - 1):
                edges.add((pos(k, j), pos(k, j + 1)))
        edges.add((pos(0, R - 1), pos(1, R - 1)))  # reattach the stranded corner
        for k in range(C - 1):
            j = 0 if k % 2 == 0 else R - 1
            edges.add((pos(k, j), pos(k + 1, j)))
        return frozenset((min(a, b), max(a, b)) for a, b in edges)

    # -- placement -------------------------------------------------------------

    def placement(self, g=None):
        R, C, pos = self._R, self._C, self._pos
        ignorant = [pos(1, j) for j in range(R)]
        for k in range(2, C):
            entry = 0 if k % 2 == 0 else R - 1
            ignorant.extend(pos(k, j) for j in range(R) if j != entry)
        return make_state([pos(0, 0)], ignorant)

    # -- strategy ----------------------------------------------------------------

    def reset(self):
        self._phase = 0

    def phase_key(self):
        return self._phase

    def set_phase(self, phase):
        self._phase = phase

    def choose(self, g, state):
        edges = self.snake_edges() if self._phase == 0 else self.flipped_edges()
        self._phase ^= 1
        return SpanningChoice(g, edges)


def grid_alternating_adversary(
    rows: int, cols: int
) -> tuple[GameState, GridAlternatingAdversary]:
    """The designated placement and alternating strategy for the rows x cols
    grid (informed agent in a corner, (rows-1)(cols-1)+1 ignorant agents)."""
    strat = GridAlternatingAdversary(rows, cols)
    return strat.placement(), strat


# ---------------------------------------------------------------------------
# Lifting combinators (adversary side)


class RestrictToSubgraph(AdversaryStrategy):
    """Play a sub-network strategy on a denser graph: the extra edges are
    simply never offered."""

    def __init__(self, inner: AdversaryStrategy, sub: Graph, full: Graph):
        if sub.n != full.n:
            raise GraphError("subgraph lift needs identical vertex sets")
        if not sub.edges <= full.edges:
            raise GraphError("first graph is not a subgraph of the second")
        if not is_connected(sub):
            raise GraphError("subgraph must be connected")
        self.inner = inner
        self.sub = sub
        self.full = full

    def reset(self):
        self.inner.reset()

    def phase_key(self):
        return self.inner.phase_key()

    def set_phase(self, phase):
        self.inner.set_phase(phase)

    def placement(self, g):
        return self.inner.placement(self.sub)

    def choose(self, g, state):
        inner_choice = self.inner.choose(self.sub, state)
        return SpanningChoice(self.full, inner_choice.edges)


class CutVertexLift(AdversaryStrategy):
    """Extend a winning block strategy through a cut vertex.

    Agents outside the block are treated as sitting on the cut vertex; the
    block strategy's tree is completed with one fixed spanning tree per
    outside component, so the informed agent and the last ignorant one can
    never meet on either side.
    """

    def __init__(
        self,
        inner: AdversaryStrategy,
        h: Graph,
        block_vertices: Sequence[int],
        v: int,
    ):
        block = sorted(set(block_vertices) | {v})
        if v not in graph_cut_vertices(h):
            raise GraphError(f"{v} is not a cut vertex")
        blockset = set(block)
        for u in block:
            if u == v:
                continue
            if any(w not in blockset for w in h.neighbors(u)):
                raise GraphError("block attaches to the rest at a vertex other than the cut vertex")
        self.h = h
        self.v = v
        self.block = block
        self._to_block = {w: i for i, w in enumerate(block)}
        self.block_graph = Graph(
            len(block),
            [
                (self._to_block[a], self._to_block[b])
                for a, b in h.edges
                if a in blockset and b in blockset
            ],
        )
        if not is_connected(self.block_graph):
            raise GraphError("block is not connected")
        self.inner = inner
        self._completion = self._outside_trees()

    def _outside_trees(self) -> frozenset:
        """One fixed BFS tree from the cut vertex over everything outside the
        block; every outside component hangs off the cut vertex, so this
        reaches them all."""
        h, v = self.h, self.v
        outside = set(range(h.n)) - set(self.block)
        edges = set()
        dist = {v: 0}
        queue = deque([v])
        while queue:
            a = queue.popleft()
            for b in h.neighbors(a):
                if b != v and b not in outside:
                    continue
                if b not in dist:
                    dist[b] = dist[a] + 1
                    edges.add((min(a, b), max(a, b)))
                    queue.append(b)
        if set(dist) - {v} != outside:
            raise GraphError("outside components not all attached at the cut vertex")
        return frozenset(edges)

    def _project(self, state: GameState) -> GameState:
        tb = self._to_block
        pv = tb[self.v]
        know = [tb.get(w, pv) for w in state.knowledgeable]
        ign = [tb.get(w, pv) for w in state.ignorant]
        return make_state(know, ign)

    def reset(self):
        self.inner.reset()

    def phase_key(self):
        return self.inner.phase_key()

    def set_phase(self, phase):
        self.inner.set_phase(phase)

    def placement(self, g):
        inner_p = self.inner.placement(self.block_graph)
        if inner_p is None:
            return None
        back = {i: w for w, i in self._to_block.items()}
        return make_state(
            [back[w] for w in inner_p.knowledgeable],
            [back[w] for w in inner_p.ignorant],
        )

    def choose(self, g, state):
        inner_choice = self.inner.choose(self.block_graph, self._project(state))
        back = {i: w for w, i in self._to_block.items()}
        edges = {(back[a], back[b]) for a, b in inner_choice.edges}
        edges.update(self._completion)
        return SpanningChoice(self.h, edges)


# ---------------------------------------------------------------------------
# Lifting combinators (agents side)


def _edge_preimages(cmap: ContractionMap) -> dict[tuple[int, int], tuple[int, int]]:
    """Contracted-graph edge -> its unique source edge."""
    out = {}
    vmap = cmap.vertex_map
    for a, b in cmap.source.edges - cmap.contracted:
        e = (min(vmap[a], vmap[b]), max(vmap[a], vmap[b]))
        out[e] = (a, b)
    return out


class ContractLiftAgents(AgentsStrategy):
    """Run a strategy for the uncontracted graph on its bridge contraction.

    The phase carries the simulated positions on the original graph, slot
    aligned with the canonical state; a step along a contracted edge
    projects to a hold.
    """

    def __init__(self, inner: AgentsStrategy, cmap: ContractionMap):
        self.inner = inner
        self.cmap = cmap
        self._preimage = _edge_preimages(cmap)
        self._reps = {
            t: min(ws) for t, ws in cmap.classes().items()
        }
        self._phase: Optional[tuple] = None

    def reset(self):
        self.inner.reset()
        self._phase = None

    def phase_key(self):
        return (self._phase, self.inner.phase_key())

    def set_phase(self, phase):
        if phase is None:
            self._phase = None
            self.inner.set_phase(None)
        else:
            self._phase, inner_phase = phase
            self.inner.set_phase(inner_phase)

    def _lift_choice(self, choice: SpanningChoice) -> SpanningChoice:
        edges = set(self.cmap.contracted)
        for e in choice.edges:
            edges.add(self._preimage[e])
        return SpanningChoice(self.cmap.source, edges)

    def moves(self, g, state, choice):
        vmap = self.cmap.vertex_map
        if self._phase is None:
            sim = (
                tuple(self._reps[c] for c in state.knowledgeable),
                tuple(self._reps[c] for c in state.ignorant),
            )
        else:
            sim = self._phase
        sim_state = GameState(*sim)
        g_choice = self._lift_choice(choice)
        mv_g = self.inner.moves(self.cmap.source, sim_state, g_choice)
        mv_h = tuple(vmap[d] for d in mv_g)
        # re-align the simulation with the canonical successor state
        nk = len(state.knowledgeable)
        know_h = mv_h[:nk]
        kset = set(know_h)
        next_know: list[tuple[int, int]] = [
            (mv_h[i], mv_g[i]) for i in range(nk)
        ]
        next_ign: list[tuple[int, int]] = []
        for i in range(nk, len(mv_h)):
            pair = (mv_h[i], mv_g[i])
            if mv_h[i] in kset:
                next_know.append(pair)
            else:
                next_ign.append(pair)
        next_know.sort()
        next_ign.sort()
        self._phase = (
            tuple(gd for _, gd in next_know),
            tuple(gd for _, gd in next_ign),
        )
        return mv_h


class ExpandLiftAgents(AgentsStrategy):
    """Run a contracted-graph strategy on the original graph, one contracted
    round per ``c`` rounds here.

    At consult rounds the contracted strategy is asked against the projected
    choice; an agent whose answer crosses a real (non-bridge-chain) edge
    crosses right away if it stands at the crossing point, otherwise it
    spends the round window walking the bridge chain toward that point while
    everyone else holds.  Bridge-chain edges sit in every adversary choice,
    so those walks can never be blocked.
    """

    def __init__(self, inner: AgentsStrategy, cmap: ContractionMap, c: int):
        if c != len(cmap.contracted):
            raise GraphError("dilation must equal the number of contracted edges")
        self.inner = inner
        self.cmap = cmap
        self.c = c
        self._preimage = _edge_preimages(cmap)
        # per contracted class: the induced bridge forest for in-class walks
        classes = cmap.classes()
        self._class_of = cmap.vertex_map
        self._class_adj: dict[int, dict[int, tuple[int, ...]]] = {}
        self._anchor: dict[int, int] = {}
        for t, ws in classes.items():
            adjacency: dict[int, list[int]] = {w: [] for w in ws}
            for a, b in cmap.contracted:
                if cmap.vertex_map[a] == t:
                    adjacency[a].append(b)
                    adjacency[b].append(a)
            self._class_adj[t] = {
                w: tuple(sorted(u)) for w, u in adjacency.items()
            }
            # fixed in-class gathering point: agents told to hold in the
            # contracted game drift here, so same-class agents really meet
            self._anchor[t] = min(ws)
        self._tick = 0
        self._targets: Optional[tuple[Optional[int], ...]] = None

    def reset(self):
        self.inner.reset()
        self._tick = 0
        self._targets = None

    def phase_key(self):
        return (self._tick, self._targets, self.inner.phase_key())

    def set_phase(self, phase):
        if phase is None:
            self._tick = 0
            self._targets = None
            self.inner.set_phase(None)
        else:
            self._tick, self._targets, inner_phase = phase
            self.inner.set_phase(inner_phase)

    def _class_step(self, v: int, target: int) -> int:
        """One step from v toward target inside the bridge chain class."""
        if v == target:
            return v
        adj = self._class_adj[self._class_of[v]]
        prev = {v: v}
        queue = deque([v])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in prev:
                    prev[b] = a
                    queue.append(b)
        cur = target
        while prev[cur] != v:
            cur = prev[cur]
        return cur

    def _project_choice(self, choice: SpanningChoice) -> SpanningChoice:
        vmap = self.cmap.vertex_map
        edges = set()
        for a, b in choice.edges:
            ea, eb = vmap[a], vmap[b]
            if ea != eb:
                edges.add((min(ea, eb), max(ea, eb)))
        return SpanningChoice(self.cmap.target, edges)

    def moves(self, g, state, choice):
        if self.c == 0:
            return self.inner.moves(self.cmap.target, state, choice)
        positions = state.positions()
        if self._tick % self.c == 0:
            vmap = self.cmap.vertex_map
            proj_state = make_state(
                [vmap[w] for w in state.knowledgeable],
                [vmap[w] for w in state.ignorant],
            )
            proj_choice = self._project_choice(choice)
            mv_h = self.inner.moves(self.cmap.target, proj_state, proj_choice)
            order = _slot_alignment(state, proj_state, vmap)
            # all or nothing: the contracted round executes only when every
            # crossing agent already stands at its crossing point, otherwise
            # the whole team spends the window walking bridge chains
            crossings: dict[int, tuple[int, int]] = {}
            ready = True
            for slot, hslot in enumerate(order):
                v = positions[slot]
                hdest = mv_h[hslot]
                if hdest == vmap[v]:
                    continue
                a, b = self._crossing(vmap[v], hdest)
                crossings[slot] = (a, b)
                if v != a:
                    ready = False
            dests: list[int] = [0] * len(positions)
            targets: list[Optional[int]] = [None] * len(positions)
            for slot, v in enumerate(positions):
                if slot not in crossings:
                    anchor = self._anchor[vmap[v]]
                    targets[slot] = anchor if v != anchor else None
                    dests[slot] = self._class_step(v, anchor)
                elif ready:
                    dests[slot] = crossings[slot][1]
                else:
                    a = crossings[slot][0]
                    targets[slot] = a
                    dests[slot] = self._class_step(v, a)
            self._targets = tuple(targets)
        else:
            dests = []
            targets = list(self._targets or [None] * len(positions))
            for slot, v in enumerate(positions):
                t = targets[slot]
                if t is not None and self._class_of[v] == self._class_of[t] and v != t:
                    dests.append(self._class_step(v, t))
                else:
                    targets[slot] = None
                    dests.append(v)
            self._targets = tuple(targets)
        self._tick = (self._tick + 1) % self.c  # only the window position matters
        # realign targets with the canonical successor ordering
        nk = len(state.knowledgeable)
        know_dest = dests[:nk]
        kset = set(know_dest)
        nxt_k = []
        nxt_i = []
        for slot in range(len(positions)):
            pair = (dests[slot], self._targets[slot])
            if slot < nk or dests[slot] in kset:
                nxt_k.append(pair)
            else:
                nxt_i.append(pair)
        nxt_k.sort(key=lambda p: (p[0], -1 if p[1] is None else p[1]))
        nxt_i.sort(key=lambda p: (p[0], -1 if p[1] is None else p[1]))
        self._targets = tuple(t for _, t in nxt_k) + tuple(t for _, t in nxt_i)
        return tuple(dests)

    def _crossing(self, hclass: int, hdest: int) -> tuple[int, int]:
        e = (min(hclass, hdest), max(hclass, hdest))
        a, b = self._preimage[e]
        if self._class_of[a] != hclass:
            a, b = b, a
        return a, b


def _slot_alignment(
    state: GameState, proj: GameState, vmap: tuple[int, ...]
) -> list[int]:
    """Match each slot of ``state`` to a slot of its projection with the same
    class, consuming projected slots in order."""
    order = []
    used_k: dict[int, deque] = {}
    for i, c in enumerate(proj.knowledgeable):
        used_k.setdefault(c, deque()).append(i)
    used_i: dict[int, deque] = {}
    offset = len(proj.knowledgeable)
    for i, c in enumerate(proj.ignorant):
        used_i.setdefault(c, deque()).append(offset + i)
    for v in state.knowledgeable:
        order.append(used_k[vmap[v]].popleft())
    for v in state.ignorant:
        order.append(used_i[vmap[v]].popleft())
    return order


# ---------------------------------------------------------------------------
# Spanning-tree-symmetry adversary


class StsAdversary(AdversaryStrategy):
    """Replay a spanning-tree-symmetry witness.

    The first round plays the witness tree for the starting positions; after
    each agents' move the observed one-step function is pulled back through
    the accumulated embedding, its stored extension is composed on, and the
    image tree is played.  Positions therefore always sit on the current
    tree exactly as the start positions sat on the witness tree, so no two
    agents can ever meet.
    """

    def __init__(self, witness):
        self.witness = witness
        self._phase: Optional[tuple] = None  # (psi tuple, virtual S tuple)

    def reset(self):
        self._phase = None

    def phase_key(self):
        return self._phase

    def set_phase(self, phase):
        self._phase = phase

    def choose(self, g, state):
        occupied = state.positions()
        if len(set(occupied)) != len(occupied):
            raise GraphError("state outside witness domain: agents share a vertex")
        s_real = frozenset(occupied)
        if self._phase is None:
            s_virtual = tuple(sorted(s_real))
            psi = tuple(range(g.n))
        else:
            psi, s_virtual = self._phase
            prev_real = [psi[x] for x in s_virtual]
            prev_tree = frozenset(
                (min(psi[a], psi[b]), max(psi[a], psi[b]))
                for a, b in self.witness.tree_for(frozenset(s_virtual))
            )
            t_real = _match_one_step(prev_real, sorted(s_real), prev_tree)
            inv = [0] * g.n
            for x, y in enumerate(psi):
                inv[y] = x
            t_virtual = tuple(
                sorted((x, inv[t_real[psi[x]]]) for x in s_virtual)
            )
            phi = self.witness.extension(frozenset(s_virtual), t_virtual)
            psi = tuple(psi[phi[x]] for x in range(g.n))
        tree = self.witness.tree_for(frozenset(s_virtual))
        played = frozenset(
            (min(psi[a], psi[b]), max(psi[a], psi[b])) for a, b in tree
        )
        self._phase = (psi, s_virtual)
        return SpanningChoice(g, played)


def _match_one_step(
    prev: list[int], curr: list[int], tree_edges: frozenset
) -> dict[int, int]:
    """A bijection prev -> curr where each agent held or used a tree edge."""
    nbrs: dict[int, set[int]] = {}
    for a, b in tree_edges:
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)

    def rec(i: int, remaining: list[int], acc: dict[int, int]):
        if i == len(prev):
            return dict(acc)
        v = prev[i]
        for j, w in enumerate(remaining):
            if w == v or w in nbrs.get(v, ()):
                acc[v] = w
                got = rec(i + 1, remaining[:j] + remaining[j + 1 :], acc)
                if got is not None:
                    return got
                del acc[v]
        return None

    got = rec(0, list(curr), {})
    if got is None:
        raise GraphError("agents' move is not a one-step of the played tree")
    return got


# ---------------------------------------------------------------------------
# Solver-extracted policies


class OptimalAdversary(AdversaryStrategy):
    """Play the attractor table's worst choice; from a safe state the agents
    never enter the attractor."""

    def __init__(self, table, designated: Optional[GameState] = None):
        self.table = table
        self.designated = designated

    def placement(self, g):
        return self.designated

    def choose(self, g, state):
        return self.table.worst_choice(state)


class OptimalAgents(AgentsStrategy):
    """Pick the move vector reaching the lowest-rank successor (all-hold if
    every successor is adversary-safe)."""

    def __init__(self, table):
        self.table = table

    def moves(self, g, state, choice):
        best = None
        for mv in iter_move_vectors(state, choice):
            succ = apply_moves(g, state, choice, mv)
            r = self.table.rank(succ)
            key = (
                (0, r, succ, mv) if r is not None else (1, 0, succ, mv)
            )
            if best is None or key < best:
                best = key
        return best[3]


# ---------------------------------------------------------------------------
# Spec-shaped constructors


def rendezvous_tree_agents(target: int) -> RendezvousTreeAgents:
    return RendezvousTreeAgents(target)


def cycle_adversary(rng: Optional[random.Random] = None) -> CycleAdversary:
    return CycleAdversary(rng)


def greedy_to_source_agents() -> GreedyToSourceAgents:
    return GreedyToSourceAgents()


def restrict_to_subgraph(
    inner: AdversaryStrategy, sub: Graph, full: Graph
) -> RestrictToSubgraph:
    return RestrictToSubgraph(inner, sub, full)


def cut_vertex_lift(
    inner: AdversaryStrategy, h: Graph, block_vertices: Sequence[int], v: int
) -> CutVertexLift:
    return CutVertexLift(inner, h, block_vertices, v)


def contract_lift_agents(
    inner: AgentsStrategy, cmap: ContractionMap
) -> ContractLiftAgents:
    return ContractLiftAgents(inner, cmap)


def expand_lift_agents(
    inner: AgentsStrategy, cmap: ContractionMap, c: int
) -> ExpandLiftAgents:
    return ExpandLiftAgents(inner, cmap, c)


def sts_adversary(witness) -> StsAdversary:
    return StsAdversary(witness)
