"""Round mechanics of the broadcast game.

One round: the adversary picks a connected spanning subgraph of the base
graph, then every agent simultaneously either holds or moves to an adjacent
vertex of that subgraph.  After the moves, any ignorant agent standing on
the same vertex as an agent that was knowledgeable at the *start* of the
round becomes knowledgeable.  Agents win once nobody is ignorant.

States are canonical: both position multisets are kept sorted, so agents
within a knowledge class are interchangeable and equal multisets mean equal
states.  Agent slots in a move vector are ordered knowledgeable-first,
positionally within the sorted multisets.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .graphs import Graph, GraphError

__all__ = [
    "GameState",
    "SpanningChoice",
    "PlayOutcome",
    "make_state",
    "is_agents_win",
    "initial_placements",
    "iter_move_vectors",
    "apply_moves",
    "agent_move_options",
    "successor_states",
    "play",
]


@dataclass(frozen=True, order=True)
class GameState:
    """Sorted multisets of knowledgeable and ignorant agent positions."""

    knowledgeable: tuple[int, ...]
    ignorant: tuple[int, ...]

    @property
    def total(self) -> int:
        return len(self.knowledgeable) + len(self.ignorant)

    def positions(self) -> tuple[int, ...]:
        return self.knowledgeable + self.ignorant

    def occupied(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.positions())))

    def to_json_dict(self) -> dict:
        return {
            "knowledgeable": list(self.knowledgeable),
            "ignorant": list(self.ignorant),
        }


def make_state(knowledgeable: Iterable[int], ignorant: Iterable[int]) -> GameState:
    """Canonicalise: both multisets stored sorted."""
    return GameState(tuple(sorted(knowledgeable)), tuple(sorted(ignorant)))


def is_agents_win(s: GameState) -> bool:
    """All agents knowledgeable.  Co-location alone does not count; knowledge
    spreads only through the end-of-round update in :func:`apply_moves`."""
    return not s.ignorant


class SpanningChoice:
    """A connected spanning subgraph of the base graph, one round's arena."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, base: Graph, edges: Iterable[tuple[int, int]]):
        edges = frozenset((u, v) if u < v else (v, u) for u, v in edges)
        bad = edges - base.edges
        if bad:
            raise GraphError(f"choice uses edges not in the base graph: {sorted(bad)}")
        adj: list[list[int]] = [[] for _ in range(base.n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        if base.n > 1:
            seen = {0}
            queue = deque([0])
            while queue:
                v = queue.popleft()
                for u in adj[v]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            if len(seen) != base.n:
                raise GraphError("choice is not a connected spanning subgraph")
        object.__setattr__(self, "n", base.n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SpanningChoice is immutable")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def options(self, v: int) -> tuple[int, ...]:
        """Hold or step: the legal destinations from ``v`` this round."""
        return (v,) + self._adj[v]

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, SpanningChoice)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"SpanningChoice(m={len(self.edges)})"


def initial_placements(g: Graph, k: int) -> Iterator[GameState]:
    """All setups: one knowledgeable and k-1 ignorant agents on k distinct
    vertices, one state per canonical form."""
    if not 1 <= k <= g.n:
        raise GraphError(f"need 1 <= k <= {g.n}, got {k}")
    for know in range(g.n):
        rest = [v for v in range(g.n) if v != know]
        for ign in itertools.combinations(rest, k - 1):
            yield GameState((know,), ign)


def iter_move_vectors(
    s: GameState, choice: SpanningChoice
) -> Iterator[tuple[int, ...]]:
    """Every legal destination assignment, knowledgeable slots first."""
    opts = [choice.options(v) for v in s.positions()]
    return itertools.product(*opts)


def apply_moves(
    g: Graph, s: GameState, choice: SpanningChoice, mv: tuple[int, ...]
) -> GameState:
    """Relocate agents, then spread knowledge by co-location.

    Knowledge transfers to every ignorant agent that ends the round on a
    vertex where some start-of-round knowledgeable agent also ends it.
    Crossing an edge in opposite directions transfers nothing.
    """
    positions = s.positions()
    if len(mv) != len(positions):
        raise GraphError("move vector length does not match agent count")
    for v, dest in zip(positions, mv):
        if dest != v and dest not in choice.neighbors(v):
            raise GraphError(f"illegal destination {dest} from {v}")
    nk = len(s.knowledgeable)
    know_dest = mv[:nk]
    know_set = set(know_dest)
    new_know = list(know_dest)
    new_ign = []
    for dest in mv[nk:]:
        if dest in know_set:
            new_know.append(dest)
        else:
            new_ign.append(dest)
    return make_state(new_know, new_ign)


def successor_states(
    kpos: tuple[int, ...],
    ipos: tuple[int, ...],
    options: Callable[[int], tuple[int, ...]],
) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct canonical successors over all move vectors, as raw tuples.

    This is the hot loop shared by the engine and the solver, so it works on
    bare tuples instead of :class:`GameState`.
    """
    kopts = [options(v) for v in kpos]
    iopts = [options(v) for v in ipos]
    out = set()
    for kd in itertools.product(*kopts):
        kset = set(kd)
        kbase = sorted(kd)
        for idest in itertools.product(*iopts):
            conv = [d for d in idest if d in kset]
            if conv:
                newk = tuple(sorted(kbase + conv))
                newi = tuple(sorted(d for d in idest if d not in kset))
            else:
                newk = tuple(kbase)
                newi = tuple(sorted(idest))
            out.add((newk, newi))
    return out


def agent_move_options(
    g: Graph, s: GameState, choice: SpanningChoice
) -> set[GameState]:
    """The distinct canonical states reachable in one agents' move."""
    raw = successor_states(s.knowledgeable, s.ignorant, choice.options)
    return {GameState(k, i) for k, i in raw}


# ---------------------------------------------------------------------------
# Strategy-versus-strategy play


@dataclass(frozen=True)
class PlayOutcome:
    """Result of a bounded play.

    ``kind`` is ``agents_win`` (with the winning round), ``cycle`` (a
    (state, adversary-phase) pair recurred; ``period`` is the gap back to
    its first occurrence), or ``cap`` (round cap hit first).
    """

    kind: str
    round: int
    first_seen_round: Optional[int] = None
    period: Optional[int] = None

    @staticmethod
    def agents_win(rnd: int) -> "PlayOutcome":
        return PlayOutcome("agents_win", rnd)

    @staticmethod
    def cycle(rnd: int, first_seen: int) -> "PlayOutcome":
        return PlayOutcome("cycle", rnd, first_seen, rnd - first_seen)

    @staticmethod
    def cap(rnd: int) -> "PlayOutcome":
        return PlayOutcome("cap", rnd)

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind, "round": self.round}
        if self.kind == "cycle":
            out["first_seen_round"] = self.first_seen_round
            out["period"] = self.period
        return out


def play(
    g: Graph,
    s0: GameState,
    adversary,
    agents,
    cap: int = 1000,
    collect_trace: bool = False,
) -> tuple[PlayOutcome, list[dict]]:
    """Alternate adversary choices and agents' moves from ``s0``.

    Stops at the first win, at the first repetition of a (canonical state,
    adversary phase) pair, or at the round cap.  The trace holds one record
    per completed round: round index, the chosen subgraph's edges, positions
    before and after, and the knowledgeable count after the round.
    """
    adversary.reset()
    agents.reset()
    state = s0
    trace: list[dict] = []
    seen: dict[tuple, int] = {}
    rnd = 0
    while True:
        if is_agents_win(state):
            return PlayOutcome.agents_win(rnd), trace
        key = (state, adversary.phase_key())
        if key in seen:
            return PlayOutcome.cycle(rnd, seen[key]), trace
        seen[key] = rnd
        if rnd >= cap:
            return PlayOutcome.cap(cap), trace
        choice = adversary.choose(g, state)
        mv = agents.moves(g, state, choice)
        nxt = apply_moves(g, state, choice, mv)
        rnd += 1
        if collect_trace:
            trace.append(
                {
                    "round": rnd,
                    "subgraph_edges": [list(e) for e in choice.edge_list()],
                    "positions_before": state.to_json_dict(),
                    "positions_after": nxt.to_json_dict(),
                    "knowledgeable_count": len(nxt.knowledgeable),
                }
            )
        state = nxt


def trace_to_jsonl(trace: list[dict]) -> str:
    return "\n".join(json.dumps(rec, sort_keys=True) for rec in trace) + (
        "\n" if trace else ""
    )
