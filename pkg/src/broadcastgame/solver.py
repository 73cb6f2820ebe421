"""Exact classification of the broadcast game by backward fixed point.

A position is a canonical multiset pair (knowledgeable, ignorant).  The
adversary moves first (picks a connected spanning subgraph), then the agents
move simultaneously.  The *attractor* is the least set of states from which
the agents can force the target no matter what the adversary plays; its rank
is the optimal number of remaining rounds.  A state has rank r+1 iff it is
not ranked <= r and for EVERY adversary choice there is SOME agents' move
into rank <= r.  States left unranked are adversary-safe.

Two reductions keep this exact but fast:

* Adversary choices are restricted to spanning trees.  Any connected
  spanning subgraph contains a spanning tree, and a subgraph only enlarges
  the agents' options relative to a tree inside it, so offering trees only
  is optimal for the adversary.  :func:`tree_reduction_equivalence_check`
  validates this empirically against full subgraph enumeration.
* For a given set of occupied vertices, a tree acts on the state only
  through the neighbourhoods of the occupied vertices.  Trees are therefore
  grouped by that neighbourhood signature, and signatures that dominate
  another one pointwise (offering strictly more options everywhere) are
  dropped: if the agents have a good reply to the smaller option set they
  have one to the larger.

The fixed point is computed by layered backward propagation with
need-counters over the (state, signature) pairs, which is linear in the
size of the transition relation and yields exact ranks.
"""

from __future__ import annotations

import itertools
from array import array
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from .engine import (
    GameState,
    SpanningChoice,
    agent_move_options,
    apply_moves,
    initial_placements,
    is_agents_win,
    successor_states,
)
from .graphs import Graph, GraphError, connected_spanning_subgraphs, is_connected, spanning_trees

__all__ = [
    "BudgetExceeded",
    "AttractorTable",
    "Classification",
    "GoalOutcome",
    "ConfigClassification",
    "Counterexample",
    "AdversaryCounterline",
    "agents_attractor",
    "classify",
    "classify_config",
    "agents_can_win_within",
    "refute_adversary_strategy",
    "evaluate_agents_strategy",
    "tree_reduction_equivalence_check",
    "replay_optimal",
]

TREE_BUDGET = 50_000
STATE_BUDGET = 2_000_000

# Above this many distinct signatures for one occupied set, skip the
# quadratic antichain filter; keeping dominated signatures is only slower,
# never wrong.
_MINIMIZE_CAP = 4000


class BudgetExceeded(RuntimeError):
    """State count or spanning-tree count exceeded the configured budget."""


RawState = tuple[tuple[int, ...], tuple[int, ...]]


def _enumerate_states(n: int, total: int, min_k: int) -> list[RawState]:
    states: list[RawState] = []
    for a in range(max(min_k, 1), total + 1):
        for kpos in itertools.combinations_with_replacement(range(n), a):
            for ipos in itertools.combinations_with_replacement(range(n), total - a):
                states.append((kpos, ipos))
    return states


class _TransitionSystem:
    """Spanning trees, states, signatures and the predecessor relation for
    one (graph, agent count, minimum knowledgeable) triple."""

    def __init__(
        self,
        g: Graph,
        total: int,
        min_k: int,
        tree_budget: int = TREE_BUDGET,
        state_budget: int = STATE_BUDGET,
    ):
        if not is_connected(g):
            raise GraphError("the solver requires a connected graph")
        if total < 1:
            raise GraphError("need at least one agent")
        self.g = g
        self.total = total
        self.min_k = max(min_k, 1)

        self.tree_edges: list[frozenset[tuple[int, int]]] = []
        self.tree_nbrs: list[tuple[tuple[int, ...], ...]] = []
        for t in spanning_trees(g):
            if len(self.tree_edges) >= tree_budget:
                raise BudgetExceeded(
                    f"spanning tree budget {tree_budget} exceeded on {g!r}"
                )
            adj: list[list[int]] = [[] for _ in range(g.n)]
            for u, v in t:
                adj[u].append(v)
                adj[v].append(u)
            self.tree_edges.append(t)
            self.tree_nbrs.append(tuple(tuple(sorted(a)) for a in adj))

        self.states = _enumerate_states(g.n, total, self.min_k)
        if len(self.states) > state_budget:
            raise BudgetExceeded(
                f"state budget {state_budget} exceeded: {len(self.states)} states"
            )
        self.index: dict[RawState, int] = {s: i for i, s in enumerate(self.states)}
        self._sig_cache: dict[tuple[int, ...], list[tuple[tuple, int]]] = {}
        self._built = False
        self._pred: dict[int, array] = {}
        self._flat_state: Optional[array] = None
        self._need_base: Optional[list[int]] = None

    # -- signatures --------------------------------------------------------

    def sigs_for(self, occ: tuple[int, ...]) -> list[tuple[tuple, int]]:
        """Minimal neighbourhood signatures over all trees for the occupied
        vertices, each with the index of a tree realising it."""
        cached = self._sig_cache.get(occ)
        if cached is not None:
            return cached
        first: dict[tuple, int] = {}
        for ti, nbrs in enumerate(self.tree_nbrs):
            sig = tuple(nbrs[v] for v in occ)
            if sig not in first:
                first[sig] = ti
        items = list(first.items())
        if 1 < len(items) <= _MINIMIZE_CAP:
            sets = [tuple(frozenset(nb) for nb in sig) for sig, _ in items]
            keep = []
            for i, (sig, ti) in enumerate(items):
                dominated = False
                for j, other in enumerate(sets):
                    if j == i:
                        continue
                    if all(o <= s for o, s in zip(other, sets[i])) and other != sets[i]:
                        dominated = True
                        break
                if not dominated:
                    keep.append((sig, ti))
            items = keep
        self._sig_cache[occ] = items
        return items

    @staticmethod
    def _optmap(occ: tuple[int, ...], sig: tuple) -> dict[int, tuple[int, ...]]:
        return {v: (v,) + nb for v, nb in zip(occ, sig)}

    # -- transition relation ------------------------------------------------

    def build(self) -> None:
        if self._built:
            return
        pred: dict[int, list[int]] = defaultdict(list)
        flat_state = array("i")
        need = [0] * len(self.states)
        index = self.index
        for sid, (kpos, ipos) in enumerate(self.states):
            if not ipos:
                continue  # absorbing for every goal ranked here
            occ = tuple(sorted(set(kpos + ipos)))
            sigs = self.sigs_for(occ)
            need[sid] = len(sigs)
            for sig, _ti in sigs:
                optmap = self._optmap(occ, sig)
                fid = len(flat_state)
                flat_state.append(sid)
                for succ in successor_states(kpos, ipos, optmap.__getitem__):
                    pred[index[succ]].append(fid)
        self._pred = {k: array("i", v) for k, v in pred.items()}
        self._flat_state = flat_state
        self._need_base = need
        self._built = True

    def ranking(self, target_fn: Callable[[RawState], bool]) -> dict[int, int]:
        """Layered backward propagation; returns state id -> rank.

        ``target_fn`` must hold for every ignorant-empty state, since those
        states' outgoing transitions are not materialised.
        """
        self.build()
        assert self._flat_state is not None and self._need_base is not None
        rank: dict[int, int] = {}
        layer: list[int] = []
        for sid, st in enumerate(self.states):
            if target_fn(st):
                rank[sid] = 0
                layer.append(sid)
            elif not st[1]:
                raise GraphError("target must include every won state")
        need = list(self._need_base)
        sat = bytearray(len(self._flat_state))
        flat_state = self._flat_state
        pred = self._pred
        r = 0
        while layer:
            nxt: list[int] = []
            for x in layer:
                for fid in pred.get(x, ()):
                    if sat[fid]:
                        continue
                    sat[fid] = 1
                    s = flat_state[fid]
                    if s in rank:
                        continue
                    need[s] -= 1
                    if need[s] == 0:
                        rank[s] = r + 1
                        nxt.append(s)
            r += 1
            layer = nxt
        return rank


@dataclass
class AttractorTable:
    """Map from canonical state to optimal remaining rounds; absent states
    are adversary-safe."""

    graph: Graph
    total: int
    min_k: int
    target_kind: str
    _ts: _TransitionSystem
    _rank_by_sid: dict[int, int]
    _target_fn: Callable[[RawState], bool]

    def _sid(self, state: GameState) -> Optional[int]:
        return self._ts.index.get((state.knowledgeable, state.ignorant))

    def rank(self, state: GameState) -> Optional[int]:
        sid = self._sid(state)
        if sid is None:
            raise GraphError(f"state {state} outside the table's state space")
        return self._rank_by_sid.get(sid)

    def __contains__(self, state: GameState) -> bool:
        return self.rank(state) is not None

    def is_target(self, state: GameState) -> bool:
        return self._target_fn((state.knowledgeable, state.ignorant))

    @property
    def state_count(self) -> int:
        return len(self._ts.states)

    @property
    def iterations(self) -> int:
        return max(self._rank_by_sid.values(), default=0)

    def items(self):
        for sid, r in sorted(self._rank_by_sid.items()):
            k, i = self._ts.states[sid]
            yield GameState(k, i), r

    # -- extracted policies -------------------------------------------------

    def worst_choice(self, state: GameState) -> SpanningChoice:
        """An adversary tree maximising the best reply's rank (infinite if
        the state is adversary-safe and some signature traps the agents)."""
        ts = self._ts
        raw = (state.knowledgeable, state.ignorant)
        occ = tuple(sorted(set(raw[0] + raw[1])))
        best_ti = None
        best_val = -1
        for sig, ti in ts.sigs_for(occ):
            optmap = ts._optmap(occ, sig)
            worst = None
            for succ in successor_states(raw[0], raw[1], optmap.__getitem__):
                r = self._rank_by_sid.get(ts.index[succ])
                if r is None:
                    continue
                if worst is None or r < worst:
                    worst = r
            if worst is None:
                return SpanningChoice(self.graph, ts.tree_edges[ti])
            if worst > best_val:
                best_val = worst
                best_ti = ti
        assert best_ti is not None
        return SpanningChoice(self.graph, ts.tree_edges[best_ti])

    def best_move(self, state: GameState, choice: SpanningChoice) -> GameState:
        """The agents' rank-minimising reply to ``choice`` (ties broken by
        smallest canonical state)."""
        ts = self._ts
        best: Optional[tuple[int, RawState]] = None
        for succ in successor_states(
            state.knowledgeable, state.ignorant, choice.options
        ):
            r = self._rank_by_sid.get(ts.index[succ])
            if r is None:
                continue
            if best is None or (r, succ) < best:
                best = (r, succ)
        if best is None:
            raise GraphError("no ranked successor; state is adversary-safe")
        return GameState(*best[1])


def _attractor(
    g: Graph,
    total: int,
    min_k: int,
    target_fn: Callable[[RawState], bool],
    target_kind: str,
    tree_budget: int,
    state_budget: int,
    ts: Optional[_TransitionSystem] = None,
) -> AttractorTable:
    if ts is None:
        ts = _TransitionSystem(g, total, min_k, tree_budget, state_budget)
    rank = ts.ranking(target_fn)
    return AttractorTable(g, total, ts.min_k, target_kind, ts, rank, target_fn)


def agents_attractor(
    g: Graph,
    k: int,
    tree_budget: int = TREE_BUDGET,
    state_budget: int = STATE_BUDGET,
) -> AttractorTable:
    """The full-broadcast attractor for k agents: rank 0 exactly at the won
    states, adversary quantified over spanning trees."""
    return _attractor(
        g, k, 1, lambda st: not st[1], "all_knowledgeable", tree_budget, state_budget
    )


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    winner: str  # "agents" | "adversary"
    placement_rule: str  # "adversary" | "agents"
    optimal_time: Optional[int]
    witness_placement: Optional[GameState]
    state_count: int
    iterations: int

    def to_json_dict(self) -> dict:
        out = {
            "winner": self.winner,
            "placement_rule": self.placement_rule,
            "state_count": self.state_count,
            "iterations": self.iterations,
        }
        if self.optimal_time is not None:
            out["optimal_time"] = self.optimal_time
        if self.witness_placement is not None:
            out["witness_placement"] = self.witness_placement.to_json_dict()
        return out


def classify(
    g: Graph,
    k: int,
    rule: str = "adversary",
    tree_budget: int = TREE_BUDGET,
    state_budget: int = STATE_BUDGET,
) -> Classification:
    """Who wins the k-agent game on g, with exact optimal time when agents do.

    Under the standard rule the adversary chooses the initial placement, so
    it wins iff some placement is outside the attractor and the agents'
    optimal time is the worst-case rank.  Under the agents-place rule the
    quantifiers flip.
    """
    if rule not in ("adversary", "agents"):
        raise GraphError(f"unknown placement rule {rule!r}")
    if not 1 <= k <= g.n:
        raise GraphError(f"need 1 <= k <= {g.n} agents, got {k}")
    table = agents_attractor(g, k, tree_budget, state_budget)
    placements = list(initial_placements(g, k))
    ranks = [(p, table.rank(p)) for p in placements]
    outside = [p for p, r in ranks if r is None]
    if rule == "adversary":
        if outside:
            return Classification(
                "adversary", rule, None, min(outside), table.state_count,
                table.iterations,
            )
        time = max(r for _, r in ranks)
        return Classification(
            "agents", rule, time, None, table.state_count, table.iterations
        )
    inside = [(r, p) for p, r in ranks if r is not None]
    if inside:
        time, _p = min(inside)
        return Classification(
            "agents", rule, time, None, table.state_count, table.iterations
        )
    return Classification(
        "adversary", rule, None, min(placements), table.state_count, table.iterations
    )


@dataclass(frozen=True)
class GoalOutcome:
    winner: str
    time: Optional[int] = None
    witness_placement: Optional[GameState] = None

    def to_json_dict(self) -> dict:
        out: dict = {"winner": self.winner}
        if self.time is not None:
            out["time"] = self.time
        if self.witness_placement is not None:
            out["witness_placement"] = self.witness_placement.to_json_dict()
        return out


@dataclass(frozen=True)
class ConfigClassification:
    """Worst-case-over-placements times for the generalized start with y
    knowledgeable and x ignorant agents on distinct vertices."""

    x: int
    y: int
    first_spread: Optional[GoalOutcome]  # None when x == 0
    win: GoalOutcome
    state_count: int

    def to_json_dict(self) -> dict:
        out = {
            "x": self.x,
            "y": self.y,
            "win": self.win.to_json_dict(),
            "state_count": self.state_count,
        }
        if self.first_spread is not None:
            out["first_spread"] = self.first_spread.to_json_dict()
        return out


def classify_config(
    g: Graph,
    x: int,
    y: int,
    tree_budget: int = TREE_BUDGET,
    state_budget: int = STATE_BUDGET,
) -> ConfigClassification:
    """Times until the first extra agent knows, and until everyone knows.

    The adversary places all x+y agents on distinct vertices, so each goal's
    time is the maximum rank over placements under that goal's own
    attractor; if any placement is adversary-safe the goal is an adversary
    win and carries that placement as a witness.
    """
    if y < 1:
        raise GraphError("need at least one knowledgeable agent")
    if x < 0 or x + y > g.n:
        raise GraphError("need 0 <= x and x + y <= vertex count")
    if x == 0:
        return ConfigClassification(x, y, None, GoalOutcome("agents", 0), 0)
    total = x + y
    ts = _TransitionSystem(g, total, y, tree_budget, state_budget)
    win_table = _attractor(
        g, total, y, lambda st: not st[1], "all_knowledgeable",
        tree_budget, state_budget, ts=ts,
    )
    spread_table = _attractor(
        g, total, y, lambda st: len(st[0]) > y, "first_spread",
        tree_budget, state_budget, ts=ts,
    )
    placements = [
        GameState(kpos, ipos)
        for kpos in itertools.combinations(range(g.n), y)
        for ipos in itertools.combinations(
            [v for v in range(g.n) if v not in kpos], x
        )
    ]
    # placements overlap as unordered pairs of sets; dedup canonically
    placements = sorted(set(placements))

    def goal(table: AttractorTable) -> GoalOutcome:
        worst = -1
        for p in placements:
            r = table.rank(p)
            if r is None:
                return GoalOutcome("adversary", witness_placement=p)
            worst = max(worst, r)
        return GoalOutcome("agents", time=worst)

    return ConfigClassification(
        x, y, goal(spread_table), goal(win_table), win_table.state_count
    )


# ---------------------------------------------------------------------------
# Bounded win search (no full table needed)


class _LazyTreeNeighbourhoods:
    """Spanning-tree neighbourhood tables, materialised only as far as a
    consumer actually iterates (an adversary-traps-the-agents proof usually
    needs just the first tree)."""

    def __init__(self, g: Graph, budget: int):
        self._gen = spanning_trees(g)
        self._budget = budget
        self._n = g.n
        self._built: list[tuple[tuple[int, ...], ...]] = []

    def __iter__(self):
        i = 0
        while True:
            if i < len(self._built):
                yield self._built[i]
            else:
                t = next(self._gen, None)
                if t is None:
                    return
                if len(self._built) >= self._budget:
                    raise BudgetExceeded(
                        f"spanning tree budget {self._budget} exceeded"
                    )
                adj: list[list[int]] = [[] for _ in range(self._n)]
                for u, v in t:
                    adj[u].append(v)
                    adj[v].append(u)
                self._built.append(tuple(tuple(sorted(a)) for a in adj))
                yield self._built[i]
            i += 1


def agents_can_win_within(
    g: Graph, s0: GameState, rounds: int, tree_budget: int = TREE_BUDGET
) -> bool:
    """Can the agents force a win in at most ``rounds`` rounds from ``s0``?

    Lazy depth-bounded version of the attractor membership test
    (equivalently: rank(s0) <= rounds), used for lower-bound checks where
    building the full table would be wasteful.
    """
    if is_agents_win(s0):
        return True
    if rounds <= 0:
        return False
    trees = _LazyTreeNeighbourhoods(g, tree_budget)
    memo: dict[tuple[RawState, int], bool] = {}

    def rec(raw: RawState, t: int) -> bool:
        if not raw[1]:
            return True
        if t == 0:
            return False
        key = (raw, t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        for tree in trees:
            found = False
            for succ in successor_states(
                raw[0], raw[1], lambda v: (v,) + tree[v]
            ):
                if rec(succ, t - 1):
                    found = True
                    break
            if not found:
                memo[key] = False
                return False
        memo[key] = True
        return True

    return rec((s0.knowledgeable, s0.ignorant), rounds)


# ---------------------------------------------------------------------------
# Strategy refutation harnesses


@dataclass(frozen=True)
class Counterexample:
    """An initial placement plus a move sequence by which the agents win
    against a fixed adversary strategy."""

    placement: GameState
    rounds: tuple[tuple[frozenset, GameState], ...]  # (choice edges, state after)

    def __len__(self) -> int:
        return len(self.rounds)


def _agents_win_search(g: Graph, s0: GameState, adv) -> Optional[Counterexample]:
    """BFS over (state, adversary phase) with the agents moving freely."""
    adv.reset()
    start: tuple = (s0, adv.phase_key())
    parent: dict[tuple, Optional[tuple]] = {start: None}
    step: dict[tuple, tuple] = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        state, phase = node
        if is_agents_win(state):
            rounds = []
            cur = node
            while parent[cur] is not None:
                prev = parent[cur]
                edges, after = step[cur]
                rounds.append((edges, after))
                cur = prev
            return Counterexample(s0, tuple(reversed(rounds)))
        adv.set_phase(phase)
        choice = adv.choose(g, state)
        nphase = adv.phase_key()
        for succ in sorted(agent_move_options(g, state, choice)):
            nxt = (succ, nphase)
            if nxt not in parent:
                parent[nxt] = node
                step[nxt] = (choice.edges, succ)
                queue.append(nxt)
    return None


def refute_adversary_strategy(
    g: Graph, k: int, adv, placement_rule: str = "adversary"
) -> Optional[Counterexample]:
    """Search the one-player game with the adversary fixed to ``adv``.

    If the strategy designates its own initial placement, the search runs
    from there.  Otherwise under the adversary-places rule the strategy
    survives (returns None) iff SOME placement defeats every agents' line;
    under the agents-place rule it must hold from EVERY placement.
    """
    designated = adv.placement(g)
    if designated is not None:
        return _agents_win_search(g, designated, adv)
    first_ce: Optional[Counterexample] = None
    for p in initial_placements(g, k):
        ce = _agents_win_search(g, p, adv)
        if placement_rule == "adversary":
            if ce is None:
                return None
            if first_ce is None:
                first_ce = ce
        else:
            if ce is not None:
                return ce
    return first_ce if placement_rule == "adversary" else None


@dataclass(frozen=True)
class AdversaryCounterline:
    """A tree sequence after which the fixed agents strategy is back in an
    already-seen configuration, hence never wins."""

    start: GameState
    choices: tuple[frozenset, ...]


class _CycleHit(Exception):
    def __init__(self):
        super().__init__("agents strategy trapped in a cycle")
        self.choices: list[frozenset] = []


def evaluate_agents_strategy(
    g: Graph, s0: GameState, ag, tree_budget: int = TREE_BUDGET
) -> Union[int, AdversaryCounterline]:
    """Worst-case win time of a fixed agents strategy over all adversary
    tree sequences, or a counterline witnessing that it never wins."""
    trees = []
    for count, t in enumerate(spanning_trees(g)):
        if count >= tree_budget:
            raise BudgetExceeded(f"spanning tree budget {tree_budget} exceeded")
        trees.append(SpanningChoice(g, t))
    ag.reset()
    memo: dict[tuple, Optional[int]] = {}
    ONSTACK = None  # sentinel value inside memo

    def rec(node: tuple) -> int:
        state, phase = node
        if is_agents_win(state):
            return 0
        if node in memo:
            val = memo[node]
            if val is ONSTACK:
                raise _CycleHit()
            return val
        memo[node] = ONSTACK
        best = 0
        for ch in trees:
            ag.set_phase(phase)
            mv = ag.moves(g, state, ch)
            nphase = ag.phase_key()
            nxt = apply_moves(g, state, ch, mv)
            try:
                val = rec((nxt, nphase))
            except _CycleHit as hit:
                hit.choices.append(ch.edges)
                raise
            best = max(best, val + 1)
        memo[node] = best
        return best

    try:
        return rec((s0, ag.phase_key()))
    except _CycleHit as hit:
        return AdversaryCounterline(s0, tuple(reversed(hit.choices)))


# ---------------------------------------------------------------------------
# Independent naive route and the tree-reduction check


def naive_attractor(
    g: Graph,
    total: int,
    min_k: int,
    choices: Iterable[SpanningChoice],
    target_fn: Callable[[RawState], bool],
) -> dict[RawState, int]:
    """Plain iterated fixed point over explicit choices; the slow oracle the
    optimised solver is checked against."""
    choices = list(choices)
    states = _enumerate_states(g.n, total, min_k)
    rank: dict[RawState, int] = {s: 0 for s in states if target_fn(s)}
    r = 0
    while True:
        r += 1
        new = []
        for s in states:
            if s in rank:
                continue
            ok = True
            for ch in choices:
                if not any(
                    succ in rank
                    for succ in successor_states(s[0], s[1], ch.options)
                ):
                    ok = False
                    break
            if ok:
                new.append(s)
        if not new:
            return rank
        for s in new:
            rank[s] = r


def tree_reduction_equivalence_check(g: Graph, k: int) -> bool:
    """Does quantifying the adversary over spanning trees only give the same
    attractor (membership and ranks) as over all connected spanning
    subgraphs?  Exhaustive; capped at 12 edges."""
    if len(g.edges) > 12:
        raise GraphError("tree_reduction_equivalence_check capped at 12 edges")
    target = lambda st: not st[1]
    via_trees = naive_attractor(
        g, k, 1, (SpanningChoice(g, t) for t in spanning_trees(g)), target
    )
    via_subgraphs = naive_attractor(
        g, k, 1,
        (SpanningChoice(g, s) for s in connected_spanning_subgraphs(g)),
        target,
    )
    return via_trees == via_subgraphs


# ---------------------------------------------------------------------------
# Optimal-policy replay


def replay_optimal(
    g: Graph, table: AttractorTable, s0: GameState
) -> list[tuple[GameState, SpanningChoice, GameState]]:
    """Play the table's own worst adversary against its own best agents from
    ``s0``; the number of rounds equals rank(s0) exactly."""
    r = table.rank(s0)
    if r is None:
        raise GraphError("cannot replay from an adversary-safe state")
    out = []
    state = s0
    while not table.is_target(state):
        choice = table.worst_choice(state)
        nxt = table.best_move(state, choice)
        out.append((state, choice, nxt))
        state = nxt
    return out
