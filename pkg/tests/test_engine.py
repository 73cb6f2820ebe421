"""Round mechanics: moves, knowledge spread, canonical states, play loop."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from broadcastgame.engine import (
    GameState,
    SpanningChoice,
    agent_move_options,
    apply_moves,
    initial_placements,
    is_agents_win,
    iter_move_vectors,
    make_state,
    play,
)
from broadcastgame.graphs import (
    Graph,
    GraphError,
    all_pairs_distances,
    complete_graph,
    cycle_graph,
    path_graph,
    spanning_trees,
)
from broadcastgame.strategies import cycle_adversary, rendezvous_tree_agents, OptimalAgents
from broadcastgame.solver import agents_attractor


def full_choice(g):
    return SpanningChoice(g, g.edges)


def test_is_agents_win():
    assert is_agents_win(make_state([0, 3], []))
    assert not is_agents_win(make_state([0], [0]))  # co-location is not enough
    assert not is_agents_win(make_state([2], [1, 1]))


def test_state_canonical():
    assert make_state([3, 0], [2, 1]) == GameState((0, 3), (1, 2))
    s = make_state([1], [2, 0])
    assert make_state(s.knowledgeable, s.ignorant) == s


def test_spanning_choice_validation():
    g = cycle_graph(4)
    with pytest.raises(GraphError):
        SpanningChoice(g, [(0, 2)])  # not an edge
    with pytest.raises(GraphError):
        SpanningChoice(g, [(0, 1), (1, 2)])  # does not span
    ch = SpanningChoice(g, [(0, 1), (1, 2), (2, 3)])
    assert ch.is_tree()


def test_initial_placements_counts():
    assert len(list(initial_placements(path_graph(3), 2))) == 6
    assert len(list(initial_placements(cycle_graph(4), 2))) == 12
    singles = list(initial_placements(cycle_graph(4), 1))
    assert len(singles) == 4 and all(is_agents_win(s) for s in singles)
    with pytest.raises(GraphError):
        list(initial_placements(path_graph(3), 4))


def test_apply_moves_knowledge_rules():
    p2 = path_graph(2)
    ch = full_choice(p2)
    s = make_state([0], [1])
    assert apply_moves(p2, s, ch, (0, 0)) == make_state([0, 0], [])
    # swapping along an edge transfers nothing
    assert apply_moves(p2, s, ch, (1, 0)) == make_state([1], [0])
    p3 = path_graph(3)
    s = make_state([0], [2])
    assert apply_moves(p3, s, full_choice(p3), (1, 1)) == make_state([1, 1], [])
    with pytest.raises(GraphError):
        apply_moves(p3, s, full_choice(p3), (2, 2))


def test_agent_move_options_p2():
    p2 = path_graph(2)
    opts = agent_move_options(p2, make_state([0], [1]), full_choice(p2))
    assert opts == {
        make_state([0, 0], []),
        make_state([1, 1], []),
        make_state([1], [0]),
        make_state([0], [1]),
    }


def test_move_options_bound_and_won_closure():
    g = cycle_graph(5)
    ch = full_choice(g)
    s = make_state([0], [2, 3])
    opts = agent_move_options(g, s, ch)
    bound = 1
    for v in s.positions():
        bound *= len(ch.options(v))
    assert len(opts) <= bound
    done = make_state([0, 2], [])
    assert all(not x.ignorant for x in agent_move_options(g, done, ch))


def _random_small_instance(rng):
    n = rng.randint(2, 6)
    pairs = list(itertools.combinations(range(n), 2))
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):  # random spanning tree first
        edges.add((min(a, b), max(a, b)))
    for e in pairs:
        if rng.random() < 0.3:
            edges.add(e)
    g = Graph(n, edges)
    k = rng.randint(2, min(4, n))
    know = rng.randint(1, k - 1)
    positions = [rng.randrange(n) for _ in range(k)]
    state = make_state(positions[:know], positions[know:])
    trees = list(spanning_trees(g))
    choice = SpanningChoice(g, trees[rng.randrange(len(trees))])
    return g, state, choice


def test_transition_invariants_random():
    rng = random.Random(7)
    for _ in range(300):
        g, s, ch = _random_small_instance(rng)
        mv = tuple(
            rng.choice(ch.options(v)) for v in s.positions()
        )
        nxt = apply_moves(g, s, ch, mv)
        # knowledge monotone, agent count constant
        assert len(nxt.knowledgeable) >= len(s.knowledgeable)
        assert nxt.total == s.total
        # separation shrinks by at most 2
        if s.ignorant and nxt.ignorant:
            dist = all_pairs_distances(g)
            def sep(state):
                return max(
                    min(dist[i][k] for k in state.knowledgeable)
                    for i in state.ignorant
                )
            assert sep(nxt) >= sep(s) - 2


def test_swap_rule():
    rng = random.Random(11)
    for _ in range(200):
        g, s, ch = _random_small_instance(rng)
        if not s.ignorant:
            continue
        a = s.knowledgeable[0]
        b = s.ignorant[0]
        if a == b or b not in ch.neighbors(a):
            continue
        mv = [a] + list(s.knowledgeable[1:]) + list(s.ignorant)
        mv[0] = b  # knowledgeable crosses
        idx = len(s.knowledgeable) + s.ignorant.index(b)
        mv[idx] = a  # ignorant crosses back
        nxt = apply_moves(g, s, ch, tuple(mv))
        assert len(nxt.knowledgeable) == len(s.knowledgeable)


def test_options_invariant_under_class_permutation():
    g = cycle_graph(5)
    ch = full_choice(g)
    s1 = make_state([0], [2, 3])
    s2 = make_state([0], [3, 2])
    assert s1 == s2
    assert agent_move_options(g, s1, ch) == agent_move_options(g, s2, ch)


# ---------------------------------------------------------------------------
# Play


def test_play_forced_tree_win():
    p3 = path_graph(3)
    outcome, _ = play(
        p3, make_state([0], [2]), cycle_adversary_stub(p3), rendezvous_tree_agents(1)
    )
    assert outcome.kind == "agents_win" and outcome.round == 1


class cycle_adversary_stub:
    """Any adversary on a tree is forced to offer the whole tree."""

    def __init__(self, g):
        self.g = g

    def reset(self):
        pass

    def phase_key(self):
        return None

    def set_phase(self, phase):
        pass

    def placement(self, g):
        return None

    def choose(self, g, state):
        return SpanningChoice(g, g.edges)


def test_play_already_won():
    p3 = path_graph(3)
    outcome, trace = play(
        p3, make_state([0, 2], []), cycle_adversary_stub(p3), rendezvous_tree_agents(1)
    )
    assert outcome.kind == "agents_win" and outcome.round == 0 and trace == []


def test_play_cycle_detection_on_c5():
    g = cycle_graph(5)
    table = agents_attractor(g, 2)
    outcome, trace = play(
        g,
        make_state([0], [2]),
        cycle_adversary(),
        OptimalAgents(table),
        cap=100,
        collect_trace=True,
    )
    assert outcome.kind == "cycle"
    assert all(rec["knowledgeable_count"] == 1 for rec in trace)


def test_trace_schema():
    g = cycle_graph(5)
    outcome, trace = play(
        g,
        make_state([0], [2]),
        cycle_adversary(),
        rendezvous_tree_agents(0),
        cap=5,
        collect_trace=True,
    )
    for rec in trace:
        assert set(rec) == {
            "round",
            "subgraph_edges",
            "positions_before",
            "positions_after",
            "knowledgeable_count",
        }


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=7), st.data())
def test_canonicalisation_idempotent(n, data):
    verts = st.integers(min_value=0, max_value=n - 1)
    know = data.draw(st.lists(verts, min_size=1, max_size=3))
    ign = data.draw(st.lists(verts, min_size=0, max_size=3))
    s = make_state(know, ign)
    assert make_state(s.knowledgeable, s.ignorant) == s
    assert s.knowledgeable == tuple(sorted(s.knowledgeable))
