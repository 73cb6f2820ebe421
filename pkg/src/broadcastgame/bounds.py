"""Time metrics: set diameters, separation lower bounds, closed forms.

Rounds are integral, so every half-distance bound is taken with a ceiling.
The separation of a state is the longest nearest-informed distance over the
ignorant agents: it can shrink by at most two per round (both endpoints of
a pair move one edge), which makes ceil(separation / 2) a one-sided lower
bound on the agents' time regardless of who ends up winning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import GameState, make_state
from .graphs import Graph, GraphError, all_pairs_distances, diameter, is_connected

__all__ = [
    "TimeBound",
    "y_set_diameter",
    "initial_separation",
    "time_lower_bound",
    "path_time_bounds",
    "tree_two_agent_bound",
    "placement_for_bound",
]


@dataclass(frozen=True)
class TimeBound:
    kind: str  # "lower" | "exact"
    rounds: int
    justification: str

    def __post_init__(self):
        if self.rounds < 0:
            raise GraphError("bounds are non-negative")


def _ceil_half(d: int) -> int:
    return (d + 1) // 2


def y_set_diameter(g: Graph, y: int) -> int:
    """Max over vertices v of the distance from v to the best-avoiding set
    of y vertices (v itself excluded from the set).

    For a fixed v the set maximising the nearest distance is simply the y
    vertices farthest from v, so the value is the y-th largest distance
    from v; tests cross-check this shortcut against full enumeration.
    """
    if not 1 <= y < g.n:
        raise GraphError(f"need 1 <= y < {g.n}, got {y}")
    dist = all_pairs_distances(g)
    best = 0
    for v in range(g.n):
        others = sorted((dist[v][u] for u in range(g.n) if u != v), reverse=True)
        best = max(best, others[y - 1])
    return best


def initial_separation(g: Graph, s: GameState) -> int:
    """Max over ignorant agents of the distance to the nearest informed one.

    This is the reading under which the two-per-round contraction argument
    goes through; the max-over-all-pairs reading would be broken by a second
    informed agent standing next to the far ignorant one.
    """
    if not s.knowledgeable or not s.ignorant:
        raise GraphError("separation needs agents on both sides")
    dist = all_pairs_distances(g)
    return max(
        min(dist[i][k] for k in s.knowledgeable) for i in s.ignorant
    )


def time_lower_bound(g: Graph, s: GameState) -> TimeBound:
    """ceil(separation / 2): one-sided, and void when the adversary wins."""
    return TimeBound("lower", _ceil_half(initial_separation(g, s)), "separation/2")


def path_time_bounds(n: int, x: int, y: int) -> dict[str, int]:
    """Closed forms for the path on n vertices with x ignorant and y informed
    agents: ceil((n-x-y)/2) until the first extra agent knows and
    ceil((n-y)/2) until everyone does."""
    if x < 1 or y < 1 or x + y > n:
        raise GraphError("need x >= 1, y >= 1, x + y <= n")
    return {
        "first_spread": _ceil_half(n - x - y),
        "all_knowledgeable": _ceil_half(n - y),
    }


def tree_two_agent_bound(t: Graph) -> int:
    """ceil(diameter / 2): exact optimal time for two agents on a tree."""
    if not is_connected(t) or len(t.edges) != t.n - 1:
        raise GraphError("tree_two_agent_bound requires a tree")
    return _ceil_half(diameter(t))


def placement_for_bound(g: Graph, x: int, y: int) -> GameState:
    """A placement realising the y-set-diameter as its separation.

    The informed agents go on a set achieving the y-set-diameter, one
    ignorant agent on the achieving far vertex, the remaining ignorant ones
    on the lowest free vertices; the separation then equals the y-set
    diameter exactly (no free vertex can beat the achieving one).
    """
    if x < 1 or y < 1 or x + y > g.n:
        raise GraphError("need x >= 1, y >= 1, x + y <= vertex count")
    dist = all_pairs_distances(g)
    best: Optional[tuple[int, int, tuple[int, ...]]] = None  # (-sep, v, set)
    for v in range(g.n):
        ranked = sorted(
            (u for u in range(g.n) if u != v),
            key=lambda u: (-dist[v][u], u),
        )
        sset = tuple(sorted(ranked[:y]))
        sep = min(dist[v][u] for u in sset)
        key = (-sep, v, sset)
        if best is None or key < best:
            best = key
    sep, far, sset = -best[0], best[1], best[2]
    ignorant = [far]
    for u in range(g.n):
        if len(ignorant) == x:
            break
        if u != far and u not in sset:
            ignorant.append(u)
    if len(ignorant) < x:
        raise GraphError("not enough free vertices for the ignorant agents")
    state = make_state(sset, ignorant)
    assert initial_separation(g, state) == sep
    return state
