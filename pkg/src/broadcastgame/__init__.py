"""Exact analysis of the broadcast game on adversarially rewired networks.

k mobile agents live on a graph; one starts informed.  Each round an
adversary picks a connected spanning subgraph, the agents each hold or move
one edge within it, and information spreads by co-location.  This package
classifies who wins by exact fixed point, ships the named strategies for
both sides together with the strategy-lifting constructions, checks the
spanning-tree-symmetry criterion, and computes the time bounds, all at desk
scale with machine-checked witnesses.
"""

from .graphs import (
    Graph,
    GraphError,
    FamilySpec,
    ContractionMap,
    generate,
    parse_edge_list,
    format_edge_list,
    path_graph,
    cycle_graph,
    complete_graph,
    grid_graph,
    theta_graph,
    binary_tree_graph,
    is_connected,
    cut_vertices,
    bridges,
    all_pairs_distances,
    diameter,
    spanning_trees,
    connected_spanning_subgraphs,
    clique_number,
    circumference,
    is_hamiltonian,
    vertex_sum,
    attach_paths,
    contract_bridges,
)
from .engine import (
    GameState,
    SpanningChoice,
    PlayOutcome,
    make_state,
    is_agents_win,
    initial_placements,
    apply_moves,
    agent_move_options,
    play,
)
from .solver import (
    BudgetExceeded,
    AttractorTable,
    Classification,
    ConfigClassification,
    agents_attractor,
    classify,
    classify_config,
    agents_can_win_within,
    refute_adversary_strategy,
    evaluate_agents_strategy,
    tree_reduction_equivalence_check,
    replay_optimal,
)
from .strategies import (
    AdversaryStrategy,
    AgentsStrategy,
    rendezvous_tree_agents,
    cycle_adversary,
    greedy_to_source_agents,
    grid_alternating_adversary,
    restrict_to_subgraph,
    cut_vertex_lift,
    contract_lift_agents,
    expand_lift_agents,
    sts_adversary,
    OptimalAdversary,
    OptimalAgents,
)
from .symmetry import (
    one_step_functions,
    extends_to_tree_isomorphism,
    StsWitness,
    has_k_sts,
)
from .bounds import (
    TimeBound,
    y_set_diameter,
    initial_separation,
    time_lower_bound,
    path_time_bounds,
    tree_two_agent_bound,
    placement_for_bound,
)

__version__ = "0.1.0"
