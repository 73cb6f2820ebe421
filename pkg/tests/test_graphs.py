"""Graph representation, families, structural queries, constructions."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from broadcastgame.graphs import (
    ContractionMap,
    FamilySpec,
    Graph,
    GraphError,
    all_pairs_distances,
    attach_paths,
    binary_tree_graph,
    bridges,
    circumference,
    clique_number,
    complete_graph,
    connected_spanning_subgraphs,
    contract_bridges,
    cut_vertices,
    cycle_graph,
    diameter,
    format_edge_list,
    generate,
    grid_graph,
    is_connected,
    is_hamiltonian,
    parse_edge_list,
    path_graph,
    spanning_trees,
    theta_graph,
    vertex_sum,
)
from broadcastgame.isomorphism import connected_graph_classes, is_isomorphic


# ---------------------------------------------------------------------------
# Brute-force oracles


def brute_cut_vertices(g: Graph) -> set:
    out = set()
    for v in range(g.n):
        rest = [u for u in range(g.n) if u != v]
        relabel = {u: i for i, u in enumerate(rest)}
        h = Graph(
            g.n - 1,
            [(relabel[a], relabel[b]) for a, b in g.edges if a != v and b != v],
        )
        if not is_connected(h):
            out.add(v)
    return out


def brute_bridges(g: Graph) -> set:
    out = set()
    for e in g.edges:
        h = Graph(g.n, g.edges - {e})
        if not is_connected(h):
            out.add(e)
    return out


def kirchhoff_tree_count(g: Graph) -> int:
    lap = np.zeros((g.n, g.n))
    for u, v in g.edges:
        lap[u, u] += 1
        lap[v, v] += 1
        lap[u, v] -= 1
        lap[v, u] -= 1
    return round(np.linalg.det(lap[1:, 1:]))


def brute_hamiltonian(g: Graph) -> bool:
    if g.n < 3:
        return False
    verts = list(range(1, g.n))
    for perm in itertools.permutations(verts):
        cyc = (0,) + perm
        if all(g.has_edge(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n)):
            return True
    return False


# ---------------------------------------------------------------------------
# Parsing


def test_parse_edge_list_basic():
    g = parse_edge_list("0 1\n1 2")
    assert g.n == 3 and g.edges == frozenset({(0, 1), (1, 2)})


def test_parse_edge_list_dedup():
    g = parse_edge_list("0 1\n1 0")
    assert g.n == 2 and len(g.edges) == 1


def test_parse_edge_list_self_loop():
    with pytest.raises(GraphError):
        parse_edge_list("0 0")


def test_parse_edge_list_comments_and_malformed():
    g = parse_edge_list("# header\n0 1  # inline\n\n1 2")
    assert g.n == 3
    with pytest.raises(GraphError):
        parse_edge_list("0 1 2")
    with pytest.raises(GraphError):
        parse_edge_list("a b")


def test_format_round_trip():
    g = grid_graph(3, 3)
    assert parse_edge_list(format_edge_list(g)) == g


# ---------------------------------------------------------------------------
# Families


def test_generate_families():
    assert generate(FamilySpec("cycle", (5,))).n == 5
    assert len(generate(FamilySpec("cycle", (5,))).edges) == 5
    t = generate(FamilySpec("theta", (3, 3)))
    assert t.n == 6 and len(t.edges) == 6
    assert is_isomorphic(t, cycle_graph(6))
    g23 = generate(FamilySpec("grid", (2, 3)))
    assert g23.n == 6 and len(g23.edges) == 7


def test_family_counting_identities():
    for n in range(1, 9):
        p = path_graph(n)
        assert p.n == n and len(p.edges) == n - 1
        if n >= 3:
            c = cycle_graph(n)
            assert c.n == n and len(c.edges) == n
        k = complete_graph(n)
        assert len(k.edges) == n * (n - 1) // 2
    for rows in range(1, 9):
        for cols in range(1, 9):
            g = grid_graph(rows, cols)
            assert g.n == rows * cols
            assert len(g.edges) == (rows - 1) * cols + rows * (cols - 1)
    for lengths in [(1, 2), (2, 2), (3, 3), (2, 3, 4), (1, 2, 2, 3)]:
        t = theta_graph(lengths)
        assert t.n == 2 + sum(d - 1 for d in lengths)
        assert len(t.edges) == sum(lengths)
    for depth in range(1, 9):
        b = binary_tree_graph(depth)
        assert b.n == 2 ** (depth + 1) - 1
        assert len(b.edges) == b.n - 1


def test_theta_unit_paths():
    assert theta_graph((1, 2)).n == 3  # a triangle
    with pytest.raises(GraphError):
        theta_graph((1, 1, 3))


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 5)])


# ---------------------------------------------------------------------------
# Connectivity, separators


def test_is_connected():
    assert is_connected(cycle_graph(4))
    assert not is_connected(Graph(4, [(0, 1), (2, 3)]))
    assert is_connected(Graph(1, []))
    assert is_connected(Graph(0, []))


def test_cut_vertices_examples():
    assert cut_vertices(path_graph(3)) == frozenset({1})
    assert cut_vertices(cycle_graph(5)) == frozenset()
    two_c5 = vertex_sum(cycle_graph(5), 0, cycle_graph(5), 0)
    assert cut_vertices(two_c5) == frozenset(brute_cut_vertices(two_c5)) == {0}
    mixed = vertex_sum(cycle_graph(4), 0, complete_graph(3), 0)
    assert cut_vertices(mixed) == frozenset(brute_cut_vertices(mixed)) == {0}


def test_bridges_examples():
    assert bridges(path_graph(4)) == frozenset(path_graph(4).edges)
    assert bridges(cycle_graph(6)) == frozenset()
    lollipop = attach_paths(complete_graph(4), {0: 2})
    assert bridges(lollipop) == frozenset(brute_bridges(lollipop))
    assert bridges(lollipop) == {(0, 4), (4, 5)}


def test_separators_match_brute_force_on_all_small_graphs():
    for n in range(2, 7):
        for g in connected_graph_classes(n):
            assert cut_vertices(g) == frozenset(brute_cut_vertices(g))
            assert bridges(g) == frozenset(brute_bridges(g))


def test_disconnected_inputs_rejected():
    g = Graph(4, [(0, 1), (2, 3)])
    for fn in (cut_vertices, bridges, all_pairs_distances):
        with pytest.raises(GraphError):
            fn(g)


# ---------------------------------------------------------------------------
# Distances


def test_distances():
    d = all_pairs_distances(path_graph(4))
    assert d[0][3] == 3 and d[0][0] == 0
    assert all_pairs_distances(cycle_graph(6))[0][3] == 3
    k5 = all_pairs_distances(complete_graph(5))
    assert all(k5[u][v] == 1 for u in range(5) for v in range(5) if u != v)


def test_distance_matrix_properties():
    for g in [grid_graph(3, 3), theta_graph((2, 3, 4)), binary_tree_graph(3)]:
        d = all_pairs_distances(g)
        for u in range(g.n):
            assert d[u][u] == 0
            for v in range(g.n):
                assert d[u][v] == d[v][u]
                for w in range(g.n):
                    assert d[u][w] <= d[u][v] + d[v][w]


def test_diameter():
    for n in range(2, 8):
        assert diameter(path_graph(n)) == n - 1
    assert diameter(binary_tree_graph(3)) == 6
    assert diameter(complete_graph(7)) == 1


# ---------------------------------------------------------------------------
# Spanning structure enumeration


def test_spanning_trees_examples():
    assert sum(1 for _ in spanning_trees(cycle_graph(4))) == 4
    k4_trees = list(spanning_trees(complete_graph(4)))
    assert len(k4_trees) == len(set(k4_trees)) == 16 == kirchhoff_tree_count(
        complete_graph(4)
    )
    t = binary_tree_graph(2)
    assert list(spanning_trees(t)) == [t.edges]


def test_connected_spanning_subgraph_examples():
    assert sum(1 for _ in connected_spanning_subgraphs(cycle_graph(4))) == 5
    assert sum(1 for _ in connected_spanning_subgraphs(path_graph(3))) == 1
    assert sum(1 for _ in connected_spanning_subgraphs(cycle_graph(3))) == 4


def test_spanning_tree_enumeration_agrees_with_subgraph_filter():
    for n in range(2, 7):
        for g in connected_graph_classes(n):
            if len(g.edges) > 12:
                continue
            trees = set(spanning_trees(g))
            filtered = {
                s for s in connected_spanning_subgraphs(g) if len(s) == g.n - 1
            }
            assert trees == filtered
            assert len(trees) == kirchhoff_tree_count(g)


# ---------------------------------------------------------------------------
# Exhaustive structural queries


def test_clique_number():
    assert clique_number(complete_graph(5)) == 5
    assert clique_number(cycle_graph(5)) == 2
    assert clique_number(vertex_sum(complete_graph(4), 0, path_graph(3), 0)) == 4


def test_circumference():
    assert circumference(cycle_graph(6)) == 6
    assert circumference(binary_tree_graph(2)) == 0
    assert circumference(complete_graph(4)) == 4
    assert circumference(theta_graph((2, 3))) == 5


def test_hamiltonicity():
    assert is_hamiltonian(complete_graph(5))
    assert not is_hamiltonian(path_graph(5))
    assert brute_hamiltonian(grid_graph(2, 3))
    assert is_hamiltonian(grid_graph(2, 3))
    assert not is_hamiltonian(grid_graph(1, 3))


def test_exhaustive_queries_capped():
    big = path_graph(13)
    for fn in (clique_number, circumference):
        with pytest.raises(GraphError):
            fn(big)


# ---------------------------------------------------------------------------
# Constructions


def test_vertex_sum_examples():
    p3 = vertex_sum(path_graph(2), 1, path_graph(2), 0)
    assert is_isomorphic(p3, path_graph(3))
    two_c5 = vertex_sum(cycle_graph(5), 0, cycle_graph(5), 0)
    assert two_c5.n == 9 and len(two_c5.edges) == 10
    assert cut_vertices(two_c5) == {0}
    with pytest.raises(GraphError):
        vertex_sum(path_graph(2), 5, path_graph(2), 0)


def test_attach_paths_examples():
    g = attach_paths(cycle_graph(3), {0: 1})
    assert g.n == 4 and len(g.edges) == 4
    base = theta_graph((2, 3))
    assert attach_paths(base, {}) == base
    assert attach_paths(base, {0: 0, 1: 0}) == base


def test_attach_then_contract_round_trip():
    for base in [cycle_graph(4), theta_graph((2, 2)), complete_graph(4)]:
        grown = attach_paths(base, {0: 2, 2: 1})
        new_edges = grown.edges - base.edges
        shrunk, cmap = contract_bridges(grown, new_edges)
        cmap.validate()
        assert is_isomorphic(shrunk, base)


def test_contract_bridges_examples():
    g, cmap = contract_bridges(path_graph(3), path_graph(3).edges)
    assert g.n == 1 and not g.edges
    cmap.validate()
    pend = attach_paths(cycle_graph(5), {1: 1})
    shrunk, _ = contract_bridges(pend, bridges(pend))
    assert is_isomorphic(shrunk, cycle_graph(5))
    with pytest.raises(GraphError):
        contract_bridges(cycle_graph(5), [(0, 1)])


def test_contraction_preserves_cycle_space():
    for n in range(3, 7):
        for g in connected_graph_classes(n):
            br = bridges(g)
            if not br:
                continue
            shrunk, cmap = contract_bridges(g, br)
            cmap.validate()
            assert len(g.edges) - g.n + 1 == len(shrunk.edges) - shrunk.n + 1


# ---------------------------------------------------------------------------
# Property tests


@st.composite
def small_graph_text(draw):
    n = draw(st.integers(min_value=2, max_value=7))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(
        st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs))
    )
    lines = [f"{u} {v}" for u, v in chosen]
    return "\n".join(lines)


@settings(max_examples=60, deadline=None)
@given(small_graph_text())
def test_parse_format_round_trip(text):
    g = parse_edge_list(text)
    assert parse_edge_list(format_edge_list(g)) == g
