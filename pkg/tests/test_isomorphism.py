"""Canonical forms, isomorphism search, and the small-graph catalogues."""

from broadcastgame.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    path_graph,
    theta_graph,
)
from broadcastgame.isomorphism import (
    all_trees,
    automorphisms,
    canonical_key,
    connected_graph_classes,
    is_isomorphic,
    tree_canonical_key,
)


def test_is_isomorphic_positive_and_negative():
    assert is_isomorphic(theta_graph((3, 3)), cycle_graph(6))
    relabeled = Graph(4, [(2, 3), (1, 2), (0, 3)])
    assert is_isomorphic(relabeled, path_graph(4))
    assert not is_isomorphic(path_graph(4), Graph(4, [(0, 1), (0, 2), (0, 3)]))
    assert not is_isomorphic(cycle_graph(5), path_graph(5))


def test_canonical_key_partitions_by_isomorphism():
    graphs = [
        cycle_graph(5),
        Graph(5, [(1, 2), (2, 3), (3, 4), (4, 0), (0, 1)]),
        path_graph(5),
        Graph(5, [(4, 3), (3, 2), (2, 1), (1, 0)]),
    ]
    keys = [canonical_key(g) for g in graphs]
    assert keys[0] == keys[1]
    assert keys[2] == keys[3]
    assert keys[0] != keys[2]


def test_automorphisms_counts():
    assert sum(1 for _ in automorphisms(cycle_graph(5))) == 10  # dihedral
    assert sum(1 for _ in automorphisms(path_graph(4))) == 2
    assert sum(1 for _ in automorphisms(complete_graph(4))) == 24


def test_tree_canonical_key():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    star_relabeled = Graph(4, [(3, 0), (3, 1), (3, 2)])
    assert tree_canonical_key(star) == tree_canonical_key(star_relabeled)
    assert tree_canonical_key(star) != tree_canonical_key(path_graph(4))


def test_tree_catalogue_counts():
    # classical counts of tree shapes on 1..8 vertices
    expected = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23}
    for n, want in expected.items():
        trees = all_trees(n)
        assert len(trees) == want
        for t in trees:
            assert t.n == n and len(t.edges) == n - 1


def test_connected_catalogue_counts():
    # classical counts of connected graphs on 1..7 vertices
    expected = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}
    for n, want in expected.items():
        classes = connected_graph_classes(n)
        assert len(classes) == want
    # catalogue entries are pairwise non-isomorphic (spot check one size)
    five = connected_graph_classes(5)
    keys = {canonical_key(g) for g in five}
    assert len(keys) == len(five)
