import numpy as np
import pytest

from apwalks.network import (
    CORNER_PERMUTATIONS,
    GENERATION_CAP,
    CapacityError,
    NodePermutation,
    corner_automorphism,
    corner_group,
    generate_apollonian,
    is_automorphism,
    laplacian,
    node_count_for_generation,
    orbits,
    shortest_path_length,
)

# Expected parent triangles at G=3 under creation-order labeling.
G3_PARENTS = {
    4: (1, 2, 3),
    5: (1, 2, 4),
    6: (1, 3, 4),
    7: (2, 3, 4),
    8: (1, 2, 5),
    9: (1, 4, 5),
    10: (2, 4, 5),
    11: (1, 3, 6),
    12: (1, 4, 6),
    13: (3, 4, 6),
    14: (2, 3, 7),
    15: (2, 4, 7),
    16: (3, 4, 7),
}


@pytest.mark.parametrize("g", range(0, 7))
def test_size_and_edge_formulas(pipe, g):
    net = pipe.net(g)
    assert net.node_count == 3 + (3**g - 1) // 2
    assert len(net.edges) == (3 ** (g + 1) + 3) // 2


@pytest.mark.parametrize("g", range(0, 6))
def test_simple_graph(pipe, g):
    net = pipe.net(g)
    assert len(set(net.edges)) == len(net.edges)
    for i, j in net.edges:
        assert 1 <= i < j <= net.node_count
    # connected: BFS from node 1 reaches everything
    assert all(
        shortest_path_length(net, 1, k) >= 0 for k in range(1, net.node_count + 1)
    )


def test_g0_is_triangle(pipe):
    net = pipe.net(0)
    assert net.node_count == 3
    assert net.edges == ((1, 2), (1, 3), (2, 3))
    assert net.central_node is None


def test_g1_is_complete_graph(pipe):
    net = pipe.net(1)
    assert net.node_count == 4
    assert net.edges == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert net.central_node == 4


def test_canonical_labeling_g3(pipe):
    net = pipe.net(3)
    for node, parent in G3_PARENTS.items():
        assert net.node_meta[node - 1].parent == parent


def test_insertion_order_generations(pipe):
    net = pipe.net(4)
    gens = [info.gen for info in net.node_meta]
    assert gens == sorted(gens)
    assert net.nodes_of_generation(0) == (1, 2, 3)
    assert net.nodes_of_generation(1) == (4,)
    assert net.nodes_of_generation(2) == (5, 6, 7)
    assert len(net.nodes_of_generation(4)) == 27


def test_generation_is_deterministic():
    a = generate_apollonian(4)
    b = generate_apollonian(4)
    assert a == b


@pytest.mark.parametrize("g", range(1, 6))
def test_inserted_nodes_link_to_their_triangle(pipe, g):
    net = pipe.net(g)
    for node in range(4, net.node_count + 1):
        info = net.node_meta[node - 1]
        earlier = tuple(n for n in net.neighbors[node - 1] if n < node)
        assert earlier == info.parent


def test_generation_validation():
    with pytest.raises(CapacityError, match=str(GENERATION_CAP)):
        generate_apollonian(GENERATION_CAP + 1)
    with pytest.raises(ValueError):
        generate_apollonian(-1)
    with pytest.raises(ValueError):
        generate_apollonian(2.5)
    # a custom cap widens or narrows the check
    with pytest.raises(CapacityError):
        generate_apollonian(3, cap=2)


def test_node_count_helper():
    assert [node_count_for_generation(g) for g in range(5)] == [3, 4, 7, 16, 43]


def test_laplacian_k4(pipe):
    h = laplacian(pipe.net(1))
    assert np.array_equal(h, 4.0 * np.eye(4) - np.ones((4, 4)))


def test_laplacian_central_degree_g2(pipe):
    h = laplacian(pipe.net(2))
    assert h[3, 3] == 6.0  # central node touches all six other nodes


@pytest.mark.parametrize("g", range(0, 6))
def test_laplacian_row_sums_and_symmetry(pipe, g):
    h = laplacian(pipe.net(g))
    assert np.array_equal(h, h.T)
    assert np.abs(h.sum(axis=1)).max() == 0.0
    net = pipe.net(g)
    assert all(h[v - 1, v - 1] == net.degree(v) for v in range(1, net.node_count + 1))


def test_distance_examples(pipe):
    net = pipe.net(3)
    assert shortest_path_length(net, 4, 1) == 1
    for j in range(1, 17):
        assert shortest_path_length(net, j, j) == 0
    # generation-3 nodes split by adjacency to the central node
    far = [n for n in net.nodes_of_generation(3) if shortest_path_length(net, 4, n) == 2]
    near = [n for n in net.nodes_of_generation(3) if shortest_path_length(net, 4, n) == 1]
    assert sorted(far) == [8, 11, 14]
    assert len(near) == 6


def test_distance_matches_matrix_power_oracle(pipe):
    # independent check: distance = first adjacency power with a nonzero entry
    net = pipe.net(3)
    n = net.node_count
    adj = np.zeros((n, n), dtype=bool)
    for i, j in net.edges:
        adj[i - 1, j - 1] = adj[j - 1, i - 1] = True
    reach = np.eye(n, dtype=bool)
    dist = np.full((n, n), -1)
    dist[np.eye(n, dtype=bool)] = 0
    frontier = np.eye(n, dtype=bool)
    for d in range(1, n):
        frontier = ((frontier.astype(int) @ adj.astype(int)) > 0) & ~reach
        if not frontier.any():
            break
        dist[frontier] = d
        reach |= frontier
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            assert shortest_path_length(net, j, k) == dist[j - 1, k - 1]


def test_distance_rejects_bad_index(pipe):
    net = pipe.net(2)
    with pytest.raises(ValueError):
        shortest_path_length(net, 0, 3)
    with pytest.raises(ValueError):
        shortest_path_length(net, 1, 8)


def test_identity_corner_permutation(pipe):
    perm = corner_automorphism(pipe.net(3), (1, 2, 3))
    assert perm.is_identity


def test_corner_rotation_g2(pipe):
    # rotation 1 -> 2 -> 3 -> 1 carries node 5 (triangle 1,2,4) to node 7
    perm = corner_automorphism(pipe.net(2), (2, 3, 1))
    assert perm(4) == 4
    assert perm(5) == 7
    assert perm(7) == 6
    assert perm(6) == 5


def test_corner_automorphism_rejects_bad_permutation(pipe):
    with pytest.raises(ValueError):
        corner_automorphism(pipe.net(2), (1, 1, 2))


@pytest.mark.parametrize("g", range(0, 5))
def test_corner_extensions_preserve_edges(pipe, g):
    net = pipe.net(g)
    for perm in corner_group(net):
        assert is_automorphism(net, perm)


def test_corner_extension_is_homomorphism(pipe):
    net = pipe.net(3)

    def compose_corners(p, q):
        return tuple(p[q[i] - 1] for i in range(3))

    for p in CORNER_PERMUTATIONS:
        for q in CORNER_PERMUTATIONS:
            lifted = corner_automorphism(net, p).compose(corner_automorphism(net, q))
            direct = corner_automorphism(net, compose_corners(p, q))
            assert lifted == direct


@pytest.mark.parametrize("g", [2, 3, 4])
def test_automorphisms_preserve_degree_and_distance(pipe, g, rng):
    net = pipe.net(g)
    n = net.node_count
    pairs = [(int(a), int(b)) for a, b in rng.integers(1, n + 1, size=(10, 2))]
    for sigma in corner_group(net):
        for v in range(1, n + 1):
            assert net.degree(sigma(v)) == net.degree(v)
        for a, b in pairs:
            assert shortest_path_length(net, sigma(a), sigma(b)) == (
                shortest_path_length(net, a, b)
            )


def test_orbits_g3_fixed_center(pipe):
    net = pipe.net(3)
    part = orbits(net, corner_group(net), fixed_source=4)
    assert sorted(part.sizes) == [1, 3, 3, 3, 6]
    classes = {frozenset(c) for c in part.classes}
    assert frozenset({4}) in classes
    assert frozenset({1, 2, 3}) in classes
    assert frozenset({5, 6, 7}) in classes
    assert frozenset({8, 11, 14}) in classes
    assert frozenset({9, 10, 12, 13, 15, 16}) in classes


def test_orbits_g2_fixed_center(pipe):
    net = pipe.net(2)
    part = orbits(net, corner_group(net), fixed_source=4)
    assert {frozenset(c) for c in part.classes} == {
        frozenset({4}),
        frozenset({1, 2, 3}),
        frozenset({5, 6, 7}),
    }


def test_orbits_identity_only(pipe):
    net = pipe.net(2)
    identity = corner_automorphism(net, (1, 2, 3))
    part = orbits(net, [identity])
    assert part.sizes == (1,) * net.node_count


def test_orbits_reject_non_automorphism(pipe):
    net = pipe.net(2)
    bogus = NodePermutation(tuple([2, 1] + list(range(3, 8))))  # swaps 1,2 only
    with pytest.raises(ValueError):
        orbits(net, [bogus])


def test_orbit_partition_lookup(pipe):
    net = pipe.net(3)
    part = orbits(net, corner_group(net), fixed_source=4)
    assert part.class_of(9) == (9, 10, 12, 13, 15, 16)
    with pytest.raises(ValueError):
        part.class_of(99)


def test_check_node(pipe):
    net = pipe.net(1)
    with pytest.raises(ValueError):
        net.check_node(0)
    with pytest.raises(ValueError):
        net.check_node(5)
    with pytest.raises(ValueError):
        net.check_node(1.5)
