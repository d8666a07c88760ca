import random

import pytest
from hypothesis import given, settings, strategies as st

from netcover.embedding import (build_graph, classify_sides, path_to_sources, perturb,
                                shortest_paths_from_set, triangulate)
from netcover.errors import EmbeddingInvalid, NonPositiveWeight, WalkMalformed
from netcover.generate import random_graph

W1_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
W1_ROT = [[0, 4, 3], [1, 0], [2, 4, 1], [2, 3]]


def w1_graph(weights=(2, 2, 2, 2, 3)):
    return build_graph(4, W1_EDGES, W1_ROT, list(weights))


def test_w1_faces_and_euler():
    g = w1_graph()
    walks = sorted(sorted(g.face_vertices(f)) for f in range(len(g.faces)))
    assert walks == [[0, 1, 2], [0, 1, 2, 3], [0, 2, 3]]
    assert g.n - g.m + len(g.faces) == 2


def test_rotation_with_crossing_rejected():
    # swapping two entries at vertex 0 turns the square with chord into a
    # torus-like rotation system
    with pytest.raises(EmbeddingInvalid):
        build_graph(4, W1_EDGES, [[0, 3, 4], [1, 0], [2, 4, 1], [2, 3]], [1] * 5)


@pytest.mark.parametrize("rot", [
    [[0, 4, 3], [1, 0], [2, 4, 1]],            # missing a vertex
    [[0, 4, 3], [1, 0], [2, 4, 1], [2, 7]],    # unknown edge
    [[0, 4, 3], [1, 0], [2, 4, 1], [2, 2]],    # edge listed twice at one end
    [[0, 4, 3, 1], [1, 0], [2, 4, 1], [2, 3]],  # non-endpoint
])
def test_malformed_rotations(rot):
    with pytest.raises(EmbeddingInvalid):
        build_graph(4, W1_EDGES, rot, [1] * 5)


def test_nonpositive_weight():
    with pytest.raises(NonPositiveWeight):
        w1_graph((1, 0, 1, 1, 1))


def test_parallel_edges_keep_lightest():
    # a digon 0=1 plus a pendant vertex
    g = build_graph(3, [(0, 1), (0, 1), (1, 2)], [[0, 1], [1, 2, 0], [2]], [5, 3, 1])
    assert g.m == 2
    assert g.weight(0, 1) == 3


def test_triangulate_w1():
    g = triangulate(w1_graph(), 100)
    assert g.is_triangulated and g.is_simple and g.n > 3
    assert all(g.weight(u, v) == w for (u, v), w in zip(W1_EDGES, (2, 2, 2, 2, 3)))
    extra = [w for w in g.weights[5:]]
    assert extra and all(w == 100 for w in extra)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["grid-graph", "random-triangulation"]),
       st.integers(3, 16))
def test_triangulation_properties(seed, profile, n):
    g0 = random_graph(random.Random(seed), profile, n)
    g = triangulate(g0, 10 ** 9)
    assert g.is_triangulated and g.is_simple and g.is_connected
    assert g.n - g.m + len(g.faces) == 2
    assert len(g.faces) == 2 * g.n - 4
    for e in range(g0.m):
        assert g.ends[e] == g0.ends[e] and g.weights[e] == g0.weights[e]


def test_perturbation_keeps_comparisons():
    g = triangulate(w1_graph(), 100)
    pg, rads, shift = perturb(g, [0, 1, 1])
    assert pg.m == g.m
    # radius ties are broken by index, order is kept
    assert rads[0] < rads[1] < rads[2]
    assert (rads[1] >> shift) == 1 and (rads[2] >> shift) == 1
    # path weight comparisons of the original survive
    assert all((w >> shift) == w0 for w, w0 in zip(pg.weights, g.weights))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_perturbed_distances_distinct(seed):
    rng = random.Random(seed)
    g = triangulate(random_graph(rng, "random-triangulation", rng.randint(4, 10)), 50)
    pg, rads, shift = perturb(g, [rng.randint(0, 3) for _ in range(3)])
    srcs = [rng.randrange(pg.n) for _ in range(3)]
    values = []
    for i, s in enumerate(srcs):
        dist, _ = shortest_paths_from_set(pg, [s])
        base, _ = shortest_paths_from_set(g, [s])
        assert all((a >> shift) == b for a, b in zip(dist, base))
        values += [x - rads[i] for x in dist]
    assert len(set(values)) == len(values)


def test_shortest_path_to_set():
    g = w1_graph()
    dist, toward = shortest_paths_from_set(g, [0])
    assert dist == [0, 2, 3, 2]
    assert path_to_sources(g, toward, 2) == [2, 0]


def test_classify_sides_triangle():
    g = w1_graph()
    # walk 0 -> 1, edge 1 -> 2, back along 2 -> 0: a triangular face
    sides = classify_sides(g, [0, 1], [0, 2])
    assert not sides.degenerate
    assert sides.on_walk == {0, 1, 2}
    assert sides.side_of([3]) in ("inside", "outside")
    assert len(sides.inside_faces) + len(sides.outside_faces) == len(g.faces)


def test_classify_sides_degenerate():
    g = w1_graph()
    sides = classify_sides(g, [0], [0, 1])
    assert sides.degenerate
    assert not sides.inside_faces


def test_classify_sides_errors():
    g = w1_graph()
    with pytest.raises(WalkMalformed):
        classify_sides(g, [0, 1], [2, 3])
    with pytest.raises(WalkMalformed):
        classify_sides(g, [1], [3])
