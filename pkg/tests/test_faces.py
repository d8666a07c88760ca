from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from netcover.embedding import from_neighbor_rotations
from netcover.errors import BadTupleSize, NotNormal
from netcover.faces import important_faces, singular_face
from netcover.instance import Client, Facility, Instance, prepare
from netcover.voronoi import build_diagram, build_prediagram, is_normal, voronoi_partition

from conftest import tiny_instance


def k4_instance():
    # outer triangle 0, 1, 2 around the center 3
    g = from_neighbor_rotations([[1, 3, 2], [2, 3, 0], [0, 3, 1], [2, 0, 1]], lambda u, v: 1)
    facs = [Facility((v,), 0, 0) for v in (0, 1, 2)]
    return Instance(g, facs, [Client(3, 0, 1)], 2, scale=1)


def face_with(prep, vertices):
    return next(f for f in range(len(prep.graph.faces))
                if set(prep.graph.face_vertices(f)) == set(vertices))


def test_kind1_on_k4():
    prep = prepare(k4_instance())
    outer = face_with(prep, (0, 1, 2))
    assert singular_face(prep, outer, (0, 1, 2), 1)
    assert singular_face(prep, outer, (2, 0, 1), 1)
    imp = important_faces(prep)
    assert outer in imp.faces
    assert imp.counts()[(1, (0, 1, 2))] <= 2


def test_kind2_needs_wrapping():
    prep = prepare(k4_instance())
    outer = face_with(prep, (0, 1, 2))
    # all three corners are owned by different objects, so no wrap
    assert not singular_face(prep, outer, (0, 1, 2), 2)


def test_bad_tuple_size():
    prep = prepare(k4_instance())
    with pytest.raises(BadTupleSize):
        singular_face(prep, 0, (0, 1), 1)
    with pytest.raises(BadTupleSize):
        singular_face(prep, 0, (0, 1, 2), 3)
    with pytest.raises(BadTupleSize):
        singular_face(prep, 0, (0, 0, 1), 1)


def test_not_normal_tuple():
    for seed in range(40):
        prep = prepare(tiny_instance(seed, d=7))
        for trip in combinations(range(prep.d), 3):
            if not is_normal(prep, trip):
                with pytest.raises(NotNormal):
                    singular_face(prep, 0, trip, 1)
                return
    pytest.skip("no conflicting triple generated")


def test_two_objects_give_no_faces(w1):
    assert not important_faces(prepare(w1)).faces


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 5))
def test_branching_points_are_important(seed):
    prep = prepare(tiny_instance(seed, n=12, d=6))
    imp = important_faces(prep)
    assert len(imp.faces) <= prep.d ** 4
    for (kind, _), count in imp.counts().items():
        assert count <= (2 if kind == 1 else 1)
    for r in (3, 4, 5):
        for fam in combinations(range(prep.d), r):
            if not is_normal(prep, fam):
                continue
            dgm = build_diagram(prep, build_prediagram(prep, voronoi_partition(prep, fam)))
            assert set(dgm.vertices) <= imp.restricted(fam)


def test_provenance_recheck():
    # every recorded certificate is confirmed by the standalone predicate
    for seed in range(6):
        prep = prepare(tiny_instance(seed, n=12, d=6))
        imp = important_faces(prep)
        for f, certs in imp.provenance.items():
            for kind, tup in certs:
                assert singular_face(prep, f, tup, kind)


def test_kind_matches_bridges():
    # a branching point with no bridge is kind 1, one bridge kind 2, three kind 3
    for seed in range(10):
        prep = prepare(tiny_instance(seed, n=12, d=7))
        imp = important_faces(prep)
        for r in (3, 4, 5):
            for fam in combinations(range(prep.d), r):
                if not is_normal(prep, fam):
                    continue
                dgm = build_diagram(prep, build_prediagram(prep, voronoi_partition(prep, fam)))
                br = dgm.bridges()
                for f in dgm.vertices:
                    nb = sum(1 for i in range(3) if dgm.slot[(f, i)][0] in br)
                    want = {0: 1, 1: 2, 3: 3}[nb]
                    assert any(kind == want and set(t) <= set(fam)
                               for kind, t in imp.provenance[f])
