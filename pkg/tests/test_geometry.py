from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from netcover.embedding import from_neighbor_rotations
from netcover.errors import DegenerateInput, NonSimplePolygon, UnsupportedProblem
from netcover.generate import random_scene
from netcover.geometry import (Ball, Disk, Scene, best_cover, check_simple, make_metric,
                               planarize_segments, point_in_polygon, reduce_disk_packing,
                               reduce_point_cover, reduce_polygon_packing, reduce_scene,
                               scene_answer, segment_intersections, wrap_planar)
from netcover.instance import Client, Facility, Instance
from netcover.solver import NEG_INF, solve, solve_bruteforce


def feasible(inst):
    return solve(inst).value != NEG_INF


def test_one_crossing():
    pl = planarize_segments([((0, 0), (1, 1)), ((0, 1), (1, 0))])
    assert pl.graph.n == 5 and pl.graph.m == 4
    assert (F(1, 2), F(1, 2)) in pl.index


def test_three_crossings():
    segs = [((0, 0), (6, 1)), ((0, 2), (6, 0)), ((1, -3), (2, 5))]
    pl = planarize_segments(segs)
    assert pl.graph.n == 6 + 3
    assert pl.graph.m == 3 + 2 * 3


def test_collinear_overlap_subdivided():
    pl = planarize_segments([((0, 0), (4, 0)), ((2, 0), (6, 0))])
    assert pl.graph.n == 4 and pl.graph.m == 3


def test_zero_length_segment():
    with pytest.raises(DegenerateInput):
        planarize_segments([((1, 1), (1, 1))])


def test_intersection_is_exact():
    assert segment_intersections(((0, 0), (3, 1)), ((0, 1), (3, 0))) == [(F(3, 2), F(1, 2))]
    assert segment_intersections(((0, 0), (1, 0)), ((0, 1), (1, 1))) == []


def test_linf_lengths_exact():
    pl = planarize_segments([((0, 0), (F(1, 3), 0)), ((0, 0), (0, F(5, 2)))], norm="linf")
    unit = pl.metric.unit
    weights = sorted(pl.graph.weights)
    assert weights == [unit // 3, unit * 5 // 2]
    assert unit % 6 == 0


def test_l2_length_floor():
    metric = make_metric("l2", [F(0), F(1)], precision=20)
    w = metric.length((0, 0), (1, 1))
    assert w ** 2 <= 2 * metric.unit ** 2 < (w + 1) ** 2


def test_disk_pairs():
    apart = [Disk((0, 0), F(1)), Disk((5, 0), F(1))]
    assert feasible(reduce_disk_packing(apart, 2))
    touching = [Disk((0, 0), F(2)), Disk((3, 0), F(2))]
    assert not feasible(reduce_disk_packing(touching, 2))


def test_planted_disks():
    disks = [Disk((0, 0), F(1)), Disk((10, 0), F(1)), Disk((20, 0), F(1)),
             Disk((0, 1), F(1)), Disk((10, 1), F(1))]
    assert feasible(reduce_disk_packing(disks, 3))
    assert not feasible(reduce_disk_packing(disks, 4))


def test_polygons():
    t1 = [(0, 0), (2, 0), (1, 2)]
    t2 = [(5, 0), (7, 0), (6, 2)]
    assert feasible(reduce_polygon_packing([t1, t2], 2))
    outer = [(-1, -1), (3, -1), (3, 3), (-1, 3)]
    assert not feasible(reduce_polygon_packing([t1, outer], 2))
    assert feasible(reduce_polygon_packing([t1, outer], 1))


def test_non_simple_polygon():
    with pytest.raises(NonSimplePolygon):
        check_simple([(0, 0), (2, 2), (2, 0), (0, 2)])
    with pytest.raises(NonSimplePolygon):
        reduce_polygon_packing([[(0, 0), (1, 1)]], 1)


def test_point_in_polygon_boundary():
    sq = [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert point_in_polygon((1, 1), sq)
    assert point_in_polygon((2, 1), sq)
    assert point_in_polygon((0, 0), sq)
    assert not point_in_polygon((3, 1), sq)


def test_cover_single_disk():
    pts = [(1, 0), (0, 1), (-1, 0)]
    inst = reduce_point_cover([Ball((0, 0), F(3, 2))], pts, "l2", 1)
    res = solve(inst)
    assert F(res.value, inst.scale) == 3


def test_linf_square_semantics():
    balls = [Ball((0, 0), F(1))]        # a square of side 2
    inside, outside = (1, 1), (F(11, 10), 0)
    inst = reduce_point_cover(balls, [inside, outside], "linf", 1)
    assert F(solve(inst).value, inst.scale) == 1
    assert best_cover(balls, [inside, outside], "linf", 1) == 1


def test_norm_fidelity():
    balls = [Ball((0, 0), F(2)), Ball((3, 1), F(1))]
    pts = [(1, 2), (F(5, 2), 3), (4, 0)]
    for norm in ("l2", "linf"):
        inst = reduce_point_cover(balls, pts, norm, 2, precision=40)
        pl_dist = solve_bruteforce(inst)
        assert pl_dist.feasible
        metric = make_metric(norm, [F(0), F(1, 2)], precision=40)
        for b in balls:
            for p in pts:
                w = metric.length(b.center, p)
                exact = (max(abs(b.center[0] - p[0]), abs(b.center[1] - p[1])) if norm == "linf"
                         else None)
                if exact is not None:
                    assert w == exact * metric.unit
                else:
                    sq = (b.center[0] - p[0]) ** 2 + (b.center[1] - p[1]) ** 2
                    assert w ** 2 <= sq * metric.unit ** 2 < (w + 1) ** 2


@pytest.mark.parametrize("mode,profile", [("disks", "geometric-disks"),
                                          ("cover-l2", "geometric-disks"),
                                          ("cover-linf", "geometric-squares"),
                                          ("polygons", "geometric-polygons")])
def test_scenes_match_direct_answer(mode, profile):
    for seed in range(6):
        scene = random_scene(seed, profile)
        inst = reduce_scene(scene, mode)
        res = solve(inst)
        got = (res.value != NEG_INF if mode in ("disks", "polygons")
               else F(res.value, inst.scale))
        assert got == scene_answer(scene, mode)


def test_unknown_mode():
    with pytest.raises(UnsupportedProblem):
        reduce_scene(Scene(1), "hexagons")


def path_graph(n):
    rot = [[w for w in (v - 1, v + 1) if 0 <= w < n] for v in range(n)]
    return from_neighbor_rotations(rot, lambda u, v: 1)


def test_scatter_on_path():
    wrapped = wrap_planar("scatter", path_graph(4), distance=2, k=2)
    assert all(f.loc == (v,) for v, f in enumerate(wrapped.instance.facilities))
    assert feasible(wrapped.instance)
    assert wrapped.tight == [(0, 1), (1, 2), (2, 3)]
    assert not feasible(wrap_planar("scatter", path_graph(4), distance=5, k=2).instance)


def test_rho_dominating():
    g = path_graph(5)
    inst = wrap_planar("rho_dominating", g, rho=4, k=1).instance
    assert solve(inst).value == 5
    inst = wrap_planar("rho_dominating", g, rho=1, k=2).instance
    assert solve(inst).value == solve_bruteforce(inst).value == 5


def test_independent_cover_is_definitional():
    g = path_graph(6)
    objs, clis = [(0, 1), (2,), (4, 5)], [0, 3, 5]
    wrapped = wrap_planar("independent_cover", g, objects=objs, clients=clis, k=2).instance
    direct = Instance(g, [Facility(o, 0, 0) for o in objs], [Client(v, 0, 1) for v in clis], 2, 1)
    assert solve(wrapped).record() == solve(direct).record()
    assert solve(direct).value == 2


def test_unknown_problem():
    with pytest.raises(UnsupportedProblem):
        wrap_planar("coloring", path_graph(3), k=1)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3)),
                min_size=2, max_size=4, unique_by=lambda t: (t[0], t[1])),
       st.integers(1, 3))
def test_disk_reduction_random(raw, k):
    disks = [Disk((x, y), F(r, 2) + F(1, 7)) for x, y, r in raw]
    k = min(k, len(disks))
    inst = reduce_disk_packing(disks, k)
    want = any(all((a.center[0] - b.center[0]) ** 2 + (a.center[1] - b.center[1]) ** 2
                   > (a.radius + b.radius) ** 2 for a, b in combinations(sub, 2))
               for sub in combinations(disks, k))
    assert feasible(inst) == want
