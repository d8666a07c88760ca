"""Plane problems reduced to embedded-graph instances.

Coordinates and radii are exact rationals.  Euclidean lengths are floored
to ``precision`` fractional bits; maximum-norm lengths are exact after
scaling by the common denominator of the input.  Brute-force geometric
oracles live next to each reduction.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .embedding import EmbeddedGraph
from .errors import DegenerateInput, NonSimplePolygon, UnsupportedProblem
from .instance import Client, Facility, Instance
from .planar import straight_line_graph

Point = tuple[Fraction, Fraction]
DEFAULT_PRECISION = 64


def point(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _orient(a, b, c) -> int:
    v = _cross(_sub(b, a), _sub(c, a))
    return (v > 0) - (v < 0)


def _on_segment(p, a, b) -> bool:
    return (_orient(a, b, p) == 0
            and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _param(p, a, b) -> Fraction:
    d = _sub(b, a)
    return (p[0] - a[0]) / d[0] if d[0] != 0 else (p[1] - a[1]) / d[1]


def segment_intersections(s, t) -> list[Point]:
    """Points shared by closed segments ``s`` and ``t``: none, the single
    crossing point, or the endpoints of a collinear overlap."""
    (a, b), (c, d) = s, t
    r, q = _sub(b, a), _sub(d, c)
    den = _cross(r, q)
    ca = _sub(c, a)
    if den != 0:
        u = _cross(ca, q) / den
        v = _cross(ca, r) / den
        if 0 <= u <= 1 and 0 <= v <= 1:
            return [(a[0] + u * r[0], a[1] + u * r[1])]
        return []
    if _cross(ca, r) != 0:
        return []
    out = [p for p in (c, d) if _on_segment(p, a, b)]
    out += [p for p in (a, b) if _on_segment(p, c, d) and p not in out]
    return out


# ----------------------------------------------------------------------
# lengths


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


@dataclass
class Metric:
    """Maps plane lengths to positive integers in a common unit."""
    norm: str
    unit: int

    def length(self, a, b) -> int:
        dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
        if self.norm == "linf":
            x = max(dx, dy) * self.unit
            assert x.denominator == 1
            return int(x)
        sq = (dx * dx + dy * dy) * self.unit * self.unit
        return math.isqrt(sq.numerator // sq.denominator)

    def scalar(self, r) -> int:
        x = Fraction(r) * self.unit
        return x.numerator // x.denominator


def make_metric(norm: str, coords, precision: int = DEFAULT_PRECISION) -> Metric:
    if norm == "linf":
        return Metric("linf", _lcm_denominators(coords))
    if norm == "l2":
        return Metric("l2", 1 << precision)
    raise UnsupportedProblem(f"unknown norm {norm!r}")


# ----------------------------------------------------------------------
# planarization


@dataclass
class Planarization:
    graph: EmbeddedGraph
    points: list          # vertex id -> exact point
    index: dict           # point -> vertex id
    metric: Metric


def planarize_segments(segments, points=(), norm: str = "l2",
                       precision: int = DEFAULT_PRECISION,
                       extra_scalars=()) -> Planarization:
    """Arrangement of the given segments: every crossing and every overlap
    endpoint becomes a vertex and every segment a path through them.

    ``points`` are included as vertices first, in order, and subdivide any
    segment passing through them.  ``extra_scalars`` join the coordinates in
    fixing the exact unit of the maximum norm.
    """
    segs = []
    for a, b in segments:
        a, b = point(*a), point(*b)
        if a == b:
            raise DegenerateInput("zero-length segment")
        segs.append((a, b))
    base = [point(*p) for p in points]
    on = [[a, b] for a, b in segs]
    for i, j in combinations(range(len(segs)), 2):
        for p in segment_intersections(segs[i], segs[j]):
            on[i].append(p)
            on[j].append(p)
    for p in base:
        for i, (a, b) in enumerate(segs):
            if _on_segment(p, a, b):
                on[i].append(p)

    index: dict = {}
    order: list = []

    def vid(p):
        if p not in index:
            index[p] = len(order)
            order.append(p)
        return index[p]

    for p in base:
        vid(p)
    for a, b in segs:
        vid(a)
        vid(b)
    for p in sorted({p for pts in on for p in pts} - set(index)):
        vid(p)

    edges = set()
    for (a, b), pts in zip(segs, on):
        chain = sorted(set(pts), key=lambda p: _param(p, a, b))
        for x, y in zip(chain, chain[1:]):
            u, v = index[x], index[y]
            edges.add((min(u, v), max(u, v)))

    coords = [c for p in order for c in p] + [Fraction(s) for s in extra_scalars]
    metric = make_metric(norm, coords, precision)
    g = straight_line_graph(order, sorted(edges),
                            lambda u, v: max(1, metric.length(order[u], order[v])))
    return Planarization(g, order, index, metric)


def _graph_distances(g: EmbeddedGraph, source: int) -> list:
    dist: list = [None] * g.n
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        dv, v = heapq.heappop(heap)
        if dv != dist[v]:
            continue
        for w in g.neighbors(v):
            nd = dv + g.weight(v, w)
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


# ----------------------------------------------------------------------
# disk packing


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: Fraction


def disks_meet(a: Disk, b: Disk) -> bool:
    dx, dy = a.center[0] - b.center[0], a.center[1] - b.center[1]
    return dx * dx + dy * dy <= (a.radius + b.radius) ** 2


def reduce_disk_packing(disks, k: int, precision: int = DEFAULT_PRECISION) -> Instance:
    """Objects are graph balls around disk centers in the arrangement of all
    segments between centers and one witness point per meeting pair."""
    disks = [Disk(point(*d.center), Fraction(d.radius)) for d in disks]
    for d in disks:
        if d.radius <= 0:
            raise DegenerateInput("disk radius must be positive")
    xs: list = []
    for d in disks:
        if d.center not in xs:
            xs.append(d.center)
    for a, b in combinations(disks, 2):
        if disks_meet(a, b) and a.center != b.center:
            t = a.radius / (a.radius + b.radius)
            w = (a.center[0] + t * (b.center[0] - a.center[0]),
                 a.center[1] + t * (b.center[1] - a.center[1]))
            if w not in xs:
                xs.append(w)
    segs = [(p, q) for p, q in combinations(xs, 2)]
    pl = planarize_segments(segs, xs, "l2", precision)
    facs = []
    for d in disks:
        c = pl.index[d.center]
        dist = _graph_distances(pl.graph, c)
        r = pl.metric.scalar(d.radius)
        facs.append(Facility(tuple(v for v in range(pl.graph.n)
                                   if dist[v] is not None and dist[v] <= r), 0, 0))
    return Instance(pl.graph, facs, [], k, scale=pl.metric.unit)


def disks_packable(disks, k: int) -> bool:
    disks = [Disk(point(*d.center), Fraction(d.radius)) for d in disks]
    return any(all(not disks_meet(a, b) for a, b in combinations(sub, 2))
               for sub in combinations(disks, k))


# ----------------------------------------------------------------------
# polygon packing


def check_simple(poly) -> list[Point]:
    pts = [point(*p) for p in poly]
    n = len(pts)
    if n < 3 or len(set(pts)) != n:
        raise NonSimplePolygon("polygon needs at least three distinct vertices")
    area2 = sum(_cross(pts[i], pts[(i + 1) % n]) for i in range(n))
    if area2 == 0:
        raise NonSimplePolygon("polygon has zero area")
    sides = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i, j in combinations(range(n), 2):
        shared = segment_intersections(sides[i], sides[j])
        if (j - i) % n in (1, n - 1):
            common = pts[j] if j == i + 1 else pts[i]
            if shared != [common] and set(shared) != {common}:
                raise NonSimplePolygon(f"sides {i} and {j} overlap")
        elif shared:
            raise NonSimplePolygon(f"sides {i} and {j} intersect")
    return pts


def point_in_polygon(p, poly) -> bool:
    """Closed containment by exact ray casting."""
    n = len(poly)
    inside = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if _on_segment(p, a, b):
            return True
        if (a[1] > p[1]) != (b[1] > p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return inside


def polygons_meet(a, b) -> bool:
    sa = [(a[i], a[(i + 1) % len(a)]) for i in range(len(a))]
    sb = [(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]
    if any(segment_intersections(s, t) for s in sa for t in sb):
        return True
    return point_in_polygon(a[0], b) or point_in_polygon(b[0], a)


def polygons_packable(polygons, k: int) -> bool:
    polys = [check_simple(p) for p in polygons]
    return any(all(not polygons_meet(a, b) for a, b in combinations(sub, 2))
               for sub in combinations(polys, k))


def _visible(pts, edges, a, b) -> bool:
    pa, pb = pts[a], pts[b]
    for i, p in enumerate(pts):
        if i not in (a, b) and _on_segment(p, pa, pb):
            return False
    for u, v in edges:
        if len({u, v, a, b}) < 4:
            continue
        if segment_intersections((pa, pb), (pts[u], pts[v])):
            return False
    return True


def connect_components(pts, edges, weight: int) -> list[tuple[int, int]]:
    """Join the components of a straight-line drawing by straight edges
    between the closest mutually visible vertex pairs."""
    edges = set(edges)
    n = len(pts)
    while True:
        comp = _components(n, edges)
        if len(set(comp)) <= 1:
            return sorted(edges)
        best = None
        for a, b in combinations(range(n), 2):
            if comp[a] == comp[b]:
                continue
            dx, dy = pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]
            key = (dx * dx + dy * dy, a, b)
            if best is not None and key >= best:
                continue
            if _visible(pts, edges, a, b):
                best = key
        edges.add((best[1], best[2]))


def _components(n, edges) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return [find(v) for v in range(n)]


def reduce_polygon_packing(polygons, k: int, precision: int = DEFAULT_PRECISION) -> Instance:
    """Objects are the arrangement vertices inside each closed polygon."""
    polys = [check_simple(p) for p in polygons]
    segs = [(p[i], p[(i + 1) % len(p)]) for p in polys for i in range(len(p))]
    corners = []
    for p in polys:
        for c in p:
            if c not in corners:
                corners.append(c)
    pl = planarize_segments(segs, corners, "l2", precision)
    g = pl.graph
    unit = pl.metric.unit
    if not g.is_connected:
        edges = connect_components(pl.points, g.ends, unit)
        known = {tuple(sorted(e)): g.weights[i] for i, e in enumerate(g.ends)}
        g = straight_line_graph(pl.points, edges,
                                lambda u, v: known.get((min(u, v), max(u, v)), unit))
    facs = [Facility(tuple(v for v, q in enumerate(pl.points) if point_in_polygon(q, poly)), 0, 0)
            for poly in polys]
    return Instance(g, facs, [], k, scale=unit)


# ----------------------------------------------------------------------
# point covering by norm balls


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: Fraction


def norm_distance_le(a, b, r, norm: str) -> bool:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    if norm == "linf":
        return max(dx, dy) <= r
    return dx * dx + dy * dy <= r * r


def reduce_point_cover(balls, points, norm: str, k: int,
                       precision: int = DEFAULT_PRECISION) -> Instance:
    """Objects at ball centers with the ball radius, one unit-prize client
    per point; segments join every center to every point.  The instance asks
    for at most ``k`` objects."""
    balls = [Ball(point(*b.center), Fraction(b.radius)) for b in balls]
    pts = [point(*p) for p in points]
    centers = [b.center for b in balls]
    segs = [(c, p) for c in dict.fromkeys(centers) for p in dict.fromkeys(pts) if c != p]
    pl = planarize_segments(segs, list(dict.fromkeys(centers + pts)), norm, precision,
                            extra_scalars=[b.radius for b in balls])
    unit = pl.metric.unit
    facs = [Facility((pl.index[b.center],), 0, pl.metric.scalar(b.radius)) for b in balls]
    clis = [Client(pl.index[p], 0, unit) for p in pts]
    return Instance(pl.graph, facs, clis, k, scale=unit, at_most=True)


def squares_as_balls(squares) -> list[Ball]:
    return [Ball(point(*c), Fraction(side) / 2) for c, side in squares]


def best_cover(balls, points, norm: str, k: int) -> int:
    """Most points covered by at most ``k`` of the balls, by brute force."""
    balls = [Ball(point(*b.center), Fraction(b.radius)) for b in balls]
    pts = [point(*p) for p in points]
    cover = [{j for j, p in enumerate(pts) if norm_distance_le(p, b.center, b.radius, norm)}
             for b in balls]
    best = 0
    for size in range(min(k, len(balls)) + 1):
        for sub in combinations(range(len(balls)), size):
            best = max(best, len(set().union(*[cover[i] for i in sub])))
    return best


# ----------------------------------------------------------------------
# scenes


@dataclass
class Scene:
    k: int
    disks: list = field(default_factory=list)        # Disk
    squares: list = field(default_factory=list)      # (center, side)
    polygons: list = field(default_factory=list)     # lists of corners
    points: list = field(default_factory=list)


MODES = ("disks", "polygons", "cover-l2", "cover-linf")


def reduce_scene(scene: Scene, mode: str, precision: int = DEFAULT_PRECISION) -> Instance:
    if mode == "disks":
        return reduce_disk_packing(scene.disks, scene.k, precision)
    if mode == "polygons":
        return reduce_polygon_packing(scene.polygons, scene.k, precision)
    if mode == "cover-l2":
        return reduce_point_cover(scene.disks, scene.points, "l2", scene.k, precision)
    if mode == "cover-linf":
        return reduce_point_cover(squares_as_balls(scene.squares), scene.points, "linf",
                                  scene.k, precision)
    raise UnsupportedProblem(f"unknown reduction mode {mode!r}")


def scene_answer(scene: Scene, mode: str):
    """Direct geometric answer: packing feasibility or best covered count."""
    if mode == "disks":
        return disks_packable(scene.disks, scene.k)
    if mode == "polygons":
        return polygons_packable(scene.polygons, scene.k)
    if mode == "cover-l2":
        return best_cover(scene.disks, scene.points, "l2", scene.k)
    if mode == "cover-linf":
        return best_cover(squares_as_balls(scene.squares), scene.points, "linf", scene.k)
    raise UnsupportedProblem(f"unknown reduction mode {mode!r}")


# ----------------------------------------------------------------------
# planar graph problems


@dataclass
class Wrapped:
    instance: Instance
    tight: list = field(default_factory=list)   # pairs at exactly the boundary


def wrap_planar(problem: str, graph: EmbeddedGraph, **params) -> Wrapped:
    """Express a planar graph problem as a covering instance.

    ``scatter``: ``distance`` and ``k``; one object per vertex, the set of
    vertices closer than half the distance.  ``rho_dominating``: ``rho``
    and ``k``; each vertex dominates within ``rho``, every vertex is a
    unit-prize client and at most ``k`` objects may be chosen.
    ``independent_cover``: ``objects`` (vertex sets), ``clients`` (vertices)
    and ``k``.
    """
    k = params["k"]
    scale = params.get("scale", 1)
    if problem == "scatter":
        dist = params["distance"]
        facs, tight = [], []
        for v in range(graph.n):
            dv = _graph_distances(graph, v)
            facs.append(Facility(tuple(u for u in range(graph.n)
                                       if dv[u] is not None and 2 * dv[u] < dist), 0, 0))
            tight += [(v, u) for u in range(v + 1, graph.n)
                      if dv[u] is not None and 2 * dv[u] == dist]
        return Wrapped(Instance(graph, facs, [], k, scale), tight)
    if problem == "rho_dominating":
        rho = params["rho"]
        facs = [Facility((v,), 0, rho) for v in range(graph.n)]
        clis = [Client(v, 0, scale) for v in range(graph.n)]
        return Wrapped(Instance(graph, facs, clis, k, scale, at_most=True))
    if problem == "independent_cover":
        facs = [Facility(tuple(sorted(o)), 0, 0) for o in params["objects"]]
        clis = [Client(v, 0, scale) for v in params["clients"]]
        return Wrapped(Instance(graph, facs, clis, k, scale))
    raise UnsupportedProblem(f"unknown problem {problem!r}")
