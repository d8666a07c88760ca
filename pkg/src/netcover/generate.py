"""Seeded random instances and scenes for tests and the ``gen`` command."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .embedding import EmbeddedGraph, from_neighbor_rotations
from .errors import BadProfile, NonSimplePolygon
from .geometry import Ball, Disk, Scene, check_simple, point_in_polygon
from .instance import Client, Facility, Instance, prepare
from .planar import ccw_order, straight_line_graph

PROFILES = ("grid-graph", "random-triangulation", "geometric-disks", "geometric-squares",
            "geometric-polygons")
SCALE = 10 ** 6


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _cross(p, q, r, s) -> bool:
    return (_orient(p, q, r) * _orient(p, q, s) < 0
            and _orient(r, s, p) * _orient(r, s, q) < 0)


def general_position_points(rng: random.Random, n: int, box: int) -> list[tuple[int, int]]:
    pts: list[tuple[int, int]] = []
    while len(pts) < n:
        p = (rng.randint(0, box), rng.randint(0, box))
        if p in pts or any(_orient(a, b, p) == 0 for a, b in combinations(pts, 2)):
            continue
        pts.append(p)
    return pts


def greedy_triangulation(pts) -> list[tuple[int, int]]:
    """Shortest-first maximal crossing-free segment set on ``pts``."""
    cand = sorted(combinations(range(len(pts)), 2),
                  key=lambda e: ((pts[e[0]][0] - pts[e[1]][0]) ** 2
                                 + (pts[e[0]][1] - pts[e[1]][1]) ** 2, e))
    chosen: list[tuple[int, int]] = []
    for u, v in cand:
        if all(len({u, v, a, b}) < 4 or not _cross(pts[u], pts[v], pts[a], pts[b])
               for a, b in chosen):
            chosen.append((u, v))
    return chosen


def _thin(rng: random.Random, n: int, edges, drop: float):
    """Randomly delete edges while keeping the graph connected."""
    edges = list(edges)
    rng.shuffle(edges)
    kept = list(edges)
    for e in edges:
        if rng.random() >= drop:
            continue
        trial = [x for x in kept if x != e]
        if _is_connected(n, trial):
            kept = trial
    return sorted(kept)


def _is_connected(n, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def random_graph(rng: random.Random, profile: str, n: int, max_weight: int = 5,
                 drop: float = 0.3) -> EmbeddedGraph:
    if profile == "grid-graph":
        cols = max(2, int(round(n ** 0.5)))
        rows = max(1, -(-n // cols))
        pts = [(x, y) for y in range(rows) for x in range(cols)][:n]
        index = {p: i for i, p in enumerate(pts)}
        edges = []
        for (x, y), i in index.items():
            for q in ((x + 1, y), (x, y + 1)):
                if q in index:
                    edges.append((i, index[q]))
            if rng.random() < 0.25 and (x + 1, y + 1) in index:
                edges.append((i, index[(x + 1, y + 1)]))
        edges = _thin(rng, len(pts), edges, drop / 3)
    elif profile == "random-triangulation":
        pts = general_position_points(rng, n, 4 * n)
        edges = _thin(rng, n, greedy_triangulation(pts), drop)
    else:
        raise BadProfile(f"profile {profile!r} does not produce graphs")
    w = {e: rng.randint(1, max_weight) * SCALE for e in edges}
    return straight_line_graph(pts, edges,
                               lambda u, v: w[(min(u, v), max(u, v))])


def random_connected_set(rng: random.Random, g: EmbeddedGraph, size: int) -> tuple[int, ...]:
    start = rng.randrange(g.n)
    got = [start]
    frontier = set(g.neighbors(start))
    while len(got) < size and frontier:
        v = rng.choice(sorted(frontier))
        got.append(v)
        frontier |= set(g.neighbors(v))
        frontier -= set(got)
    return tuple(sorted(got))


def random_instance(seed: int, profile: str = "random-triangulation", n: int = 10,
                    d: int = 5, c: int = 6, k: int = 3, feasible: bool = True,
                    attempts: int = 50) -> Instance:
    """Deterministic instance for ``seed``.  With ``feasible`` set, objects
    are redrawn until some normal family of size ``k`` exists."""
    if profile not in ("grid-graph", "random-triangulation"):
        raise BadProfile(f"unknown instance profile {profile!r}")
    rng = random.Random(seed)
    g = random_graph(rng, profile, n)
    inst = None
    for _ in range(attempts):
        facs = [Facility(random_connected_set(rng, g, rng.choice((1, 1, 1, 2, 3))),
                         rng.randint(-2, 3) * SCALE, rng.choice((0, 0, 1, 2)) * SCALE)
                for _ in range(d)]
        clis = [Client(rng.randrange(g.n), rng.choice((0, 0, 1)) * SCALE,
                       rng.randint(-2, 5) * SCALE) for _ in range(c)]
        inst = Instance(g, facs, clis, k)
        if not feasible or has_normal_family(inst, k):
            return inst
    return inst


def has_normal_family(inst: Instance, k: int) -> bool:
    if k > len(inst.facilities):
        return False
    prep = prepare(inst)
    return any(prep.is_normal_mask(sum(1 << p for p in fam))
               for fam in combinations(range(prep.d), k))


def disjoint_union(a: Instance, b: Instance, k: int) -> Instance:
    """Place two instances side by side as separate components."""
    off = a.graph.n
    rot = a.graph.neighbor_rotations() + [[w + off for w in r] for r in b.graph.neighbor_rotations()]

    def weight(u, v):
        if u < off:
            return a.graph.weight(u, v)
        return b.graph.weight(u - off, v - off)

    g = from_neighbor_rotations(rot, weight)
    facs = list(a.facilities) + [Facility(tuple(v + off for v in f.loc), f.cost, f.rad)
                                 for f in b.facilities]
    clis = list(a.clients) + [Client(c.pla + off, c.sen, c.pri) for c in b.clients]
    return Instance(g, facs, clis, k, a.scale)


# ----------------------------------------------------------------------
# geometric scenes

MARGIN = Fraction(1, 16)


def _robust_gap(dist_sq: Fraction, r: Fraction) -> bool:
    """Whether a Euclidean distance (given squared) stays at least ``MARGIN``
    away from ``r``."""
    lo, hi = r - MARGIN, r + MARGIN
    return dist_sq >= hi * hi or (lo > 0 and dist_sq <= lo * lo)


def _dist_sq(a, b) -> Fraction:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def _lattice(rng, box):
    return (Fraction(rng.randint(0, box)), Fraction(rng.randint(0, box)))


def random_disks(rng: random.Random, count: int, box: int = 12) -> list[Disk]:
    """Disks with pairwise boundary gaps or overlaps of at least ``MARGIN``."""
    while True:
        disks = [Disk(_lattice(rng, box), Fraction(rng.randint(2, 6), 2)) for _ in range(count)]
        if len({d.center for d in disks}) < count:
            continue
        if all(_robust_gap(_dist_sq(a.center, b.center), a.radius + b.radius)
               for a, b in combinations(disks, 2)):
            return disks


def random_cover_scene(rng: random.Random, norm: str, balls: int, points: int,
                       box: int = 10) -> tuple[list[Ball], list]:
    while True:
        bs = [Ball(_lattice(rng, box), Fraction(rng.randint(2, 8), 2)) for _ in range(balls)]
        pts = [_lattice(rng, box) for _ in range(points)]
        if norm == "linf" or all(_robust_gap(_dist_sq(b.center, p), b.radius)
                                 for b in bs for p in pts):
            return bs, pts


def random_polygon(rng: random.Random, box: int = 12, size: int = 3) -> list:
    """Star-shaped polygon with 3 to 5 lattice corners around a lattice
    center, corners sorted by angle."""
    while True:
        cx, cy = rng.randint(size, box - size), rng.randint(size, box - size)
        m = rng.randint(3, 5)
        offs = {(rng.randint(-size, size), rng.randint(-size, size)) for _ in range(m)}
        offs.discard((0, 0))
        pts = [(Fraction(cx + dx), Fraction(cy + dy)) for dx, dy in offs]
        if len(pts) < 3:
            continue
        order = ccw_order((cx, cy), pts, range(len(pts)))
        poly = [pts[i] for i in order]
        try:
            check_simple(poly)
        except NonSimplePolygon:
            continue
        if point_in_polygon((Fraction(cx), Fraction(cy)), poly):
            return poly


def random_polygons(rng: random.Random, count: int, box: int = 12) -> list:
    """Random star-shaped polygons, one of them with a shrunken copy nested
    inside when ``rng`` says so."""
    polys = [random_polygon(rng, box) for _ in range(count)]
    if count >= 2 and rng.random() < 0.4:
        outer = polys[0]
        cx = sum(p[0] for p in outer) / len(outer)
        cy = sum(p[1] for p in outer) / len(outer)
        polys[-1] = [(cx + (p[0] - cx) / 3, cy + (p[1] - cy) / 3) for p in outer]
    return polys


def random_scene(seed: int, profile: str, shapes: int | None = None,
                 points: int | None = None, k: int | None = None) -> Scene:
    rng = random.Random(seed)
    shapes = shapes if shapes is not None else rng.randint(3, 5)
    points = points if points is not None else rng.randint(5, 8)
    k = k if k is not None else rng.randint(1, min(3, shapes))
    if profile == "geometric-disks":
        disks = random_disks(rng, shapes)
        _, pts = random_cover_scene(rng, "l2", 0, points)
        while not all(_robust_gap(_dist_sq(d.center, p), d.radius) for d in disks for p in pts):
            pts = [_lattice(rng, 10) for _ in range(points)]
        return Scene(k, disks=disks, points=pts)
    if profile == "geometric-squares":
        bs, pts = random_cover_scene(rng, "linf", shapes, points)
        return Scene(k, squares=[(b.center, 2 * b.radius) for b in bs], points=pts)
    if profile == "geometric-polygons":
        return Scene(k, polygons=random_polygons(rng, shapes))
    raise BadProfile(f"unknown scene profile {profile!r}")
