"""Sphere-embedded weighted graphs stored as half-edge rotation systems.

Edge ``e`` owns the half-edges ``2e`` (first endpoint to second) and
``2e + 1`` (its twin).  Every vertex keeps its outgoing half-edges in
counterclockwise order; the face to the left of a half-edge is traced by
turning clockwise at its head.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import EmbeddingInvalid, NonPositiveWeight, WalkMalformed


class EmbeddedGraph:
    """Immutable combinatorial embedding with exact integer edge weights."""

    def __init__(self, n: int, ends: list[tuple[int, int]],
                 rotation: list[list[int]], weights: list[int]):
        self.n = n
        self.ends = [tuple(e) for e in ends]
        self.rotation = [list(r) for r in rotation]
        self.weights = list(weights)
        self._pos = [0] * (2 * len(self.ends))
        for hs in self.rotation:
            for i, h in enumerate(hs):
                self._pos[h] = i
        self._trace_faces()
        self._adj: dict[tuple[int, int], int] = {}
        for e, (u, v) in enumerate(self.ends):
            self._adj.setdefault((u, v), e)
            self._adj.setdefault((v, u), e)

    # -- half-edge navigation -------------------------------------------

    @property
    def m(self) -> int:
        return len(self.ends)

    def origin(self, h: int) -> int:
        return self.ends[h >> 1][h & 1]

    def target(self, h: int) -> int:
        return self.ends[h >> 1][1 - (h & 1)]

    def face_next(self, h: int) -> int:
        t = self.target(h)
        rot = self.rotation[t]
        return rot[(self._pos[h ^ 1] - 1) % len(rot)]

    def neighbors(self, v: int) -> list[int]:
        return [self.target(h) for h in self.rotation[v]]

    def edge_between(self, u: int, v: int) -> int | None:
        return self._adj.get((u, v))

    def half_edge(self, u: int, v: int) -> int:
        e = self._adj[(u, v)]
        return 2 * e if self.ends[e][0] == u else 2 * e + 1

    def weight(self, u: int, v: int) -> int:
        return self.weights[self._adj[(u, v)]]

    def _trace_faces(self) -> None:
        self.face_of = [-1] * (2 * self.m)
        self.faces: list[list[int]] = []
        for start in range(2 * self.m):
            if self.face_of[start] != -1:
                continue
            fid = len(self.faces)
            walk = []
            h = start
            while self.face_of[h] == -1:
                self.face_of[h] = fid
                walk.append(h)
                h = self.face_next(h)
            if h != start:
                raise EmbeddingInvalid("face tracing did not close")
            self.faces.append(walk)

    def face_vertices(self, f: int) -> list[int]:
        return [self.origin(h) for h in self.faces[f]]

    def face_edges(self, f: int) -> list[int]:
        return [h >> 1 for h in self.faces[f]]

    # -- global properties ----------------------------------------------

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbors(v):
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    @property
    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    @property
    def is_simple(self) -> bool:
        pairs = set()
        for u, v in self.ends:
            if u == v or (min(u, v), max(u, v)) in pairs:
                return False
            pairs.add((min(u, v), max(u, v)))
        return True

    @property
    def is_triangulated(self) -> bool:
        if self.n <= 3 or not self.is_simple:
            return False
        return all(len(w) == 3 and len({self.origin(h) for h in w}) == 3
                   for w in self.faces)

    def neighbor_rotations(self) -> list[list[int]]:
        return [self.neighbors(v) for v in range(self.n)]

    def __repr__(self) -> str:
        return f"EmbeddedGraph(n={self.n}, m={self.m}, faces={len(self.faces)})"


def from_neighbor_rotations(rot: list[list[int]], weight_of) -> EmbeddedGraph:
    """Build a simple graph from counterclockwise neighbor lists.

    ``weight_of(u, v)`` supplies the weight of each edge; edges are numbered
    by first appearance scanning vertices in id order.
    """
    ends, index = [], {}
    for u, nbrs in enumerate(rot):
        for v in nbrs:
            key = (min(u, v), max(u, v))
            if key not in index:
                index[key] = len(ends)
                ends.append(key)
    rotation = [[_directed(ends, index, u, v) for v in nbrs] for u, nbrs in enumerate(rot)]
    weights = [weight_of(u, v) for u, v in ends]
    return EmbeddedGraph(len(rot), ends, rotation, weights)


def _directed(ends, index, u, v):
    e = index[(min(u, v), max(u, v))]
    return 2 * e if ends[e][0] == u else 2 * e + 1


def build_graph(vertex_count: int, edges, rotations, weights) -> EmbeddedGraph:
    """Validate an embedding given by edge lists and simplify it.

    ``edges[e] = (u, v)``; ``rotations[x]`` lists the ids of the edges at
    ``x`` in counterclockwise order, a loop appearing twice.  Loops are
    dropped and of each bundle of parallel edges only the lightest survives.
    """
    n = vertex_count
    if n < 1:
        raise EmbeddingInvalid("graph needs at least one vertex")
    if len(rotations) != n:
        raise EmbeddingInvalid("one rotation list per vertex required")
    if len(weights) != len(edges):
        raise EmbeddingInvalid("one weight per edge required")
    for e, w in enumerate(weights):
        if not isinstance(w, int) or w <= 0:
            raise NonPositiveWeight(f"edge {e} has weight {w}")
    seen_count = [0] * len(edges)
    rotation = []
    for x, lst in enumerate(rotations):
        hs = []
        for e in lst:
            if not 0 <= e < len(edges):
                raise EmbeddingInvalid(f"vertex {x} lists unknown edge {e}")
            u, v = edges[e]
            if x not in (u, v):
                raise EmbeddingInvalid(f"edge {e} listed at non-endpoint {x}")
            if u == v:
                hs.append(2 * e + seen_count[e])
            else:
                hs.append(2 * e if x == u else 2 * e + 1)
            seen_count[e] += 1
        rotation.append(hs)
    for e, (u, v) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise EmbeddingInvalid(f"edge {e} has an endpoint out of range")
        if seen_count[e] != 2:
            raise EmbeddingInvalid(f"edge {e} appears {seen_count[e]} times in rotations")
    for x, hs in enumerate(rotation):
        if len(set(hs)) != len(hs):
            raise EmbeddingInvalid(f"mismatched twin at vertex {x}")
    raw = EmbeddedGraph(n, edges, rotation, weights)
    _check_euler(raw)

    keep: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(edges):
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key not in keep or weights[e] < weights[keep[key]]:
            keep[key] = e
    kept = sorted(keep.values())
    new_id = {e: i for i, e in enumerate(kept)}
    new_rot = [[2 * new_id[h >> 1] + (h & 1) for h in hs if (h >> 1) in new_id]
               for hs in rotation]
    g = EmbeddedGraph(n, [edges[e] for e in kept], new_rot, [weights[e] for e in kept])
    _check_euler(g)
    return g


def _check_euler(g: EmbeddedGraph) -> None:
    comp_of = [0] * g.n
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    edges = [0] * len(comps)
    faces = [0] * len(comps)
    for u, _ in g.ends:
        edges[comp_of[u]] += 1
    for walk in g.faces:
        faces[comp_of[g.origin(walk[0])]] += 1
    for i, comp in enumerate(comps):
        if edges[i] and len(comp) - edges[i] + faces[i] != 2:
            raise EmbeddingInvalid(
                f"Euler formula fails on component of vertex {comp[0]}: "
                f"{len(comp)} - {edges[i]} + {faces[i]} != 2")


# ----------------------------------------------------------------------
# triangulation


def triangulate(g: EmbeddedGraph, big_m: int) -> EmbeddedGraph:
    """Add chords and apex vertices of weight ``big_m`` until every face is
    a triangle on three distinct vertices and there are more than three
    vertices.  Original vertex and edge ids are preserved."""
    if not g.is_simple:
        raise EmbeddingInvalid("triangulation needs a simple graph")
    if not g.is_connected:
        raise EmbeddingInvalid("triangulation needs a connected graph")
    if g.is_triangulated:
        return g
    rot = g.neighbor_rotations()
    adj = {frozenset(e) for e in g.ends}
    ends = list(g.ends)
    weights = list(g.weights)

    def insert_after(x, y, t):
        r = rot[x]
        if r:
            r.insert(r.index(y) + 1, t)
        else:
            r.append(t)

    def connect(u, v):
        adj.add(frozenset((u, v)))
        ends.append((u, v))
        weights.append(big_m)

    def new_vertex():
        rot.append([])
        return len(rot) - 1

    if g.m == 0:
        z = new_vertex()
        rot[0].append(z)
        rot[z].append(0)
        connect(0, z)

    guard = 0
    while True:
        guard += 1
        assert guard < 100 * (len(rot) + len(ends)) + 1000, "triangulation did not converge"
        walks = _vertex_faces(rot)
        bad = next((w for w in walks if len(w) != 3 or len(set(w)) != 3), None)
        if bad is None:
            if len(rot) > 3:
                break
            bad = walks[0]
            _apex(bad, rot, insert_after, connect, new_vertex)
            continue
        w = list(bad)
        progress = True
        while len(w) > 3 and progress:
            progress = False
            for i in range(len(w)):
                a, x, b = w[i - 1], w[i], w[(i + 1) % len(w)]
                if a != b and frozenset((a, b)) not in adj:
                    insert_after(a, x, b)
                    insert_after(b, w[(i + 2) % len(w)], a)
                    connect(a, b)
                    del w[i]
                    progress = True
                    break
        if len(w) != 3:
            _apex(w, rot, insert_after, connect, new_vertex)

    index = {frozenset(e): i for i, e in enumerate(ends)}
    rotation = []
    for x, nbrs in enumerate(rot):
        hs = []
        for y in nbrs:
            e = index[frozenset((x, y))]
            hs.append(2 * e if ends[e][0] == x else 2 * e + 1)
        rotation.append(hs)
    out = EmbeddedGraph(len(rot), ends, rotation, weights)
    assert out.is_triangulated, "triangulation invariant violated"
    _check_euler(out)
    return out


def _apex(walk, rot, insert_after, connect, new_vertex):
    z = new_vertex()
    seen = set()
    chosen = []
    for i, x in enumerate(walk):
        if x not in seen:
            seen.add(x)
            chosen.append(i)
    for i in chosen:
        x, y = walk[i], walk[(i + 1) % len(walk)]
        insert_after(x, y, z)
        rot[z].append(x)
        connect(x, z)


def _vertex_faces(rot: list[list[int]]) -> list[list[int]]:
    pos = [{y: i for i, y in enumerate(r)} for r in rot]
    done = set()
    walks = []
    for u, nbrs in enumerate(rot):
        for v in nbrs:
            if (u, v) in done:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in done:
                done.add((a, b))
                walk.append(a)
                r = rot[b]
                a, b = b, r[(pos[b][a] - 1) % len(r)]
            walks.append(walk)
    return walks


# ----------------------------------------------------------------------
# tie-breaking perturbation


def perturb(g: EmbeddedGraph, radii: list[int]) -> tuple[EmbeddedGraph, list[int], int]:
    """Exact symbolic perturbation of weights and radii.

    Base values are shifted left by ``shift`` bits.  Edge ``e`` adds
    ``2**e``, so distinct simple paths get distinct lengths and the low
    ``m`` bits of any path length stay below ``2**m``.  A radius adds
    ``rank * 2**m`` where ``rank`` orders objects by (radius, index): when a
    distance ties a radius difference, the larger radius wins by more than
    any edge-bit sum, so the tie keeps its original outcome, while distinct
    ranks make distance-minus-radius values of different objects differ.
    Returns the new graph, the perturbed radii and the shift; a sensitivity
    ``s`` becomes ``(s << shift) + 2**m`` so that coverage ties stay
    covered.
    """
    m, d = g.m, len(radii)
    shift = m + (d + 1).bit_length() + 2
    weights = [(w << shift) + (1 << e) for e, w in enumerate(g.weights)]
    order = sorted(range(d), key=lambda p: (radii[p], p))
    rank = {p: i for i, p in enumerate(order)}
    rads = [(r << shift) + (rank[p] << m) for p, r in enumerate(radii)]
    return EmbeddedGraph(g.n, g.ends, g.rotation, weights), rads, shift


# ----------------------------------------------------------------------
# shortest paths


def shortest_paths_from_set(g: EmbeddedGraph, sources, within=None) -> tuple[list, list[int]]:
    """Multi-source Dijkstra, optionally confined to the vertex set ``within``.

    Returns ``(dist, toward)`` where ``toward[v]`` is the half-edge leaving
    ``v`` along its shortest path to the source set (``-1`` at sources and
    unreachable vertices, whose distance is ``None``).
    """
    sources = list(sources)
    if not sources:
        raise ValueError("sources must be nonempty")
    dist: list = [None] * g.n
    toward = [-1] * g.n
    heap = []
    for s in sources:
        dist[s] = 0
        heap.append((0, s))
    heapq.heapify(heap)
    done = [False] * g.n
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for h in g.rotation[v]:
            w = g.target(h)
            if within is not None and w not in within:
                continue
            nd = d + g.weights[h >> 1]
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                toward[w] = h ^ 1
                heapq.heappush(heap, (nd, w))
    return dist, toward


def path_to_sources(g: EmbeddedGraph, toward: list[int], v: int) -> list[int]:
    """Vertices from ``v`` to its source along the ``toward`` pointers."""
    path = [v]
    while toward[path[-1]] != -1:
        path.append(g.target(toward[path[-1]]))
    return path


# ----------------------------------------------------------------------
# sides of a closed walk


@dataclass(frozen=True)
class ClosedWalkSides:
    cycle_edges: frozenset
    inside_faces: frozenset
    outside_faces: frozenset
    inside_vertices: frozenset
    outside_vertices: frozenset
    on_walk: frozenset

    @property
    def degenerate(self) -> bool:
        return not self.cycle_edges

    def side_of(self, vertices) -> str | None:
        """``"inside"``/``"outside"`` if all vertices lie strictly on that
        side, otherwise ``None``."""
        vs = set(vertices)
        if vs and vs <= self.inside_vertices:
            return "inside"
        if vs and vs <= self.outside_vertices:
            return "outside"
        return None


def classify_sides(g: EmbeddedGraph, path_a, path_b) -> ClosedWalkSides:
    """Split faces and vertices by the closed walk ``path_a``, the edge from
    the end of ``path_a`` to the end of ``path_b``, and ``path_b`` reversed.

    Both paths start at the same vertex.  The inside is the side holding the
    face to the left of the closing half-edge.  When the walk encloses
    nothing every face is reported outside.
    """
    path_a, path_b = list(path_a), list(path_b)
    if not path_a or not path_b or path_a[0] != path_b[0]:
        raise WalkMalformed("paths must share their first vertex")
    a, b = path_a[-1], path_b[-1]
    if g.edge_between(a, b) is None:
        raise WalkMalformed(f"no closing edge between {a} and {b}")
    cycle: set[int] = set()
    for path in (path_a, path_b):
        for x, y in zip(path, path[1:]):
            e = g.edge_between(x, y)
            if e is None:
                raise WalkMalformed(f"{x}-{y} is not an edge")
            cycle ^= {e}
    closing = g.half_edge(a, b)
    cycle ^= {closing >> 1}

    side = [-1] * len(g.faces)
    seeds = [g.face_of[closing], g.face_of[closing ^ 1]]
    for label, seed in enumerate(seeds):
        if side[seed] != -1:
            continue
        side[seed] = label
        stack = [seed]
        while stack:
            f = stack.pop()
            for h in g.faces[f]:
                if (h >> 1) in cycle:
                    continue
                nf = g.face_of[h ^ 1]
                if side[nf] == -1:
                    side[nf] = label
                    stack.append(nf)
    if -1 in side:
        raise WalkMalformed("walk splits the sphere into more than two parts")
    if not cycle:
        side = [1] * len(g.faces)

    on_walk = frozenset(path_a) | frozenset(path_b)
    votes = [[0, 0] for _ in range(g.n)]
    for f, walk in enumerate(g.faces):
        for h in walk:
            votes[g.origin(h)][side[f]] += 1
    inside_v, outside_v = set(), set()
    for v in range(g.n):
        if v in on_walk:
            continue
        (inside_v if votes[v][0] > votes[v][1] else outside_v).add(v)
    return ClosedWalkSides(
        cycle_edges=frozenset(cycle),
        inside_faces=frozenset(f for f, s in enumerate(side) if s == 0),
        outside_faces=frozenset(f for f, s in enumerate(side) if s == 1),
        inside_vertices=frozenset(inside_v),
        outside_vertices=frozenset(outside_v),
        on_walk=on_walk,
    )
