"""Normal families, additively weighted Voronoi partitions, and the dual
skeleton of their region boundaries (prediagram and its 3-regular
contraction), plus a brute-force search for balanced nooses of it."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .errors import DegenerateFamily, NotNormal, UnknownObjectId
from .instance import Prepared


def _check_ids(prep: Prepared, family) -> tuple[int, ...]:
    fam = tuple(sorted(set(family)))
    for p in fam:
        if not 0 <= p < prep.d:
            raise UnknownObjectId(f"unknown object {p}")
    return fam


def is_normal(prep: Prepared, family) -> bool:
    fam = _check_ids(prep, family)
    return all(prep.pair_normal(p, q) for p, q in combinations(fam, 2))


@dataclass(frozen=True)
class VoronoiPartition:
    family: tuple[int, ...]
    owner: tuple[int, ...]
    regions: dict
    extree_edges: dict

    def all_extree_edges(self) -> frozenset:
        out = set()
        for es in self.extree_edges.values():
            out |= es
        return frozenset(out)


def owners(prep: Prepared, family) -> list[int]:
    """For every vertex, the object of ``family`` minimizing distance minus
    radius.  Unique because perturbed values never tie."""
    fam = tuple(family)
    phi = prep.phi
    out = []
    for v in range(prep.n):
        best = fam[0]
        bv = phi[best][v]
        for p in fam[1:]:
            x = phi[p][v]
            if x < bv:
                best, bv = p, x
        out.append(best)
    return out


def voronoi_partition(prep: Prepared, family) -> VoronoiPartition:
    fam = _check_ids(prep, family)
    if not fam:
        raise NotNormal("empty family has no partition")
    if not is_normal(prep, fam):
        raise NotNormal(f"family {fam} is not normal")
    own = owners(prep, fam)
    regions = {p: set() for p in fam}
    for v, p in enumerate(own):
        regions[p].add(v)
    extree = {}
    for p in fam:
        up = prep.up[p]
        extree[p] = frozenset(up[v] >> 1 for v in regions[p] if up[v] != -1)
    return VoronoiPartition(fam, tuple(own), {p: frozenset(r) for p, r in regions.items()},
                            extree)


# ----------------------------------------------------------------------
# prediagram


@dataclass
class Prediagram:
    partition: VoronoiPartition
    edges: frozenset          # primal edge ids whose duals survive
    degree: dict              # face -> surviving dual degree (2 or 3)
    groups: list              # vertex sets of the prediagram's faces
    group_of_object: dict     # object -> index into groups

    @property
    def size(self) -> int:
        return len(self.partition.family)


def build_prediagram(prep: Prepared, part: VoronoiPartition) -> Prediagram:
    g = prep.graph
    removed = part.all_extree_edges()
    alive = [e not in removed for e in range(g.m)]
    deg = [sum(alive[h >> 1] for h in walk) for walk in g.faces]
    stack = [f for f, x in enumerate(deg) if x == 1]
    while stack:
        f = stack.pop()
        if deg[f] != 1:
            continue
        h = next(h for h in g.faces[f] if alive[h >> 1])
        alive[h >> 1] = False
        deg[f] = 0
        other = g.face_of[h ^ 1]
        deg[other] -= 1
        if deg[other] == 1:
            stack.append(other)
    edges = frozenset(e for e in range(g.m) if alive[e])

    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (u, v) in enumerate(g.ends):
        if not alive[e]:
            parent[find(u)] = find(v)
    by_root: dict[int, set] = {}
    for v in range(g.n):
        by_root.setdefault(find(v), set()).add(v)
    roots = sorted(by_root, key=lambda r: min(by_root[r]))
    groups = [frozenset(by_root[r]) for r in roots]
    index = {r: i for i, r in enumerate(roots)}
    group_of_object = {p: index[find(prep.cen[p])] for p in part.family}
    return Prediagram(part, edges, {f: x for f, x in enumerate(deg) if x > 0},
                      groups, group_of_object)


# ----------------------------------------------------------------------
# diagram


@dataclass(frozen=True)
class DiagramEdge:
    ends: tuple        # ((face, side), (face, side)); sides index the face walk
    chain: tuple       # primal edges crossed, from the first end to the second

    @property
    def is_loop(self) -> bool:
        return self.ends[0][0] == self.ends[1][0]


@dataclass
class Diagram:
    prediagram: Prediagram
    vertices: list            # branching points (faces of the primal graph)
    edges: list               # DiagramEdge
    slot: dict                # (face, side) -> (edge index, end)
    corner_vertex: dict       # (face, i) -> primal vertex between sides i, i+1
    corner_object: dict       # (face, i) -> owning object of that vertex

    @property
    def family(self) -> tuple:
        return self.prediagram.partition.family

    @property
    def face_count(self) -> int:
        return len(set(self.corner_object.values()))

    def corners(self):
        return [(f, i) for f in self.vertices for i in range(3)]

    def bridges(self) -> set:
        """Indices of diagram edges whose removal disconnects the diagram."""
        out = set()
        for idx, e in enumerate(self.edges):
            if e.is_loop:
                continue
            if not self._connected_without(idx):
                out.add(idx)
        return out

    def _connected_without(self, skip: int) -> bool:
        adj = {f: [] for f in self.vertices}
        for idx, e in enumerate(self.edges):
            if idx == skip:
                continue
            a, b = e.ends[0][0], e.ends[1][0]
            adj[a].append(b)
            adj[b].append(a)
        start = self.vertices[0]
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def is_connected(self) -> bool:
        return self._connected_without(-1)

    def export_text(self) -> str:
        lines = [f"vertices {' '.join(map(str, self.vertices))}"]
        for idx, e in enumerate(self.edges):
            (a, i), (b, j) = e.ends
            tag = " loop" if e.is_loop else ""
            lines.append(f"edge {idx} {a}:{i} {b}:{j} len={len(e.chain)}{tag}")
        for (f, i), p in sorted(self.corner_object.items()):
            lines.append(f"corner {f}:{i} vertex={self.corner_vertex[(f, i)]} object={p}")
        return "\n".join(lines)


def build_diagram(prep: Prepared, pre: Prediagram) -> Diagram:
    if pre.size <= 2:
        raise DegenerateFamily("diagrams need at least three objects")
    g = prep.graph
    branch = sorted(f for f, x in pre.degree.items() if x == 3)
    is_branch = set(branch)
    slot: dict = {}
    edges: list = []
    for f in branch:
        for i, h in enumerate(g.faces[f]):
            if (f, i) in slot or (h >> 1) not in pre.edges:
                continue
            chain = [h >> 1]
            cross = h
            cur = g.face_of[h ^ 1]
            while cur not in is_branch:
                nxt = next(x for x in g.faces[cur]
                           if (x >> 1) in pre.edges and (x >> 1) != (cross >> 1))
                chain.append(nxt >> 1)
                cross = nxt
                cur = g.face_of[nxt ^ 1]
            j = g.faces[cur].index(cross ^ 1)
            idx = len(edges)
            edges.append(DiagramEdge(((f, i), (cur, j)), tuple(chain)))
            slot[(f, i)] = (idx, 0)
            slot[(cur, j)] = (idx, 1)
    own = pre.partition.owner
    corner_vertex, corner_object = {}, {}
    for f in branch:
        walk = g.faces[f]
        for i in range(3):
            v = g.target(walk[i])
            corner_vertex[(f, i)] = v
            corner_object[(f, i)] = own[v]
    return Diagram(pre, branch, edges, slot, corner_vertex, corner_object)


def loop_bounds_face(prep: Prepared, dgm: Diagram, edge_index: int) -> bool:
    """True when one of the two sides of a loop holds a single region."""
    g = prep.graph
    cut = set(dgm.edges[edge_index].chain)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (u, v) in enumerate(g.ends):
        if e not in cut:
            parent[find(u)] = find(v)
    sides: dict[int, set] = {}
    for v in range(g.n):
        sides.setdefault(find(v), set()).add(v)
    if len(sides) != 2:
        return False
    own = dgm.prediagram.partition.owner
    return any(len({own[v] for v in side}) == 1 for side in sides.values())


# ----------------------------------------------------------------------
# nooses


@dataclass(frozen=True)
class Noose:
    """Cyclic visits ``(face, in_corner, out_corner)`` of branching points.

    Between consecutive visits the curve runs through the diagram face of
    the object owning the out-corner of one visit and the in-corner of the
    next one.
    """
    visits: tuple

    def objects(self, dgm: Diagram) -> list[int]:
        return [dgm.corner_object[(f, i)] for f, i, _ in self.visits]

    @property
    def length(self) -> int:
        return len(self.visits)


def noose_sides(dgm: Diagram, noose: Noose) -> tuple[set, set]:
    """Objects strictly on either side of the noose."""
    blocked = set()
    for f, i, j in noose.visits:
        blocked.add((f, i))
        blocked.add((f, j))
    label = [-1] * len(dgm.edges)
    adj = [[] for _ in dgm.edges]
    for f in dgm.vertices:
        for i in range(3):
            if (f, i) in blocked:
                continue
            a = dgm.slot[(f, i)][0]
            b = dgm.slot[(f, (i + 1) % 3)][0]
            adj[a].append(b)
            adj[b].append(a)
    classes = 0
    for s in range(len(dgm.edges)):
        if label[s] != -1:
            continue
        label[s] = classes
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] == -1:
                    label[y] = classes
                    stack.append(y)
        classes += 1
    on = set(noose.objects(dgm))
    buckets: dict[int, set] = {}
    for (f, i), p in dgm.corner_object.items():
        if p in on:
            continue
        buckets.setdefault(label[dgm.slot[(f, i)][0]], set()).add(p)
    if len(buckets) > 2:
        raise AssertionError("noose does not split the diagram into two sides")
    vals = list(buckets.values()) + [set(), set()]
    return vals[0], vals[1]


def noose_length_bound(ell: int) -> int:
    return math.ceil(math.sqrt(4.5 * (2 * ell - 4)))


def find_balanced_noose(dgm: Diagram, max_length: int | None = None) -> Noose | None:
    """Shortest noose leaving at most ``floor(2l/3)`` diagram faces strictly
    on each side, found by exhaustive search over simple radial cycles."""
    ell = len(dgm.family)
    limit = noose_length_bound(ell) if max_length is None else max_length
    bound = (2 * ell) // 3
    by_object: dict[int, list] = {}
    for f in dgm.vertices:
        for i in range(3):
            by_object.setdefault(dgm.corner_object[(f, i)], []).append((f, i))

    for length in range(1, limit + 1):
        for f0 in dgm.vertices:
            for i0 in range(3):
                start = dgm.corner_object[(f0, i0)]
                found = _extend(dgm, by_object, [(f0, i0)], length, bound, {f0},
                                {start}, start)
                if found is not None:
                    return found
    return None


def _extend(dgm, by_object, partial, length, bound, used_faces, used_objects,
            start_object):
    f, i = partial[-1]
    for j in range(3):
        if j == i:
            continue
        nxt = dgm.corner_object[(f, j)]
        visits = partial[:-1] + [(f, i, j)]
        if len(visits) == length:
            if nxt == start_object:
                noose = Noose(tuple(visits))
                a, b = noose_sides(dgm, noose)
                if len(a) <= bound and len(b) <= bound:
                    return noose
            continue
        if nxt in used_objects:
            continue
        for g2, i2 in by_object[nxt]:
            if g2 in used_faces:
                continue
            used_faces.add(g2)
            used_objects.add(nxt)
            res = _extend(dgm, by_object, visits + [(g2, i2)], length, bound,
                          used_faces, used_objects, start_object)
            used_faces.discard(g2)
            used_objects.discard(nxt)
            if res is not None:
                return res
    return None
