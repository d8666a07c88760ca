"""Singular faces of three kinds and the important-face family.

Every branching point of the diagram of any normal family is a face where
three regions meet (kind 1), where one region wraps around an edge between
two others (kind 2), or where one region surrounds the face on all sides
with three other objects cut off behind it (kind 3).  Enumerating these over
all triples and quadruples gives a small face set containing every
branching point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .embedding import classify_sides
from .errors import BadTupleSize, NetcoverError, NotNormal
from .instance import Prepared
from .voronoi import is_normal, owners

MAX_QUADRUPLE_OBJECTS = 64


def _face_triangle(prep: Prepared, f: int) -> tuple[int, int, int]:
    return tuple(prep.graph.face_vertices(f))


def _tree_edge(prep: Prepared, p: int, x: int, y: int) -> bool:
    g = prep.graph
    up = prep.up[p]
    return (up[x] != -1 and g.target(up[x]) == y) or (up[y] != -1 and g.target(up[y]) == x)


def _wrap_sides(prep: Prepared, p: int, a: int, b: int):
    """Sides of the walk through the tree of ``p`` to ``a`` and ``b`` closed
    by the edge ``ab``; ``None`` when that edge is a tree edge."""
    if _tree_edge(prep, p, a, b):
        return None
    sides = classify_sides(prep.graph, prep.extree_path(p, a), prep.extree_path(p, b))
    return None if sides.degenerate else sides


def _separates(sides, loc1, loc2) -> bool:
    s1, s2 = sides.side_of(loc1), sides.side_of(loc2)
    return s1 is not None and s2 is not None and s1 != s2


def _kind1(own, tri, tup) -> bool:
    return {own[v] for v in tri} == set(tup)


def _kind2(prep, own, tri, tup) -> bool:
    p1, p2, p3 = tup
    ones = [v for v in tri if own[v] == p1]
    twos = [v for v in tri if own[v] == p2]
    if len(ones) != 1 or len(twos) != 2:
        return False
    sides = _wrap_sides(prep, p2, twos[0], twos[1])
    return sides is not None and _separates(sides, prep.locs[p1], prep.locs[p3])


def _kind3_disks(prep, f, tri, p0):
    """For ``t = 0, 1, 2`` the vertex set of the disk cut off by the walk
    through the two triangle corners other than ``tri[t]``, on the side
    away from ``f``; ``None`` if the face does not qualify."""
    disks = []
    for t in range(3):
        a, b = tri[(t + 1) % 3], tri[(t + 2) % 3]
        sides = _wrap_sides(prep, p0, a, b)
        if sides is None:
            return None
        away = sides.outside_vertices if f in sides.inside_faces else sides.inside_vertices
        disks.append(away)
    return disks


def _kind3_precheck(prep, own, tri, p0) -> bool:
    if any(own[v] != p0 for v in tri):
        return False
    return not any(_tree_edge(prep, p0, tri[i], tri[(i + 1) % 3]) for i in range(3))


def singular_face(prep: Prepared, f: int, tup, kind: int, family=None) -> bool:
    """Whether face ``f`` is singular of the given kind, certified by
    ``tup`` in this order, with regions taken from ``family`` (by default
    the tuple itself)."""
    tup = tuple(tup)
    need = 4 if kind == 3 else 3
    if kind not in (1, 2, 3) or len(tup) != need or len(set(tup)) != need:
        raise BadTupleSize(f"kind {kind} needs {need} distinct objects")
    family = tup if family is None else tuple(family)
    if not set(tup) <= set(family):
        raise BadTupleSize("tuple must be drawn from the family")
    if not is_normal(prep, family):
        raise NotNormal(f"{family} is not normal")
    own = owners(prep, family)
    tri = _face_triangle(prep, f)
    if kind == 1:
        return _kind1(own, tri, tup)
    if kind == 2:
        return _kind2(prep, own, tri, tup)
    p0 = tup[0]
    if not _kind3_precheck(prep, own, tri, p0):
        return False
    disks = _kind3_disks(prep, f, tri, p0)
    return disks is not None and all(prep.locs[p] <= disks[t]
                                     for t, p in enumerate(tup[1:]))


@dataclass
class ImportantFaces:
    faces: frozenset
    provenance: dict = field(default_factory=dict)

    def restricted(self, objects) -> frozenset:
        """Faces certified by some tuple drawn from ``objects``."""
        allowed = set(objects)
        return frozenset(f for f, certs in self.provenance.items()
                         if any(set(t) <= allowed for _, t in certs))

    def counts(self) -> dict:
        """Number of certified faces per (kind, tuple); kind-1 tuples are
        reported sorted since every ordering certifies the same faces."""
        out: dict = {}
        for f, certs in self.provenance.items():
            for kind, t in certs:
                out[(kind, t)] = out.get((kind, t), 0) + 1
        return out


def important_faces(prep: Prepared, max_objects: int = MAX_QUADRUPLE_OBJECTS) -> ImportantFaces:
    if prep.d > max_objects:
        raise NetcoverError(f"{prep.d} objects exceed the quadruple cap {max_objects}")
    g = prep.graph
    tris = [_face_triangle(prep, f) for f in range(len(g.faces))]
    prov: dict = {}

    def add(f, kind, tup):
        prov.setdefault(f, []).append((kind, tup))

    for trip in combinations(range(prep.d), 3):
        if not prep.is_normal_mask(sum(1 << p for p in trip)):
            continue
        own = owners(prep, trip)
        for f, tri in enumerate(tris):
            labels = [own[v] for v in tri]
            distinct = set(labels)
            if len(distinct) == 3:
                add(f, 1, trip)
            elif len(distinct) == 2:
                p2 = next(p for p in distinct if labels.count(p) == 2)
                p1 = next(p for p in distinct if p != p2)
                p3 = next(p for p in trip if p not in distinct)
                if _kind2(prep, own, tri, (p1, p2, p3)):
                    add(f, 2, (p1, p2, p3))

    for quad in combinations(range(prep.d), 4):
        if not prep.is_normal_mask(sum(1 << p for p in quad)):
            continue
        own = owners(prep, quad)
        for f, tri in enumerate(tris):
            p0 = own[tri[0]]
            if not _kind3_precheck(prep, own, tri, p0):
                continue
            disks = _kind3_disks(prep, f, tri, p0)
            if disks is None:
                continue
            rest = [p for p in quad if p != p0]
            for perm in permutations(rest):
                if all(prep.locs[p] <= disks[t] for t, p in enumerate(perm)):
                    add(f, 3, (p0,) + perm)
    return ImportantFaces(frozenset(prov), prov)


def cached_important_faces(prep: Prepared) -> ImportantFaces:
    imp = prep.cache.get("important_faces")
    if imp is None:
        imp = prep.cache["important_faces"] = important_faces(prep)
    return imp
