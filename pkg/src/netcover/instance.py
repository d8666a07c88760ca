"""Problem instances and their exact preprocessed form.

An :class:`Instance` carries scaled integers exactly as read from input.
:class:`Prepared` is the working form of one connected instance: the graph is
triangulated and perturbed, and per-object distance tables, coverage and
conflict masks are precomputed once and shared read-only afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import (EmbeddedGraph, from_neighbor_rotations, perturb,
                        shortest_paths_from_set, triangulate)
from .errors import MalformedInstance


@dataclass(frozen=True)
class Facility:
    """A selectable object: connected location, cost and radius."""
    loc: tuple[int, ...]
    cost: int
    rad: int


@dataclass(frozen=True)
class Client:
    pla: int
    sen: int
    pri: int


@dataclass
class Instance:
    graph: EmbeddedGraph
    facilities: list[Facility]
    clients: list[Client]
    k: int
    scale: int = 10 ** 6
    at_most: bool = False

    def validate(self) -> None:
        n = self.graph.n
        if self.k < 0:
            raise MalformedInstance("budget must be nonnegative")
        for i, f in enumerate(self.facilities):
            if not f.loc:
                raise MalformedInstance(f"object {i} has an empty location")
            if any(not 0 <= v < n for v in f.loc) or len(set(f.loc)) != len(f.loc):
                raise MalformedInstance(f"object {i} has a bad location")
            if f.rad < 0:
                raise MalformedInstance(f"object {i} has a negative radius")
            if not _connected(self.graph, set(f.loc)):
                raise MalformedInstance(f"object {i} has a disconnected location")
        for j, c in enumerate(self.clients):
            if not 0 <= c.pla < n:
                raise MalformedInstance(f"client {j} is placed outside the graph")


def _connected(g: EmbeddedGraph, vs: set[int]) -> bool:
    start = next(iter(vs))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


@dataclass
class Part:
    """One connected component of an instance with maps to global ids."""
    instance: Instance
    vertex_ids: list[int]
    facility_ids: list[int]
    client_ids: list[int]


def split_components(inst: Instance) -> list[Part]:
    g = inst.graph
    parts = []
    for comp in g.components():
        local = {v: i for i, v in enumerate(comp)}
        rot = [[local[w] for w in g.neighbors(v)] for v in comp]
        sub = from_neighbor_rotations(rot, lambda a, b: g.weight(comp[a], comp[b]))
        fids = [i for i, f in enumerate(inst.facilities) if f.loc[0] in local]
        cids = [j for j, c in enumerate(inst.clients) if c.pla in local]
        facs = [Facility(tuple(local[v] for v in inst.facilities[i].loc),
                         inst.facilities[i].cost, inst.facilities[i].rad) for i in fids]
        clis = [Client(local[inst.clients[j].pla], inst.clients[j].sen,
                       inst.clients[j].pri) for j in cids]
        parts.append(Part(Instance(sub, facs, clis, inst.k, inst.scale), comp, fids, cids))
    return parts


def big_weight(inst: Instance) -> int:
    """A base weight exceeding every finite distance and coverage threshold."""
    rad = max((f.rad for f in inst.facilities), default=0)
    sen = max((c.sen for c in inst.clients), default=0)
    return 1 + sum(inst.graph.weights) + max(rad, 0) + max(sen, 0)


@dataclass
class Prepared:
    """Triangulated, perturbed, fully tabulated connected instance."""
    source: Instance
    graph: EmbeddedGraph
    rad: list[int]
    sen: list[int]
    cost: list[int]
    pri: list[int]
    locs: list[frozenset]
    cen: list[int]
    dist: list[list[int]]
    toward: list[list[int]]
    up: list[list[int]]
    phi: list[list[int]]
    conflict: list[int]
    covers: list[int]
    original_n: int
    shift: int
    _paths: dict = field(default_factory=dict, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return len(self.rad)

    @property
    def c(self) -> int:
        return len(self.sen)

    @property
    def n(self) -> int:
        return self.graph.n

    def loc_distance(self, p: int, q: int) -> int:
        return min(self.dist[p][v] for v in self.locs[q])

    def pair_normal(self, p: int, q: int) -> bool:
        return not (self.conflict[p] >> q) & 1

    def is_normal_mask(self, mask: int) -> bool:
        rest = mask
        while rest:
            p = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if self.conflict[p] & mask:
                return False
        return True

    def extree_path(self, p: int, v: int) -> tuple[int, ...]:
        """Vertices from ``cen(p)`` to ``v`` following the tree of ``p``:
        the shortest path from ``v`` into ``loc(p)`` joined with the tree of
        shortest paths inside ``loc(p)`` rooted at ``cen(p)``."""
        key = (p, v)
        path = self._paths.get(key)
        if path is None:
            up = self.up[p]
            walk = [v]
            while up[walk[-1]] != -1:
                walk.append(self.graph.target(up[walk[-1]]))
            path = tuple(reversed(walk))
            self._paths[key] = path
        return path

    def revenue_of_mask(self, mask: int, client_mask: int | None = None) -> int:
        covered = 0
        total = 0
        rest = mask
        while rest:
            p = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            covered |= self.covers[p]
            total -= self.cost[p]
        if client_mask is not None:
            covered &= client_mask
        while covered:
            q = (covered & -covered).bit_length() - 1
            covered &= covered - 1
            total += self.pri[q]
        return total


def prepare(inst: Instance) -> Prepared:
    """Triangulate with heavy edges, perturb, and tabulate distances."""
    g0 = inst.graph
    if not g0.is_connected:
        raise MalformedInstance("prepare expects a connected instance")
    inst.validate()
    tri = triangulate(g0, big_weight(inst))
    g, rads, shift = perturb(tri, [f.rad for f in inst.facilities])
    sens = [(c.sen << shift) + (1 << g.m) for c in inst.clients]
    d = len(inst.facilities)
    locs = [frozenset(f.loc) for f in inst.facilities]
    cen = [min(f.loc) for f in inst.facilities]
    dist, toward, up, phi = [], [], [], []
    for p, f in enumerate(inst.facilities):
        dp, tp = shortest_paths_from_set(g, f.loc)
        _, inner = shortest_paths_from_set(g, [cen[p]], within=locs[p])
        u = list(tp)
        for v in f.loc:
            u[v] = inner[v]
        dist.append(dp)
        toward.append(tp)
        up.append(u)
        phi.append([x - rads[p] for x in dp])
    conflict = [0] * d
    for p in range(d):
        for q in range(p + 1, d):
            gap = min(dist[p][v] for v in locs[q])
            if not (gap > rads[p] - rads[q] and gap > rads[q] - rads[p]):
                conflict[p] |= 1 << q
                conflict[q] |= 1 << p
    covers = [0] * d
    for p in range(d):
        for j, cl in enumerate(inst.clients):
            if dist[p][cl.pla] <= sens[j] + rads[p]:
                covers[p] |= 1 << j
    return Prepared(
        source=inst, graph=g, rad=rads, sen=sens,
        cost=[f.cost for f in inst.facilities], pri=[c.pri for c in inst.clients],
        locs=locs, cen=cen, dist=dist, toward=toward, up=up, phi=phi,
        conflict=conflict, covers=covers, original_n=g0.n, shift=shift)


def distance_table(prep: Prepared) -> list[list[int]]:
    """``table[p][v] = dist(v, loc(p))`` on the perturbed graph."""
    return prep.dist


def bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m
