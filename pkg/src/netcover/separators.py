"""Voronoi separators, guarded separators and their enumeration.

A separator is a cyclic sequence of quadruples ``(p, u, f, v)``: object
``p`` owns ``u`` and the previous quadruple's ``v``, and consecutive
quadruples are glued through pairwise distinct faces.  Only the set-level
view ``(Q, perimeter)`` matters to the solver; it decides which clients are
already paid for, which objects may no longer be picked, and how the rest of
the instance falls apart into independent pieces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import InvalidSeparator, NooseInvalid, NotNormal
from .faces import cached_important_faces
from .instance import Prepared, bits, mask_of
from .voronoi import Diagram, Noose, owners


@dataclass(frozen=True)
class GuardedSeparator:
    objects: frozenset
    gamma: frozenset


@dataclass(frozen=True)
class Split:
    covered: frozenset
    banned: frozenset
    components: tuple       # ((object ids, client ids), ...)


# ----------------------------------------------------------------------
# single separators


def validate_separator(prep: Prepared, seq) -> bool:
    try:
        seq = [tuple(int(x) for x in quad) for quad in seq]
    except (TypeError, ValueError):
        return False
    if not seq or any(len(q) != 4 for q in seq):
        return False
    objs = [q[0] for q in seq]
    faces = [q[2] for q in seq]
    if len(set(objs)) != len(objs) or len(set(faces)) != len(faces):
        return False
    if any(not 0 <= p < prep.d for p in objs):
        return False
    if any(not 0 <= f < len(prep.graph.faces) for f in faces):
        return False
    if not prep.is_normal_mask(mask_of(objs)):
        return False
    phi = prep.phi
    for t, (p, u, f, v) in enumerate(seq):
        corners = prep.graph.face_vertices(f)
        if u == v or u not in corners or v not in corners:
            return False
        for x in (seq[t - 1][3], u):
            if any(phi[s][x] <= phi[p][x] for s in objs if s != p):
                return False
    return True


def perimeter(prep: Prepared, seq) -> frozenset:
    """Vertices of all tree-plus-shortest paths from each object's center to
    its two anchor vertices."""
    if not validate_separator(prep, seq):
        raise InvalidSeparator("not a Voronoi separator")
    out: set = set()
    for t, (p, u, _, _) in enumerate(seq):
        out.update(prep.extree_path(p, u))
        out.update(prep.extree_path(p, seq[t - 1][3]))
    return frozenset(out)


def separator_from_noose(prep: Prepared, family, dgm: Diagram, noose: Noose) -> tuple:
    """Quadruples read off a noose: each visited branching point contributes
    the corner vertices where the curve enters and leaves it."""
    visits = noose.visits
    if not visits:
        raise NooseInvalid("empty noose")
    seen = set()
    for idx, (f, i, j) in enumerate(visits):
        if (f, i) not in dgm.corner_vertex or (f, j) not in dgm.corner_vertex or i == j:
            raise NooseInvalid(f"bad visit {(f, i, j)}")
        if f in seen:
            raise NooseInvalid(f"face {f} visited twice")
        seen.add(f)
        nf, ni, _ = visits[(idx + 1) % len(visits)]
        if dgm.corner_object[(f, j)] != dgm.corner_object[(nf, ni)]:
            raise NooseInvalid("consecutive visits do not share a diagram face")
    return tuple((dgm.corner_object[(f, i)], dgm.corner_vertex[(f, i)], f,
                  dgm.corner_vertex[(f, j)]) for f, i, j in visits)


def guarded_from_sequence(prep: Prepared, seq) -> GuardedSeparator:
    return GuardedSeparator(frozenset(q[0] for q in seq), perimeter(prep, seq))


# ----------------------------------------------------------------------
# guarded separators


def covered_by(prep: Prepared) -> list[int]:
    """For every client, the mask of objects covering it."""
    out = prep.cache.get("covered_by")
    if out is None:
        out = [0] * prep.c
        for p in range(prep.d):
            for q in bits(prep.covers[p]):
                out[q] |= 1 << p
        prep.cache["covered_by"] = out
    return out


def beaten_masks(prep: Prepared, qmask: int) -> list[int]:
    """Per object, the vertices where it strictly beats every member of
    ``qmask``, as a vertex bitmask."""
    key = ("beaten", qmask)
    out = prep.cache.get(key)
    if out is not None:
        return out
    q = list(bits(qmask))
    phi = prep.phi
    best = [min(phi[s][v] for s in q) for v in range(prep.n)] if q else None
    out = []
    for p in range(prep.d):
        m = 0
        row = phi[p]
        for v in range(prep.n):
            if best is None or row[v] < best[v]:
                m |= 1 << v
        out.append(m)
    prep.cache[key] = out
    return out


def banned_mask(prep: Prepared, qmask: int, gamma_mask: int, objmask: int) -> int:
    ban = 0
    beat = beaten_masks(prep, qmask)
    for p in bits(objmask & ~qmask):
        if prep.conflict[p] & qmask or beat[p] & gamma_mask:
            ban |= 1 << p
    return ban


def covered_mask(prep: Prepared, qmask: int, climask: int) -> int:
    cov = 0
    for p in bits(qmask):
        cov |= prep.covers[p]
    return cov & climask


def interaction_components(prep: Prepared, objmask: int, climask: int) -> list[tuple[int, int]]:
    """Connected components of the interaction graph restricted to the given
    objects and clients, as (object mask, client mask) pairs ordered by
    their smallest object, clientless-object components first."""
    cov_by = covered_by(prep)
    left_o, left_c = objmask, climask
    comps = []
    while left_o:
        start = left_o & -left_o
        o_mask, c_mask = start, 0
        frontier = start
        while frontier:
            p = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new_c = prep.covers[p] & left_c & ~c_mask
            c_mask |= new_c
            grow = prep.conflict[p]
            for q in bits(new_c):
                grow |= cov_by[q]
            grow &= left_o & ~o_mask
            o_mask |= grow
            frontier |= grow
        left_o &= ~o_mask
        left_c &= ~c_mask
        comps.append((o_mask, c_mask))
    for q in bits(left_c):
        comps.append((0, 1 << q))
    return comps


def analyze_guarded(prep: Prepared, sep: GuardedSeparator, objects=None, clients=None) -> Split:
    """Covered clients, banned objects and remaining interaction components
    for ``sep`` inside the given object and client sets (default: all)."""
    objmask = (1 << prep.d) - 1 if objects is None else mask_of(objects)
    climask = (1 << prep.c) - 1 if clients is None else mask_of(clients)
    qmask = mask_of(sep.objects)
    if not prep.is_normal_mask(qmask):
        raise NotNormal(f"{sorted(sep.objects)} is not normal")
    gamma = mask_of(sep.gamma)
    ban = banned_mask(prep, qmask, gamma, objmask)
    cov = covered_mask(prep, qmask, climask)
    comps = interaction_components(prep, objmask & ~qmask & ~ban, climask & ~cov)
    return Split(frozenset(bits(cov)), frozenset(bits(ban)),
                 tuple((tuple(bits(o)), tuple(bits(c))) for o, c in comps))


def is_compatible(prep: Prepared, sep: GuardedSeparator, family, objects=None) -> bool:
    fam = set(family)
    if not set(sep.objects) <= fam:
        return False
    split = analyze_guarded(prep, sep, objects)
    return not (fam & split.banned)


def is_balanced(prep: Prepared, sep: GuardedSeparator, family, objects=None,
                clients=None) -> bool:
    """Every interaction component holds at most two thirds of ``family``."""
    fam = set(family)
    cap = (2 * len(fam)) // 3
    split = analyze_guarded(prep, sep, objects, clients)
    return all(len(fam & set(objs)) <= cap for objs, _ in split.components)


# ----------------------------------------------------------------------
# enumeration


def length_cap(k: int, available: int) -> int:
    return min(math.isqrt(9 * k), k, available)


def _cycles(prep: Prepared, objects: tuple, cap: int):
    """Object cycles with the smallest object first and every prefix normal."""
    def grow(seq, mask):
        yield tuple(seq)
        if len(seq) == cap:
            return
        for p in objects:
            if p <= seq[0] or (mask >> p) & 1 or prep.conflict[p] & mask:
                continue
            seq.append(p)
            yield from grow(seq, mask | (1 << p))
            seq.pop()

    for p in objects:
        yield from grow([p], 1 << p)


def _options(prep: Prepared, cycle: tuple, faces) -> list[list[tuple]]:
    """Per slot, admissible ``(u, f, v, gamma_mask)`` triples given that the
    cycle's objects are exactly the separator's objects."""
    own = owners(prep, cycle)
    g = prep.graph
    out = []
    r = len(cycle)
    for t, p in enumerate(cycle):
        nxt = cycle[(t + 1) % r]
        slot = []
        for f in faces:
            corners = g.face_vertices(f)
            for u in corners:
                if own[u] != p:
                    continue
                for v in corners:
                    if v != u and own[v] == nxt:
                        slot.append((u, f, v, _path_mask(prep, p, u) | _path_mask(prep, nxt, v)))
        out.append(slot)
    return out


def _path_mask(prep: Prepared, p: int, v: int) -> int:
    key = ("pathmask", p, v)
    m = prep.cache.get(key)
    if m is None:
        m = prep.cache[key] = mask_of(prep.extree_path(p, v))
    return m


def _assemble(cycle, options, t, used, chosen, gamma):
    if t == len(cycle):
        yield tuple(chosen), gamma
        return
    for u, f, v, gm in options[t]:
        if f in used:
            continue
        used.add(f)
        chosen.append((cycle[t], u, f, v))
        yield from _assemble(cycle, options, t + 1, used, chosen, gamma | gm)
        chosen.pop()
        used.discard(f)


def separator_sequences(prep: Prepared, k: int, objects=None, prune: bool = True):
    """Every valid separator of length at most the cap, over the given
    objects and their important faces, in canonical rotation (smallest
    object first), as ``(sequence, gamma_mask)`` pairs."""
    objects = tuple(range(prep.d)) if objects is None else tuple(sorted(objects))
    if not objects or k < 1:
        return
    faces = sorted(cached_important_faces(prep).restricted(objects))
    cap = length_cap(k, len(objects))
    if prune:
        for cycle in _cycles(prep, objects, cap):
            yield from _assemble(cycle, _options(prep, cycle, faces), 0, set(), [], 0)
    else:
        yield from _exhaustive_sequences(prep, objects, faces, cap)


def _exhaustive_sequences(prep: Prepared, objects, faces, cap):
    """Reference route: every ordered object tuple, every face and corner
    pair in each slot, filtered by the full validity check only."""
    g = prep.graph
    phi = prep.phi
    for r in range(1, cap + 1):
        for combo in combinations(objects, r):
            first, rest = combo[0], combo[1:]
            for tail in permutations(rest):
                cycle = (first,) + tail

                def wins(p, x, cyc=cycle):
                    return all(phi[p][x] < phi[s][x] for s in cyc if s != p)

                slots = []
                for t, p in enumerate(cycle):
                    nxt = cycle[(t + 1) % r]
                    slot = []
                    for f in faces:
                        corners = g.face_vertices(f)
                        for u in corners:
                            for v in corners:
                                if u != v and wins(p, u) and wins(nxt, v):
                                    slot.append((u, f, v))
                    slots.append(slot)
                yield from _product(prep, cycle, slots, 0, [])


def _product(prep, cycle, slots, t, chosen):
    if t == len(cycle):
        seq = tuple(chosen)
        if validate_separator(prep, seq):
            yield seq, mask_of(perimeter(prep, seq))
        return
    for u, f, v in slots[t]:
        chosen.append((cycle[t], u, f, v))
        yield from _product(prep, cycle, slots, t + 1, chosen)
        chosen.pop()


def enumerate_guarded_separators(prep: Prepared, k: int, objects=None, prune: bool = True):
    """Distinct guarded separators in deterministic order."""
    seen = set()
    for seq, gamma in separator_sequences(prep, k, objects, prune):
        key = (mask_of(q[0] for q in seq), gamma)
        if key in seen:
            continue
        seen.add(key)
        yield GuardedSeparator(frozenset(q[0] for q in seq), frozenset(bits(gamma)))


def describe(prep: Prepared, seq) -> str:
    """Text dump of a separator: quadruples, perimeter and split sizes."""
    sep = guarded_from_sequence(prep, seq)
    split = analyze_guarded(prep, sep)
    quads = " ".join(f"({p},{u},{f},{v})" for p, u, f, v in seq)
    return (f"separator {quads}\n"
            f"gamma {' '.join(map(str, sorted(sep.gamma)))}\n"
            f"covered {len(split.covered)} banned {len(split.banned)} "
            f"components {len(split.components)}")
