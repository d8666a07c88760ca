"""Exact plane helpers shared by the generators and geometric reductions."""
from __future__ import annotations

from functools import cmp_to_key

from .embedding import EmbeddedGraph, from_neighbor_rotations


def _half(dx, dy) -> int:
    return 0 if dy > 0 or (dy == 0 and dx > 0) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def ccw_order(center, points, candidates) -> list:
    """``candidates`` (indices into ``points``) sorted counterclockwise by
    direction from ``center``, using exact arithmetic."""
    cx, cy = center
    key = cmp_to_key(lambda i, j: _angle_cmp((points[i][0] - cx, points[i][1] - cy),
                                             (points[j][0] - cx, points[j][1] - cy)))
    return sorted(candidates, key=key)


def straight_line_graph(points, edges, weight_of) -> EmbeddedGraph:
    """Embedded simple graph of a crossing-free straight-line drawing."""
    nbrs = [[] for _ in points]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rot = [ccw_order(points[v], points, nbrs[v]) for v in range(len(points))]
    return from_neighbor_rotations(rot, weight_of)
