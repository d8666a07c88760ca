"""JSON instance, scene and result files.

Numeric values are decimal strings (``"1.25"``), fractions (``"5/4"``) or
JSON integers.  Instance values are multiplied by the file's ``scale`` and
must land on integers; errors name the offending field.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .embedding import build_graph
from .errors import EmbeddingInvalid, NetcoverError, ParseError, SchemaVersionMismatch
from .geometry import Disk, Scene
from .instance import Client, Facility, Instance
from .solver import format_value

INSTANCE_FORMAT = "netcover-instance"
SCENE_FORMAT = "netcover-scene"
VERSION = 1
DEFAULT_SCALE = 10 ** 6


def _number(raw, path: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise ParseError("expected a decimal string or integer", path)
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {raw!r}", path) from None


def _scaled(raw, scale: int, path: str) -> int:
    x = _number(raw, path) * scale
    if x.denominator != 1:
        raise ParseError(f"{raw!r} is not a multiple of 1/{scale}", path)
    return int(x)


def _int(raw, path: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError("expected an integer", path)
    return raw


def _list(raw, path: str) -> list:
    if not isinstance(raw, list):
        raise ParseError("expected a list", path)
    return raw


def _field(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    if key not in obj:
        raise ParseError("missing field", f"{path}.{key}" if path else key)
    return obj[key]


def _header(doc, fmt: str) -> None:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", "$")
    if doc.get("format") != fmt:
        raise ParseError(f"expected format {fmt!r}", "format")
    if doc.get("version") != VERSION:
        raise SchemaVersionMismatch(f"unsupported version {doc.get('version')!r}")


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(path)) from None
    except OSError as exc:
        raise ParseError(str(exc.strerror or exc), str(path)) from None


# ----------------------------------------------------------------------
# instances


def instance_from_dict(doc) -> Instance:
    _header(doc, INSTANCE_FORMAT)
    scale = _int(doc.get("scale", DEFAULT_SCALE), "scale")
    if scale < 1:
        raise ParseError("scale must be positive", "scale")
    graph = _field(doc, "graph", "")
    n = _int(_field(graph, "vertices", "graph"), "graph.vertices")
    edges, weights = [], []
    for i, e in enumerate(_list(_field(graph, "edges", "graph"), "graph.edges")):
        p = f"graph.edges[{i}]"
        e = _list(e, p)
        if len(e) != 3:
            raise ParseError("edge is [u, v, weight]", p)
        edges.append((_int(e[0], p + "[0]"), _int(e[1], p + "[1]")))
        weights.append(_scaled(e[2], scale, p + "[2]"))
    rotations = []
    for v, rot in enumerate(_list(_field(graph, "rotations", "graph"), "graph.rotations")):
        p = f"graph.rotations[{v}]"
        rotations.append([_int(x, f"{p}[{j}]") for j, x in enumerate(_list(rot, p))])
    try:
        g = build_graph(n, edges, rotations, weights)
    except EmbeddingInvalid as exc:
        raise ParseError(str(exc), "graph.rotations") from None
    except NetcoverError as exc:
        raise ParseError(str(exc), "graph") from None
    facs = []
    for i, o in enumerate(_list(_field(doc, "objects", ""), "objects")):
        p = f"objects[{i}]"
        loc = tuple(_int(x, f"{p}.loc[{j}]")
                    for j, x in enumerate(_list(_field(o, "loc", p), p + ".loc")))
        facs.append(Facility(loc, _scaled(o.get("cost", 0), scale, p + ".cost"),
                             _scaled(o.get("rad", 0), scale, p + ".rad")))
    clis = []
    for j, c in enumerate(_list(doc.get("clients", []), "clients")):
        p = f"clients[{j}]"
        clis.append(Client(_int(_field(c, "pla", p), p + ".pla"),
                           _scaled(c.get("sen", 0), scale, p + ".sen"),
                           _scaled(c.get("pri", 0), scale, p + ".pri")))
    k = _int(_field(doc, "k", ""), "k")
    at_most = doc.get("at_most", False)
    if not isinstance(at_most, bool):
        raise ParseError("expected true or false", "at_most")
    inst = Instance(g, facs, clis, k, scale, at_most)
    try:
        inst.validate()
    except NetcoverError as exc:
        raise ParseError(str(exc), "objects") from None
    return inst


def instance_to_dict(inst: Instance) -> dict:
    g, s = inst.graph, inst.scale
    doc = {
        "format": INSTANCE_FORMAT,
        "version": VERSION,
        "scale": s,
        "graph": {
            "vertices": g.n,
            "edges": [[u, v, format_value(w, s)] for (u, v), w in zip(g.ends, g.weights)],
            "rotations": [[h >> 1 for h in rot] for rot in g.rotation],
        },
        "objects": [{"loc": list(f.loc), "cost": format_value(f.cost, s),
                     "rad": format_value(f.rad, s)} for f in inst.facilities],
        "clients": [{"pla": c.pla, "sen": format_value(c.sen, s),
                     "pri": format_value(c.pri, s)} for c in inst.clients],
        "k": inst.k,
    }
    if inst.at_most:
        doc["at_most"] = True
    return doc


def load_instance(path) -> Instance:
    return instance_from_dict(_read_json(path))


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance_to_dict(inst)))


def save_result(record: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(record))


# ----------------------------------------------------------------------
# scenes


def _pt(raw, path):
    raw = _list(raw, path)
    if len(raw) != 2:
        raise ParseError("point is [x, y]", path)
    return (_number(raw[0], path + "[0]"), _number(raw[1], path + "[1]"))


def scene_from_dict(doc) -> Scene:
    _header(doc, SCENE_FORMAT)
    k = _int(_field(doc, "k", ""), "k")
    disks = []
    for i, d in enumerate(_list(doc.get("disks", []), "disks")):
        p = f"disks[{i}]"
        r = _number(_field(d, "radius", p), p + ".radius")
        if r <= 0:
            raise ParseError("radius must be positive", p + ".radius")
        disks.append(Disk(_pt(_field(d, "center", p), p + ".center"), r))
    squares = []
    for i, s in enumerate(_list(doc.get("squares", []), "squares")):
        p = f"squares[{i}]"
        side = _number(_field(s, "side", p), p + ".side")
        if side <= 0:
            raise ParseError("side must be positive", p + ".side")
        squares.append((_pt(_field(s, "center", p), p + ".center"), side))
    polys = [[_pt(c, f"polygons[{i}][{j}]") for j, c in enumerate(_list(poly, f"polygons[{i}]"))]
             for i, poly in enumerate(_list(doc.get("polygons", []), "polygons"))]
    pts = [_pt(p, f"points[{i}]") for i, p in enumerate(_list(doc.get("points", []), "points"))]
    return Scene(k, disks, squares, polys, pts)


def _dec(x: Fraction) -> str:
    return format_value(x.numerator, x.denominator)


def scene_to_dict(scene: Scene) -> dict:
    doc = {"format": SCENE_FORMAT, "version": VERSION, "k": scene.k}
    if scene.disks:
        doc["disks"] = [{"center": [_dec(d.center[0]), _dec(d.center[1])],
                         "radius": _dec(d.radius)} for d in scene.disks]
    if scene.squares:
        doc["squares"] = [{"center": [_dec(c[0]), _dec(c[1])], "side": _dec(Fraction(s))}
                          for c, s in scene.squares]
    if scene.polygons:
        doc["polygons"] = [[[_dec(x), _dec(y)] for x, y in poly] for poly in scene.polygons]
    if scene.points:
        doc["points"] = [[_dec(x), _dec(y)] for x, y in scene.points]
    return doc


def load_scene(path) -> Scene:
    return scene_from_dict(_read_json(path))
