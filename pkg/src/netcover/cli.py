"""Command-line entry point.

Exit codes: 0 ok or equal, 1 infeasible, 2 mismatch, 3 incomplete,
4 input error.
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
from itertools import combinations

from .errors import NetcoverError
from .faces import important_faces
from .generate import PROFILES, random_instance, random_scene
from .geometry import MODES, reduce_scene
from .instance import prepare, split_components
from .io import (dumps, instance_to_dict, load_instance, load_scene, save_result,
                 scene_to_dict)
from .solver import (Options, Result, Stats, default_threads, revenue, solve,
                     solve_bruteforce)
from .voronoi import build_diagram, build_prediagram, is_normal, loop_bounds_face, voronoi_partition

log = logging.getLogger("netcover")

OK, INFEASIBLE, MISMATCH, INCOMPLETE, INPUT_ERROR = 0, 1, 2, 3, 4
_STATUS_CODE = {"optimal": OK, "infeasible": INFEASIBLE, "incomplete": INCOMPLETE}


def _emit(doc: dict, out) -> None:
    if out:
        save_result(doc, out)
    else:
        sys.stdout.write(dumps(doc))


def _oracle_result(inst) -> Result:
    rev = solve_bruteforce(inst)
    status = "optimal" if rev.feasible else "infeasible"
    return Result(status, rev.value, rev.witness, inst.scale, Stats())


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    opts = Options(memo=not args.no_memo, threads=args.threads or default_threads(),
                   max_seps=args.max_seps, timeout=args.timeout)
    res = solve(inst, opts)
    doc = res.record()
    if args.diagnostics:
        doc["diagnostics"] = res.diagnostics()
    _emit(doc, args.output)
    return _STATUS_CODE[res.status]


def cmd_oracle(args) -> int:
    res = _oracle_result(load_instance(args.instance))
    _emit(res.record(), args.output)
    return _STATUS_CODE[res.status]


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    fast = solve(inst, Options(threads=args.threads or default_threads()))
    slow = _oracle_result(inst)
    equal = fast.value == slow.value
    if equal and fast.witness is not None:
        equal = revenue(inst, fast.witness).value == fast.value
    doc = {"solve": fast.record(), "oracle": slow.record(), "equal": equal}
    _emit(doc, args.output)
    if fast.status == "incomplete":
        return INCOMPLETE
    return OK if equal else MISMATCH


def cmd_gen(args) -> int:
    log.info("generating profile %s with seed %d", args.profile, args.seed)
    if args.profile.startswith("geometric-"):
        doc = scene_to_dict(random_scene(args.seed, args.profile, k=args.k))
    else:
        rng = random.Random(args.seed)
        k = args.k if args.k is not None else rng.randint(1, 4)
        doc = instance_to_dict(random_instance(args.seed, args.profile, n=args.n, d=args.d,
                                               c=args.c, k=k, feasible=not args.any))
    _emit(doc, args.output)
    return OK


def cmd_reduce(args) -> int:
    scene = load_scene(args.scene)
    inst = reduce_scene(scene, args.mode, args.precision)
    _emit(instance_to_dict(inst), args.output)
    return OK


def cmd_stats(args) -> int:
    inst = load_instance(args.instance)
    rng = random.Random(args.seed)
    log.info("sampling families with seed %d", args.seed)
    parts = []
    for part in split_components(inst):
        sub = part.instance
        if not sub.facilities:
            continue
        prep = prepare(sub)
        imp = important_faces(prep)
        fams = [f for r in range(3, prep.d + 1) for f in combinations(range(prep.d), r)
                if is_normal(prep, f)]
        rng.shuffle(fams)
        checks = []
        for fam in sorted(fams[:args.samples]):
            ell = len(fam)
            dgm = build_diagram(prep, build_prediagram(prep, voronoi_partition(prep, fam)))
            checks.append({
                "family": [part.facility_ids[p] for p in fam],
                "vertices": len(dgm.vertices), "edges": len(dgm.edges),
                "faces": dgm.face_count, "connected": dgm.is_connected(),
                "counts_ok": (len(dgm.vertices) == 2 * ell - 4
                              and len(dgm.edges) == 3 * ell - 6 and dgm.face_count == ell),
                "loops_bound_faces": all(loop_bounds_face(prep, dgm, i)
                                         for i, e in enumerate(dgm.edges) if e.is_loop),
                "branching_points_important": set(dgm.vertices) <= imp.restricted(fam),
            })
        parts.append({"vertices": prep.n, "objects": prep.d,
                      "important_faces": len(imp.faces), "families": checks})
    _emit({"components": parts}, args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netcover", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--no-memo", action="store_true")
    p.add_argument("--max-seps", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--timeout", type=float)
    p.add_argument("--diagnostics", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("oracle", help="solve by exhaustive search")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("verify", help="compare solve against the exhaustive search")
    p.add_argument("instance")
    p.add_argument("--threads", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("gen", help="generate a random instance or scene")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", choices=PROFILES, required=True)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--c", type=int, default=6)
    p.add_argument("--k", type=int)
    p.add_argument("--any", action="store_true", help="do not insist on feasibility")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("reduce", help="turn a plane scene into an instance")
    p.add_argument("scene")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--precision", type=int, default=64)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("stats", help="important faces and diagram checks")
    p.add_argument("instance")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_stats)
    return ap


def run_cli(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.run(args)
    except NetcoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
