"""Command-line interface.

Exit codes: 0 when the requested computation succeeds (and, for verifying
subcommands, passes), 1 when a verification fails, 2 on malformed input.
All output is deterministic for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from multiprocessing import Pool

from .errors import DoubleMirrorError, InputError, VerificationError
from .fans import Fan, cox_data, normal_fan
from .nefpartitions import (
    NefPartition,
    cayley,
    dual_nef_partition,
    special_simplices,
    splittings,
    validate_nef_partition,
)
from .pipeline import DoubleMirrorInput, double_mirror_pipeline, _sigma_support_data
from .polytopes import LatticePolytope, dual_polytope, hull
from .records import (
    dumps_record,
    mirror_input_record,
    parse_any,
    parse_record,
    partition_record,
    polytope_record,
    report_record,
    report_text,
)
from .torus import torus_subgroup
from .triangulations import (
    PointConfig,
    chamber_of_triangulation,
    regularity_certificate,
    triangulation_from_weights,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DoubleMirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doublemirror",
        description="Exact toric double-mirror combinatorics",
    )
    parser.add_argument("--format", choices=("text", "record"), default="text")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampling checks")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for scans")
    sub = parser.add_subparsers(dest="command", required=True)

    p_poly = sub.add_parser("polytope", help="polytope operations")
    sp = p_poly.add_subparsers(dest="subcommand", required=True)
    p_info = sp.add_parser("info", help="reflexivity, dual, lattice points")
    p_info.add_argument("path")
    p_info.set_defaults(func=cmd_polytope_info)

    p_nef = sub.add_parser("nefpart", help="nef partition operations")
    sp = p_nef.add_subparsers(dest="subcommand", required=True)
    p_val = sp.add_parser("validate", help="check the nef partition axioms")
    p_val.add_argument("path")
    p_val.set_defaults(func=cmd_nefpart_validate)
    p_dual = sp.add_parser("dual", help="dual nef partition")
    p_dual.add_argument("path")
    p_dual.set_defaults(func=cmd_nefpart_dual)
    p_special = sp.add_parser("special", help="special simplices of a polytope")
    p_special.add_argument("path")
    p_special.add_argument("--length", type=int, required=True)
    p_special.set_defaults(func=cmd_nefpart_special)

    p_cayley = sub.add_parser("cayley", help="Cayley cone and splittings")
    p_cayley.add_argument("path")
    p_cayley.set_defaults(func=cmd_cayley)

    p_cox = sub.add_parser("cox", help="degree matrix and irrelevant collections")
    p_cox.add_argument("path")
    p_cox.set_defaults(func=cmd_cox)

    p_tri = sub.add_parser("triangulate", help="weights to triangulation, certificate, chamber")
    p_tri.add_argument("path")
    p_tri.set_defaults(func=cmd_triangulate)

    p_mirror = sub.add_parser("mirror", help="double mirror pipeline")
    sp = p_mirror.add_subparsers(dest="subcommand", required=True)
    p_rep = sp.add_parser("report", help="full double-mirror report")
    p_rep.add_argument("path")
    p_rep.set_defaults(func=cmd_mirror_report)
    p_scan = sp.add_parser("scan", help="stream records, flag double mirrors")
    p_scan.add_argument("path")
    p_scan.set_defaults(func=cmd_mirror_scan)

    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def cmd_polytope_info(args) -> int:
    obj = parse_any(_read(args.path))
    if not isinstance(obj, LatticePolytope):
        raise InputError("polytope info expects a polytope file")
    p = obj
    interior = p.interior_lattice_points() if p.is_full_dimensional() else []
    reflexive_base = None
    for m in interior:
        if p.is_reflexive(m):
            reflexive_base = m
            break
    record = {
        "type": "polytope_info",
        "dim": p.dim,
        "ambient": p.ambient,
        "vertices": [list(v) for v in p.vertices],
        "lattice_point_count": len(p.lattice_points()),
        "interior_points": [list(m) for m in interior],
        "reflexive": reflexive_base is not None,
        "reflexive_base": list(reflexive_base) if reflexive_base else None,
    }
    if reflexive_base is not None:
        dual = dual_polytope(p, reflexive_base)
        record["dual_vertices"] = [[str(x) for x in v] for v in dual.vertices]
        record["dual_is_lattice"] = dual.is_lattice()
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"dimension: {p.dim} (ambient {p.ambient})")
        print(f"vertices: {[list(v) for v in p.vertices]}")
        print(f"lattice points: {record['lattice_point_count']}")
        print(f"reflexive: {'yes' if record['reflexive'] else 'no'}")
        if reflexive_base is not None:
            print(f"  base point: {list(reflexive_base)}")
            print(f"  dual vertices: {record['dual_vertices']}")
    return 0


def _load_partition(path: str) -> NefPartition:
    obj = parse_any(_read(path))
    if isinstance(obj, NefPartition):
        return obj
    if isinstance(obj, DoubleMirrorInput):
        return validate_nef_partition(obj.parts, obj.base_points)
    raise InputError("expected a nef partition record")


def cmd_nefpart_validate(args) -> int:
    partition = _load_partition(args.path)
    record = partition_record(partition)
    record["interior_point"] = list(partition.interior_point)
    record["valid"] = True
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"valid nef partition of length {partition.length}")
        print(f"interior point: {list(partition.interior_point)}")
        print(f"total vertices: {[list(v) for v in partition.total.vertices]}")
    return 0


def cmd_nefpart_dual(args) -> int:
    partition = _load_partition(args.path)
    duals = dual_nef_partition(partition)
    record = {
        "type": "dual_nef_partition",
        "parts": [[list(v) for v in p.vertices] for p in duals],
    }
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        for i, p in enumerate(duals):
            print(f"dual part {i}: {[list(v) for v in p.vertices]}")
    return 0


def cmd_nefpart_special(args) -> int:
    obj = parse_any(_read(args.path))
    if isinstance(obj, NefPartition):
        poly = obj.total
    elif isinstance(obj, LatticePolytope):
        poly = obj
    else:
        raise InputError("special simplices expect a polytope or partition")
    simplices = special_simplices(poly, args.length)
    record = {
        "type": "special_simplices",
        "length": args.length,
        "simplices": [[list(p) for p in s] for s in simplices],
    }
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"special simplices of length {args.length}: {len(simplices)}")
        for s in simplices:
            print(f"  {[list(p) for p in s]}")
    return 0


def cmd_cayley(args) -> int:
    partition = _load_partition(args.path)
    data = cayley(partition.parts)
    record = {
        "type": "cayley",
        "polytope_vertices": [list(v) for v in data.polytope.vertices],
        "cone_generators": [list(g) for g in data.cone.generators],
        "gorenstein": None,
    }
    if data.gorenstein is not None:
        g = data.gorenstein
        record["gorenstein"] = {
            "deg_dual": list(g.deg_dual),
            "deg": list(g.deg) if g.deg is not None else None,
            "index": g.index,
        }
        if g.index is not None:
            sigma = _sigma_support_data(data)
            record["splittings"] = [
                [list(v) for v in s.vectors] for s in splittings(sigma)
            ]
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"Cayley cone generators: {record['cone_generators']}")
        print(f"gorenstein: {record['gorenstein']}")
        if "splittings" in record:
            print(f"splittings of the dual structure: {len(record['splittings'])}")
            for s in record["splittings"]:
                print(f"  {s}")
    return 0


def cmd_cox(args) -> int:
    obj = parse_any(_read(args.path))
    if isinstance(obj, LatticePolytope):
        fan = normal_fan(obj)
    elif isinstance(obj, NefPartition):
        fan = normal_fan(obj.total)
    else:
        raise InputError("cox expects a polytope file")
    data = cox_data(fan)
    subgroup = torus_subgroup(fan.rays)
    record = {
        "type": "cox",
        "rays": [list(r) for r in fan.rays],
        "maximal_cones": [list(c) for c in fan.maximal_cones],
        "degree_matrix": [list(r) for r in subgroup.presentation.projection],
        "torsion_orders": list(subgroup.presentation.torsion_orders),
        "irrelevant_collections": [list(c) for c in data.irrelevant_collections],
    }
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"rays: {record['rays']}")
        print(f"degree matrix: {record['degree_matrix']}")
        if record["torsion_orders"]:
            print(f"torsion orders: {record['torsion_orders']}")
        print(f"irrelevant collections: {record['irrelevant_collections']}")
    return 0


def cmd_triangulate(args) -> int:
    record_in = json.loads(_read(args.path))
    if "points" not in record_in or "weights" not in record_in:
        raise InputError("triangulate expects a record with 'points' and 'weights'")
    from fractions import Fraction

    config = PointConfig(record_in["points"])
    weights = [Fraction(str(w)) for w in record_in["weights"]]
    sub = triangulation_from_weights(config, weights)
    record = {
        "type": "triangulation",
        "cells": [list(c) for c in sub.cells],
        "is_triangulation": sub.is_triangulation,
    }
    if sub.is_triangulation:
        tri = sub.triangulation()
        cert = regularity_certificate(config, tri)
        record["certificate"] = [str(x) for x in cert] if cert is not None else None
        if cert is not None:
            chamber = chamber_of_triangulation(config, tri, certificate=cert)
            record["chamber_weight_rows"] = [list(r) for r in chamber.weight_rows]
            record["chamber_character_rows"] = [list(r) for r in chamber.character_rows]
    if args.format == "record":
        sys.stdout.write(dumps_record(record))
    else:
        print(f"cells: {record['cells']}")
        print(f"triangulation: {'yes' if sub.is_triangulation else 'no'}")
        if record.get("certificate"):
            print(f"certificate: {record['certificate']}")
            print(f"chamber rows: {record.get('chamber_weight_rows')}")
    return 0


def cmd_mirror_report(args) -> int:
    obj = parse_any(_read(args.path))
    if isinstance(obj, NefPartition):
        raise InputError("mirror report needs alternate base points")
    if not isinstance(obj, DoubleMirrorInput):
        raise InputError("mirror report expects a double mirror input record")
    report = double_mirror_pipeline(obj)
    if args.format == "record":
        sys.stdout.write(dumps_record(report_record(report)))
    else:
        sys.stdout.write(report_text(report))
    return 0 if report.passed else 1


def _scan_one(line_and_number):
    number, line = line_and_number
    line = line.strip()
    if not line:
        return None
    try:
        record = json.loads(line)
        obj = parse_record(record)
    except (InputError, json.JSONDecodeError) as exc:
        return ("error", number, str(exc))
    if isinstance(obj, DoubleMirrorInput):
        partition = validate_nef_partition(obj.parts, obj.base_points)
    elif isinstance(obj, NefPartition):
        partition = obj
    else:
        return None
    try:
        data = cayley(partition.parts)
        if data.gorenstein is None or data.gorenstein.index is None:
            return None
        sigma = _sigma_support_data(data)
        count = len(splittings(sigma))
    except DoubleMirrorError as exc:
        return ("error", number, str(exc))
    if count >= 2:
        return ("hit", number, count)
    return None


def cmd_mirror_scan(args) -> int:
    jobs = max(1, args.jobs)
    status = 0

    def lines():
        with open(args.path, "r", encoding="utf-8") as handle:
            for i, line in enumerate(handle, start=1):
                yield (i, line)

    if jobs == 1:
        results = map(_scan_one, lines())
    else:
        pool = Pool(processes=jobs)
        results = pool.imap(_scan_one, lines(), chunksize=64)
    hits = 0
    for res in results:
        if res is None:
            continue
        kind, number, payload = res
        if kind == "error":
            print(f"line {number}: input error: {payload}", file=sys.stderr)
            status = 2
        else:
            hits += 1
            print(f"line {number}: double mirror candidate ({payload} splittings)")
    if jobs > 1:
        pool.close()
        pool.join()
    print(f"flagged {hits}")
    return status
