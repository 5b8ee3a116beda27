"""File formats: plain polytope text files and JSON structured records.

Plain format: a header line "d n" followed by n lines of d integers.
Structured records are JSON objects with a "type" field; emission is
canonical (sorted keys, fixed separators) so identical data serializes to
identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .nefpartitions import NefPartition, validate_nef_partition
from .pipeline import DoubleMirrorInput, DoubleMirrorReport
from .polytopes import LatticePolytope, hull


def dumps_record(record) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"


def parse_plain_polytope(text: str) -> LatticePolytope:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError("expected header 'd n' in polytope file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"line 1: expected header 'd n', got {lines[0]!r}")
    try:
        d, n = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"line 1: expected two integers, got {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise InputError(f"expected {n} point rows, found {len(lines) - 1}")
    points = []
    for k, ln in enumerate(lines[1:], start=2):
        row = ln.split()
        if len(row) != d:
            raise InputError(f"line {k}: expected {d} integers, got {len(row)}")
        try:
            points.append(tuple(int(x) for x in row))
        except ValueError:
            raise InputError(f"line {k}: non-integer entry in {ln!r}") from None
    return hull(points)


def polytope_record(p: LatticePolytope) -> dict:
    return {
        "type": "polytope",
        "dim": p.dim,
        "vertices": [list(v) for v in p.vertices],
    }


def parse_polytope_record(record: dict) -> LatticePolytope:
    if "vertices" not in record:
        raise InputError("polytope record needs a 'vertices' field")
    p = hull(record["vertices"])
    if "dim" in record and record["dim"] != p.dim:
        raise InputError(
            f"polytope record says dim {record['dim']} but the hull has dim {p.dim}"
        )
    return p


def partition_record(partition: NefPartition) -> dict:
    return {
        "type": "nef_partition",
        "parts": [[list(v) for v in part.vertices] for part in partition.parts],
        "base_points": [list(p) for p in partition.base_points],
    }


def parse_partition_record(record: dict) -> NefPartition:
    for fieldname in ("parts", "base_points"):
        if fieldname not in record:
            raise InputError(f"nef partition record needs a {fieldname!r} field")
    parts = [hull(vs) for vs in record["parts"]]
    return validate_nef_partition(parts, record["base_points"])


def mirror_input_record(data: DoubleMirrorInput) -> dict:
    return {
        "type": "double_mirror_input",
        "parts": [[list(v) for v in part.vertices] for part in data.parts],
        "base_points": [list(p) for p in data.base_points],
        "alt_base_points": [list(p) for p in data.alt_base_points],
    }


def parse_mirror_input_record(record: dict) -> DoubleMirrorInput:
    for fieldname in ("parts", "base_points", "alt_base_points"):
        if fieldname not in record:
            raise InputError(f"double mirror record needs a {fieldname!r} field")
    return DoubleMirrorInput.from_vertices(
        record["parts"], record["base_points"], record["alt_base_points"]
    )


def parse_any(text: str):
    """Dispatches plain or structured content to the right parser.

    Returns a LatticePolytope, NefPartition, or DoubleMirrorInput.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON record: {exc}") from None
        return parse_record(record)
    return parse_plain_polytope(text)


def parse_record(record: dict):
    kind = record.get("type")
    if kind == "polytope":
        return parse_polytope_record(record)
    if kind == "nef_partition":
        if "alt_base_points" in record:
            return parse_mirror_input_record(record)
        return parse_partition_record(record)
    if kind == "double_mirror_input":
        return parse_mirror_input_record(record)
    if kind == "double_mirror_report":
        return record
    if kind is None and "alt_base_points" in record:
        return parse_mirror_input_record(record)
    if kind is None and "parts" in record:
        return parse_partition_record(record)
    if kind is None and "vertices" in record:
        return parse_polytope_record(record)
    raise InputError(f"unknown record type {kind!r}")


def fraction_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def report_record(report: DoubleMirrorReport) -> dict:
    sides = []
    for side, table in zip(report.sides, report.tables):
        sides.append(
            {
                "name": side.name,
                "base_points": [list(p) for p in side.base_points],
                "dual_parts": [[list(v) for v in p.vertices] for p in side.dual_parts],
                "dual_total": [list(v) for v in side.dual_total.vertices],
                "fan_rays": [list(r) for r in side.refined_fan.rays],
                "maximal_cones": [list(c) for c in side.refined_fan.maximal_cones],
                "divisors": [list(d) for d in side.divisors],
                "shear": [list(r) for r in side.shear],
                "fiber_labels": list(side.fiber_labels),
                "lifted_ray_labels": list(side.lifted_ray_labels),
                "triangulation": [list(s) for s in side.triangulation.simplices],
                "unused_labels": list(side.triangulation.unused_labels()),
                "certificate": [fraction_str(x) for x in side.certificate],
                "chamber_weight_rows": [list(r) for r in side.chamber.weight_rows],
                "chamber_character_rows": [list(r) for r in side.chamber.character_rows],
                "degree_matrix": [list(r) for r in side.degree_matrix],
                "torsion_orders": list(side.torsion_orders),
                "table": [
                    {
                        "point": list(t.point),
                        "coefficient": t.coefficient,
                        "group": t.group,
                        "fiber_exponents": list(t.fiber_exponents),
                        "base_exponents": list(t.base_exponents),
                    }
                    for t in table
                ],
            }
        )
    return {
        "type": "double_mirror_report",
        "passed": report.passed,
        "parts": [[list(v) for v in p.vertices] for p in report.parts],
        "base_points": [list(p) for p in report.base_points],
        "alt_base_points": [list(p) for p in report.alt_base_points],
        "interior_point": list(report.interior_point),
        "cayley_vertices": [list(v) for v in report.cayley_polytope.vertices],
        "cayley_deg_dual": list(report.cayley_deg_dual),
        "cayley_deg": list(report.cayley_deg),
        "index": report.index,
        "sigma_generators": [list(g) for g in report.sigma_generators],
        "points": [list(p) for p in report.points],
        "subgroup": {
            "degree_matrix": [list(r) for r in report.subgroup_degree_matrix],
            "torsion_orders": list(report.subgroup_torsion),
            "quasi_calabi_yau": report.quasi_calabi_yau,
            "calabi_yau_vector": list(report.calabi_yau_witness)
            if report.calabi_yau_witness is not None
            else None,
        },
        "num_splittings": report.num_splittings,
        "rcharge": {
            "fiber_labels": list(report.rcharge.fiber_labels),
            "alt_fiber_labels": list(report.rcharge.alt_fiber_labels),
            "overlap": report.rcharge.overlap,
            "relation_verified": report.rcharge.relation_verified,
            "one_parameter_witness": list(report.rcharge.one_parameter_witness),
            "witness_in_subgroup": report.rcharge.witness_in_subgroup,
            "splitting_label": report.rcharge.splitting_label,
            "splitting_weight_ok": report.rcharge.splitting_weight_ok,
            "repeated_vectors": report.rcharge.repeated_vectors,
        },
        "superpotential": {
            "rows": [
                {
                    "point": list(r.point),
                    "coefficient": r.coefficient,
                    "exponents": list(r.exponents),
                }
                for r in report.skeleton.rows
            ],
            "grouping_base": list(report.skeleton.grouping),
            "grouping_alt": list(report.skeleton.alt_grouping),
        },
        "duality_checks": [dict(d) for d in report.duality_checks],
        "checks": dict(report.checks),
        "sides": sides,
    }


def _monomial_string(names, exponents) -> str:
    factors = []
    for name, e in zip(names, exponents):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def report_text(report: DoubleMirrorReport) -> str:
    """Human-readable rendering with the paired monomial table."""
    lines = []
    lines.append("double mirror report")
    lines.append(f"  parts: {len(report.parts)}  ambient rank: {report.parts[0].ambient}")
    lines.append(f"  interior point: {report.interior_point}")
    lines.append(f"  index: {report.index}  splittings: {report.num_splittings}")
    lines.append(f"  coordinate points: {len(report.points)}")
    lines.append(
        f"  quasi-Calabi-Yau: {'yes' if report.quasi_calabi_yau else 'no'}"
    )
    for side in report.sides:
        lines.append(f"  side {side.name}: base points {list(side.base_points)}")
        lines.append(
            f"    dual parts: {[list(p.vertices) for p in side.dual_parts]}"
        )
        lines.append(f"    fan rays: {list(side.refined_fan.rays)}")
        lines.append(f"    degree matrix: {[list(r) for r in side.degree_matrix]}")
        if side.torsion_orders:
            lines.append(f"    torsion orders: {list(side.torsion_orders)}")
        lines.append(f"    triangulation: {[list(s) for s in side.triangulation.simplices]}")
        lines.append(f"    certificate: {list(side.certificate)}")
    rc = report.rcharge
    if rc.overlap == len(rc.fiber_labels):
        lines.append("  splittings identical; trivial wall-crossing")
    lines.append(
        f"  fiber label overlap: {rc.overlap} of {len(rc.fiber_labels)}"
        f"  witness: {list(rc.one_parameter_witness)}"
    )

    base_side, alt_side = report.sides
    base_names = _side_names(report, base_side)
    alt_names = _side_names(report, alt_side)
    lines.append("  monomial pairing:")
    left_col = []
    right_col = []
    for row_b, row_a in zip(report.tables[0], report.tables[1]):
        left_col.append(_table_monomial(base_names, base_side, row_b))
        right_col.append(_table_monomial(alt_names, alt_side, row_a))
    width = max(len(s) for s in left_col) if left_col else 1
    for lc, rc_ in zip(left_col, right_col):
        lines.append(f"    {lc.ljust(width)} | {rc_}")
    lines.append(f"  passed: {'yes' if report.passed else 'no'}")
    return "\n".join(lines) + "\n"


def _side_names(report, side):
    fiber = {lbl: f"u{k + 1}" for k, lbl in enumerate(side.fiber_labels)}
    base = {lbl: f"x{j}" for j, lbl in enumerate(side.lifted_ray_labels)}
    return fiber, base


def _table_monomial(names, side, row) -> str:
    fiber, base = names
    combined = {**fiber, **base}
    labels = list(side.fiber_labels) + list(side.lifted_ray_labels)
    exps = list(row.fiber_exponents) + list(row.base_exponents)
    return _monomial_string([combined[l] for l in labels], exps)
