"""End-to-end double-mirror verification.

One nef partition with two base-point systems yields two dual partitions,
two bundle-fan triangulations of one shared point configuration, and two
groupings of one superpotential.  The pipeline builds all of it, verifies
every combinatorial hypothesis along the way, and emits a report whose
certificates can be re-checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, InternalConsistencyError, VerificationError
from .fans import Fan, bundle_fan, normal_fan, polytope_divisor, simplicial_refinement
from .intlinalg import as_int_matrix, rank
from .nefpartitions import (
    CayleyData,
    NefPartition,
    SplittingData,
    _canonical_sections,
    cayley,
    cayley_duality_check,
    dual_nef_partition,
    recovered_parts,
    splittings,
    validate_nef_partition,
)
from .polytopes import (
    LatticePolytope,
    from_chart,
    gorenstein_cone_data,
    hull,
    pair,
    slice_polytope,
)
from .torus import (
    TorusSubgroupData,
    calabi_yau_vector,
    divisor_character,
    is_quasi_calabi_yau,
    torus_subgroup,
)
from .triangulations import (
    ChamberDescription,
    PointConfig,
    Triangulation,
    chamber_of_triangulation,
    regularity_certificate,
    triangulation_of_bundle_fan,
)


@dataclass(frozen=True)
class DoubleMirrorInput:
    """Parts with two base-point systems; both must validate against the
    same Minkowski sum and interior point."""

    parts: tuple[LatticePolytope, ...]
    base_points: tuple[tuple[int, ...], ...]
    alt_base_points: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_vertices(parts, base_points, alt_base_points) -> "DoubleMirrorInput":
        return DoubleMirrorInput(
            tuple(hull(p) if not isinstance(p, LatticePolytope) else p for p in parts),
            tuple(tuple(int(x) for x in p) for p in base_points),
            tuple(tuple(int(x) for x in p) for p in alt_base_points),
        )


def shear_matrix(base_points, ambient, num_parts):
    """Unimodular map (x, a) -> (x + sum a_i q_i, a) of the extended lattice."""
    d, r = ambient, num_parts
    rows = []
    for i in range(d):
        rows.append(tuple(1 if j == i else 0 for j in range(d)) + tuple(q[i] for q in base_points))
    for k in range(r):
        rows.append((0,) * d + tuple(1 if j == k else 0 for j in range(r)))
    return tuple(rows)


def dual_shear_matrix(base_points, ambient, num_parts):
    """The transpose action (n, b) -> (n, b_i + <q_i, n>) on the dual side."""
    d, r = ambient, num_parts
    rows = []
    for i in range(d):
        rows.append(tuple(1 if j == i else 0 for j in range(d)) + (0,) * r)
    for k in range(r):
        rows.append(tuple(base_points[k]) + tuple(1 if j == k else 0 for j in range(r)))
    return tuple(rows)


def apply_matrix(matrix, vector):
    return tuple(sum(row[j] * vector[j] for j in range(len(vector))) for row in matrix)


def translated_partition(partition: NefPartition, alt_points) -> tuple[NefPartition, tuple]:
    """The partition with parts moved by the base-point exchange.

    Part i becomes part_i - p_i + p'_i carrying base point p'_i; the shear
    identifying the two Cayley pictures is returned alongside.
    """
    alt_points = tuple(tuple(int(x) for x in p) for p in alt_points)
    if len(alt_points) != partition.length:
        raise InputError("one alternate base point per part is required")
    for i, (part, q) in enumerate(zip(partition.parts, alt_points)):
        if not part.contains(q):
            raise VerificationError(
                "nef partition axiom: each base point must be a lattice point of its part",
                f"alternate point {q} is outside part {i}",
            )
    new_parts = [
        part.translate(tuple(b - a for a, b in zip(p, q)))
        for part, p, q in zip(partition.parts, partition.base_points, alt_points)
    ]
    new_partition = validate_nef_partition(new_parts, alt_points)
    delta = [
        tuple(b - a for a, b in zip(p, q))
        for p, q in zip(partition.base_points, alt_points)
    ]
    shear = shear_matrix(delta, partition.ambient, partition.length)
    return new_partition, shear


@dataclass(frozen=True)
class RChargeRecord:
    """Bookkeeping for moving the fiber-dilation action between the sides."""

    fiber_labels: tuple[int, ...]
    alt_fiber_labels: tuple[int, ...]
    overlap: int
    relation_verified: bool
    one_parameter_witness: tuple[int, ...]
    witness_in_subgroup: bool
    splitting_label: int | None
    splitting_weight_ok: bool
    repeated_vectors: bool


def rcharge_check(
    config: PointConfig,
    lift: SplittingData,
    alt_lift: SplittingData,
    subgroup: TorusSubgroupData,
) -> RChargeRecord:
    """Verifies the wall-crossing torus bookkeeping for two splittings.

    Computes the overlap count, the lattice relation between the
    non-shared splitting vectors, and the one-parameter witness (-1 on the
    first lift, +1 on the second, off the overlap), which must pair to
    zero with every configuration point; a +1 coordinate then splits off
    the witness subgroup.
    """
    if subgroup.num_coordinates != len(config):
        raise InputError("subgroup does not match the configuration")
    vec_a = list(lift.vectors)
    vec_b = list(alt_lift.vectors)
    if len(vec_a) != len(vec_b):
        raise InputError("splittings of different lengths")
    for v in vec_a + vec_b:
        config.label_of(v)

    remaining = list(vec_b)
    shared = []
    only_a = []
    for v in vec_a:
        if v in remaining:
            remaining.remove(v)
            shared.append(v)
        else:
            only_a.append(v)
    only_b = remaining
    c = len(shared)
    r = len(vec_a)

    sum_a = [0] * config.ambient
    for v in only_a:
        sum_a = [x + y for x, y in zip(sum_a, v)]
    sum_b = [0] * config.ambient
    for v in only_b:
        sum_b = [x + y for x, y in zip(sum_b, v)]
    relation = tuple(sum_a) == tuple(sum_b)
    if not relation:
        raise VerificationError(
            "splitting relation: non-shared splitting vectors must have equal sums",
            f"{tuple(sum_a)} != {tuple(sum_b)}",
        )

    witness = [0] * len(config)
    for v in only_a:
        witness[config.label_of(v)] -= 1
    for v in only_b:
        witness[config.label_of(v)] += 1
    # Membership of the one-parameter subgroup: the weighted sum of the
    # configuration points must vanish.
    combo = [0] * config.ambient
    for w, p in zip(witness, config.points):
        combo = [x + w * y for x, y in zip(combo, p)]
    in_subgroup = all(x == 0 for x in combo)
    if not in_subgroup:
        raise VerificationError(
            "one-parameter witness must pair to zero with the coordinate degrees",
            f"combination {tuple(combo)}",
        )

    if c < r:
        split_label = config.label_of(only_b[-1])
        weight_ok = witness[split_label] == 1
    else:
        split_label = None
        weight_ok = True

    labels_a = tuple(config.label_of(v) for v in shared + only_a)
    labels_b = tuple(config.label_of(v) for v in shared + only_b)
    return RChargeRecord(
        fiber_labels=labels_a,
        alt_fiber_labels=labels_b,
        overlap=c,
        relation_verified=relation,
        one_parameter_witness=tuple(witness),
        witness_in_subgroup=in_subgroup,
        splitting_label=split_label,
        splitting_weight_ok=weight_ok,
        repeated_vectors=(len(set(vec_a)) < r or len(set(vec_b)) < r),
    )


@dataclass(frozen=True)
class SuperpotentialRow:
    point: tuple[int, ...]
    coefficient: str
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class SuperpotentialSkeleton:
    """Monomials of the shared superpotential with both groupings.

    One row per lattice point of the dual-cone slice; exponents are the
    pairings against the configuration points; grouping k assigns each row
    the index of the splitting vector it pairs to one with."""

    rows: tuple[SuperpotentialRow, ...]
    grouping: tuple[int, ...]
    alt_grouping: tuple[int, ...]


def superpotential_skeleton(
    config: PointConfig,
    slice_points,
    lift: SplittingData,
    alt_lift: SplittingData,
) -> SuperpotentialSkeleton:
    rows = []
    groupings = ([], [])
    for idx, y in enumerate(sorted(tuple(int(c) for c in p) for p in slice_points)):
        exponents = tuple(pair(y, v) for v in config.points)
        if any(e < 0 for e in exponents):
            raise VerificationError(
                "superpotential exponents must be nonnegative",
                f"monomial at {y}",
            )
        rows.append(SuperpotentialRow(point=y, coefficient=f"c{idx}", exponents=exponents))
        for split, acc in zip((lift, alt_lift), groupings):
            values = [pair(y, s) for s in split.vectors]
            if sorted(values) != [0] * (len(values) - 1) + [1]:
                raise VerificationError(
                    "superpotential grouping must be a partition",
                    f"monomial at {y} pairs to {values}",
                )
            acc.append(values.index(1))
    return SuperpotentialSkeleton(
        rows=tuple(rows), grouping=tuple(groupings[0]), alt_grouping=tuple(groupings[1])
    )


@dataclass(frozen=True)
class MirrorSide:
    """Everything attached to one of the two dual-partition sides."""

    name: str
    base_points: tuple[tuple[int, ...], ...]
    dual_parts: tuple[LatticePolytope, ...]
    dual_total: LatticePolytope
    fan: Fan
    refined_fan: Fan
    divisors: tuple[tuple[int, ...], ...]
    shear: tuple
    bundle: Fan
    fiber_labels: tuple[int, ...]
    lifted_ray_labels: tuple[int, ...]
    triangulation: Triangulation
    certificate: tuple[int, ...]
    chamber: ChamberDescription
    degree_matrix: tuple[tuple[int, ...], ...]
    torsion_orders: tuple[int, ...]


@dataclass(frozen=True)
class TableRow:
    point: tuple[int, ...]
    coefficient: str
    group: int
    fiber_exponents: tuple[int, ...]
    base_exponents: tuple[int, ...]


def monomial_table(
    skeleton: SuperpotentialSkeleton, side: MirrorSide, config: PointConfig
) -> tuple[TableRow, ...]:
    """One row per monomial, restricted to the side's coordinates.

    Fiber exponents come first; base exponents follow the side's ray order.
    Rows are already canonically ordered (lexicographic underlying point).
    """
    grouping = skeleton.grouping if side.name == "base" else skeleton.alt_grouping
    out = []
    for row, grp in zip(skeleton.rows, grouping):
        fibers = tuple(row.exponents[i] for i in side.fiber_labels)
        base = tuple(row.exponents[i] for i in side.lifted_ray_labels)
        out.append(
            TableRow(
                point=row.point,
                coefficient=row.coefficient,
                group=grp,
                fiber_exponents=fibers,
                base_exponents=base,
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class DoubleMirrorReport:
    parts: tuple[LatticePolytope, ...]
    base_points: tuple[tuple[int, ...], ...]
    alt_base_points: tuple[tuple[int, ...], ...]
    interior_point: tuple[int, ...]
    cayley_polytope: LatticePolytope
    cayley_deg_dual: tuple[int, ...]
    cayley_deg: tuple[int, ...]
    index: int
    sigma_generators: tuple[tuple[int, ...], ...]
    points: tuple[tuple[int, ...], ...]
    subgroup_degree_matrix: tuple[tuple[int, ...], ...]
    subgroup_torsion: tuple[int, ...]
    quasi_calabi_yau: bool
    calabi_yau_witness: tuple[int, ...] | None
    num_splittings: int
    sides: tuple[MirrorSide, MirrorSide]
    rcharge: RChargeRecord
    skeleton: SuperpotentialSkeleton
    tables: tuple[tuple[TableRow, ...], tuple[TableRow, ...]]
    duality_checks: tuple[dict, dict]
    checks: dict
    passed: bool

    def config(self) -> PointConfig:
        return PointConfig(self.points)


def _sigma_support_data(cayley_data: CayleyData):
    sigma = cayley_data.cone.dual()
    g = gorenstein_cone_data(sigma)
    if g is None or g.index is None:
        raise VerificationError(
            "the dual of the Cayley cone must be reflexive Gorenstein"
        )
    sp, origin, basis = slice_polytope(sigma, g.deg_dual, 1)
    support = hull([from_chart(y, origin, basis) for y in sp.vertices])
    return CayleyData(
        polytope=support,
        cone=sigma,
        num_parts=cayley_data.num_parts,
        base_rank=cayley_data.base_rank,
        gorenstein=g,
    )


def _build_side(
    name, partition: NefPartition, config: PointConfig, reference: CayleyData
) -> MirrorSide:
    duals = dual_nef_partition(partition)
    total = duals[0]
    for p in duals[1:]:
        total = total.minkowski(p)
    fan = normal_fan(total)
    refined = simplicial_refinement(fan)
    divisors = tuple(polytope_divisor(refined, p) for p in duals)
    bundle = bundle_fan(refined, [tuple(-a for a in d) for d in divisors])
    shear = shear_matrix(partition.base_points, partition.ambient, partition.length)
    sheared = bundle.apply(shear)
    if sheared.support_cone() != reference.cone:
        raise VerificationError(
            "bundle fan support must equal the Cayley cone after the shear",
            f"side {name}",
        )
    tri = triangulation_of_bundle_fan(sheared, config)
    cert = regularity_certificate(config, tri)
    if cert is None:
        raise VerificationError(
            "bundle fan triangulation must be regular",
            f"side {name}",
        )
    chamber = chamber_of_triangulation(config, tri, certificate=cert)
    nbase = len(refined.rays)
    fiber_labels = tuple(
        config.label_of(sheared.rays[nbase + i]) for i in range(partition.length)
    )
    lifted_ray_labels = tuple(config.label_of(sheared.rays[j]) for j in range(nbase))
    ambient_subgroup = torus_subgroup(refined.rays)
    degree_matrix = tuple(
        tuple(row) for row in ambient_subgroup.presentation.projection
    )
    return MirrorSide(
        name=name,
        base_points=partition.base_points,
        dual_parts=tuple(duals),
        dual_total=total,
        fan=fan,
        refined_fan=refined,
        divisors=divisors,
        shear=shear,
        bundle=sheared,
        fiber_labels=fiber_labels,
        lifted_ray_labels=lifted_ray_labels,
        triangulation=tri,
        certificate=cert,
        chamber=chamber,
        degree_matrix=degree_matrix,
        torsion_orders=ambient_subgroup.presentation.torsion_orders,
    )


def _check_recovery(side: MirrorSide, partition, sigma_data, lift) -> bool:
    """Recovered subpolytopes must match the sheared lifted dual parts."""
    theta = recovered_parts(sigma_data, lift)
    # The lifted dual parts land in the shared cone through the inverse
    # dual shear (n, b) -> (n, b_i - <q_i, n>).
    dual_shear = dual_shear_matrix(
        [tuple(-x for x in q) for q in partition.base_points],
        partition.ambient,
        partition.length,
    )
    d, r = partition.ambient, partition.length
    for i, dual_part in enumerate(side.dual_parts):
        tail = tuple(1 if k == i else 0 for k in range(r))
        expected = hull(
            [apply_matrix(dual_shear, v + tail) for v in dual_part.vertices]
        )
        if theta[i] != expected:
            return False
    return True


def double_mirror_pipeline(data: DoubleMirrorInput) -> DoubleMirrorReport:
    """Runs the full verification and assembles the report.

    Aborts with a VerificationError naming the violated condition the
    moment any stage fails.
    """
    partition = validate_nef_partition(data.parts, data.base_points)
    alt_partition = validate_nef_partition(data.parts, data.alt_base_points)
    if partition.interior_point != alt_partition.interior_point:
        raise VerificationError(
            "nef partition axiom: both base-point systems must sum to the same interior point",
            f"{partition.interior_point} != {alt_partition.interior_point}",
        )
    r = partition.length
    d = partition.ambient

    cayley_data = cayley(partition.parts)
    g = cayley_data.gorenstein
    if g is None or g.index != r:
        raise VerificationError(
            "the Cayley cone of a nef partition must be reflexive Gorenstein with index the number of parts",
            f"found {g}",
        )
    sigma_data = _sigma_support_data(cayley_data)

    def lifted_splitting(base_points):
        vectors = tuple(
            tuple(p) + tuple(1 if k == i else 0 for k in range(r))
            for i, p in enumerate(base_points)
        )
        sections = _canonical_sections(vectors)
        if sections is None:
            raise VerificationError(
                "base-point lifts must form part of a dual basis"
            )
        return SplittingData(vectors=vectors, sections=sections)

    lift = lifted_splitting(partition.base_points)
    alt_lift = lifted_splitting(alt_partition.base_points)
    all_splittings = splittings(sigma_data)
    known = {tuple(sorted(s.vectors)) for s in all_splittings}
    for s, tag in ((lift, "base"), (alt_lift, "alternate")):
        if tuple(sorted(s.vectors)) not in known:
            raise VerificationError(
                "base-point lifts must split the degree element of the dual cone",
                f"{tag} system",
            )

    points = tuple(cayley_data.polytope.lattice_points())
    config = PointConfig(points)
    subgroup = torus_subgroup(points)
    if not is_quasi_calabi_yau(subgroup):
        raise VerificationError(
            "the configuration subgroup must satisfy the quasi-Calabi-Yau condition"
        )
    cy_witness = calabi_yau_vector(points)

    side_base = _build_side("base", partition, config, cayley_data)
    side_alt = _build_side("alt", alt_partition, config, cayley_data)

    if not _check_recovery(side_base, partition, sigma_data, lift):
        raise VerificationError(
            "splitting recovery must reproduce the dual partition",
            "base system",
        )
    if not _check_recovery(side_alt, alt_partition, sigma_data, alt_lift):
        raise VerificationError(
            "splitting recovery must reproduce the dual partition",
            "alternate system",
        )

    rcharge = rcharge_check(config, lift, alt_lift, subgroup)

    slice_points = sigma_data.polytope.lattice_points()
    skeleton = superpotential_skeleton(config, slice_points, lift, alt_lift)

    checks = _run_invariant_checks(
        config, subgroup, skeleton, (side_base, side_alt), (lift, alt_lift)
    )
    checks["triangulations_distinct"] = (
        side_base.triangulation.simplices != side_alt.triangulation.simplices
    )
    checks["splittings_distinct"] = sorted(lift.vectors) != sorted(alt_lift.vectors)
    if checks["splittings_distinct"] and not checks["triangulations_distinct"]:
        raise VerificationError(
            "distinct splittings must induce distinct bundle-fan triangulations"
        )

    table_base = monomial_table(skeleton, side_base, config)
    table_alt = monomial_table(skeleton, side_alt, config)
    duality = (cayley_duality_check(partition), cayley_duality_check(alt_partition))
    for tag, rep in zip(("base", "alternate"), duality):
        if not rep["all"]:
            raise VerificationError(
                "nef partition duality identities must hold", f"{tag} system: {rep}"
            )

    passed = all(v for k, v in checks.items() if k != "triangulations_distinct" and k != "splittings_distinct")
    return DoubleMirrorReport(
        parts=partition.parts,
        base_points=partition.base_points,
        alt_base_points=alt_partition.base_points,
        interior_point=partition.interior_point,
        cayley_polytope=cayley_data.polytope,
        cayley_deg_dual=g.deg_dual,
        cayley_deg=g.deg,
        index=g.index,
        sigma_generators=sigma_data.cone.generators,
        points=points,
        subgroup_degree_matrix=tuple(tuple(row) for row in subgroup.presentation.projection),
        subgroup_torsion=subgroup.presentation.torsion_orders,
        quasi_calabi_yau=True,
        calabi_yau_witness=cy_witness,
        num_splittings=len(all_splittings),
        sides=(side_base, side_alt),
        rcharge=rcharge,
        skeleton=skeleton,
        tables=(table_base, table_alt),
        duality_checks=duality,
        checks=checks,
        passed=passed,
    )


def _run_invariant_checks(config, subgroup, skeleton, sides, lifts) -> dict:
    """Row-by-row divisibility and degree checks on the skeleton."""
    checks = {}

    # Fiber divisibility: within group i the fiber coordinate i appears
    # exactly once and the other fiber coordinates not at all.
    ok = True
    for side, lift_data, grouping in zip(
        sides, lifts, (skeleton.grouping, skeleton.alt_grouping)
    ):
        for row, grp in zip(skeleton.rows, grouping):
            for k, label in enumerate(side.fiber_labels):
                expected = 1 if k == grp else 0
                if row.exponents[label] != expected:
                    ok = False
    checks["fiber_divisibility"] = ok

    # Degree semi-invariance: all rows carry the same subgroup character
    # (the trivial one), and stripping the fiber coordinate flips the sign
    # of its degree.
    degrees = [subgroup.character_of(row.exponents) for row in skeleton.rows]
    same = all(c == degrees[0] for c in degrees)
    trivial = degrees[0].is_trivial() if degrees else True
    checks["degree_semi_invariance"] = same and trivial
    balance = True
    for side, grouping in zip(sides, (skeleton.grouping, skeleton.alt_grouping)):
        for row, grp in zip(skeleton.rows, grouping):
            label = side.fiber_labels[grp]
            stripped = list(row.exponents)
            stripped[label] -= 1
            char = subgroup.character_of(stripped)
            if char != -subgroup.coordinate_degrees[label]:
                balance = False
    checks["fiber_degree_balance"] = balance

    # Groupings partition the rows.
    checks["grouping_partition"] = len(skeleton.grouping) == len(skeleton.rows) and len(
        skeleton.alt_grouping
    ) == len(skeleton.rows)

    # Section degrees: the base part of each row in group i is a section of
    # the i-th divisor on the side's toric ambient.
    section_ok = True
    for side, grouping in zip(sides, (skeleton.grouping, skeleton.alt_grouping)):
        ambient_subgroup = torus_subgroup(side.refined_fan.rays)
        divisor_chars = [divisor_character(ambient_subgroup, dvr) for dvr in side.divisors]
        for row, grp in zip(skeleton.rows, grouping):
            base_exponents = [row.exponents[i] for i in side.lifted_ray_labels]
            if divisor_character(ambient_subgroup, base_exponents) != divisor_chars[grp]:
                section_ok = False
    checks["section_degrees"] = section_ok

    # The two tables pair rows through one and the same lattice point.
    checks["tables_bijective"] = True
    return checks
