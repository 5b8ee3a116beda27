"""Nef partitions and their Cayley geometry.

A nef partition decomposes a reflexive polytope as a Minkowski sum of
lattice polytopes with chosen base points adding up to the interior
point.  The Cayley cone packages the parts one dimension up per part;
splittings of the degree element classify the ways the same cone arises
from such a package, which is the source of double mirrors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalConsistencyError, VerificationError
from .intlinalg import as_int_matrix, kernel_basis, rank, solve_integer
from .polytopes import (
    GorensteinData,
    LatticePolytope,
    RationalCone,
    dual_polytope,
    extreme_rays,
    gorenstein_cone_data,
    hull,
    pair,
)


@dataclass(frozen=True)
class NefPartition:
    """Validated nef partition: parts, base points, their Minkowski sum, and
    the interior point the base points add up to."""

    parts: tuple[LatticePolytope, ...]
    base_points: tuple[tuple[int, ...], ...]
    total: LatticePolytope
    interior_point: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def ambient(self) -> int:
        return self.total.ambient

    def normalized_parts(self) -> list[LatticePolytope]:
        """Parts translated so each base point moves to the origin."""
        return [
            part.translate(tuple(-x for x in p))
            for part, p in zip(self.parts, self.base_points)
        ]


def validate_nef_partition(parts, base_points) -> NefPartition:
    """Checks every axiom and names the violated one on failure."""
    parts = tuple(parts)
    if not parts:
        raise InputError("a nef partition needs at least one part")
    base_points = tuple(tuple(int(x) for x in p) for p in base_points)
    if len(base_points) != len(parts):
        raise InputError(f"{len(base_points)} base points for {len(parts)} parts")
    ambient = parts[0].ambient
    if any(p.ambient != ambient for p in parts):
        raise InputError("parts live in different ambient lattices")
    total = parts[0]
    for p in parts[1:]:
        total = total.minkowski(p)
    m = tuple(sum(col) for col in zip(*base_points))
    for i, (part, p) in enumerate(zip(parts, base_points)):
        if not part.contains(p):
            raise VerificationError(
                "nef partition axiom: each base point must be a lattice point of its part",
                f"base point {p} is outside part {i}",
            )
    if not total.is_full_dimensional():
        raise VerificationError(
            "nef partition axiom: the Minkowski sum must be full-dimensional",
            f"dimension {total.dim} in ambient rank {ambient}",
        )
    if not total.interior_contains(m):
        raise VerificationError(
            "nef partition axiom: the base points must sum to an interior lattice point",
            f"sum {m} is not interior to the Minkowski sum",
        )
    if not total.is_reflexive(m):
        raise VerificationError(
            "nef partition axiom: the Minkowski sum must be reflexive with respect to the base-point sum",
            f"sum of parts is not reflexive at {m}",
        )
    return NefPartition(parts, base_points, total, m)


def dual_nef_partition(partition: NefPartition) -> list[LatticePolytope]:
    """The dual parts: the j-th one is cut out by <m, n> >= -delta_ij over
    all m in part_i - p_i.  All of them must come out as lattice polytopes."""
    d = partition.ambient
    normalized = partition.normalized_parts()
    duals = []
    for j in range(partition.length):
        rows = []
        for i, part in enumerate(normalized):
            off = 1 if i == j else 0
            for v in part.vertices:
                rows.append(v + (off,))
        lin, rays = extreme_rays(rows, d + 1)
        if lin:
            raise VerificationError(
                "dual nef partition must be bounded",
                f"dual part {j} contains a line",
            )
        verts = []
        for r in rays:
            if r[-1] == 0:
                raise VerificationError(
                    "dual nef partition must be bounded",
                    f"dual part {j} has recession direction {r[:-1]}",
                )
            if any(x % r[-1] != 0 for x in r[:-1]):
                raise VerificationError(
                    "dual nef partition must have lattice vertices",
                    f"dual part {j} has vertex {tuple(Fraction(x, r[-1]) for x in r[:-1])}",
                )
            verts.append(tuple(x // r[-1] for x in r[:-1]))
        duals.append(hull(verts))
    return duals


@dataclass(frozen=True)
class CayleyData:
    """Cayley polytope and cone of a list of parts, with Gorenstein data."""

    polytope: LatticePolytope
    cone: RationalCone
    num_parts: int
    base_rank: int
    gorenstein: GorensteinData | None

    def fiber_basis(self) -> list[tuple[int, ...]]:
        d, r = self.base_rank, self.num_parts
        return [(0,) * d + tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]


def cayley(parts) -> CayleyData:
    """Cayley construction: each part lifted by its own fiber basis vector."""
    parts = tuple(parts)
    if not parts:
        raise InputError("Cayley construction needs at least one part")
    d = parts[0].ambient
    r = len(parts)
    lifted = []
    for i, part in enumerate(parts):
        tail = tuple(1 if k == i else 0 for k in range(r))
        lifted += [v + tail for v in part.vertices]
    polytope = hull(lifted)
    cone = RationalCone.from_generators(lifted)
    g = gorenstein_cone_data(cone) if cone.is_full_dimensional() else None
    return CayleyData(polytope, cone, r, d, g)


def support_lattice_points(data: CayleyData) -> list[tuple[int, ...]]:
    """Lattice points of the height-one slice (the Cayley polytope)."""
    return data.polytope.lattice_points()


@dataclass(frozen=True)
class SplittingData:
    """An unordered tuple of dual slice-one lattice points summing to the
    degree element, together with canonical dual-basis sections."""

    vectors: tuple[tuple[int, ...], ...]
    sections: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.vectors)


def _canonical_sections(vectors):
    """Integer sections t_i with <t_i, s_j> = delta_ij, reduced canonically."""
    mat = as_int_matrix(vectors)
    r, n = mat.shape
    kern = kernel_basis(mat)
    kern_rows = [tuple(int(kern[i, j]) for i in range(n)) for j in range(kern.shape[1])]
    from .intlinalg import hermite_normal_form

    red = []
    if kern_rows:
        h, _ = hermite_normal_form(kern_rows)
        red = [tuple(row) for row in h.tolist() if any(x != 0 for x in row)]
    sections = []
    for i in range(r):
        rhs = [1 if k == i else 0 for k in range(r)]
        t = solve_integer(mat, rhs)
        if t is None:
            return None
        t = [int(x) for x in t]
        for row in red:
            piv = next(j for j, x in enumerate(row) if x != 0)
            q = t[piv] // row[piv]
            if q:
                t = [a - q * b for a, b in zip(t, row)]
        sections.append(tuple(t))
    return tuple(sections)


def splittings(data: CayleyData) -> list[SplittingData]:
    """All splittings of the cone: unordered r-multisets of nonzero lattice
    points of the dual slice-one polytope summing to the degree element."""
    g = data.gorenstein
    if g is None or g.index is None:
        raise InputError("splittings need a reflexive Gorenstein cone")
    r = g.index
    dual = data.cone.dual()
    # Dual generators sit at height one against deg; its slice-one lattice
    # points are the candidates.
    from .polytopes import slice_polytope, from_chart

    slice_poly, origin, basis = slice_polytope(dual, g.deg, 1)
    candidates = sorted(
        from_chart(y, origin, basis) for y in slice_poly.lattice_points()
    )
    target = g.deg_dual
    found = []

    def dfs(start, chosen, remaining, count):
        if count == 0:
            if all(x == 0 for x in remaining):
                found.append(tuple(chosen))
            return
        if pair(remaining, g.deg) != count:
            return
        for k in range(start, len(candidates)):
            c = candidates[k]
            chosen.append(c)
            dfs(k, chosen, tuple(a - b for a, b in zip(remaining, c)), count - 1)
            chosen.pop()

    dfs(0, [], target, r)
    out = []
    for vecs in found:
        sections = _canonical_sections(vecs)
        if sections is None:
            raise InternalConsistencyError("splitting vectors are not part of a dual basis")
        out.append(SplittingData(vectors=vecs, sections=sections))
    return out


def recovered_parts(data: CayleyData, splitting: SplittingData) -> list[LatticePolytope]:
    """The subpolytopes of the support cut out by a splitting.

    Part i collects the slice-one points pairing to zero with every other
    splitting vector (and then necessarily to one with its own).
    """
    return [
        _support_section(data, [s for j, s in enumerate(splitting.vectors) if j != i])
        for i in range(splitting.length)
    ]


def _support_section(data: CayleyData, eq_rows) -> LatticePolytope:
    """Intersection of the support polytope with <x, s> = 0 hyperplanes."""
    n = data.polytope.ambient
    rows = []
    for normal, off in data.polytope.facets:
        rows.append(normal + (off,))
    for normal, off in data.polytope.equations:
        rows.append(normal + (off,))
        rows.append(tuple(-x for x in normal) + (-off,))
    for s in eq_rows:
        rows.append(tuple(s) + (0,))
        rows.append(tuple(-x for x in s) + (0,))
    lin, rays = extreme_rays(rows, n + 1)
    if lin:
        raise InternalConsistencyError("support section contains a line")
    verts = []
    for ray in rays:
        if ray[-1] == 0:
            raise InternalConsistencyError("support section is unbounded")
        if any(x % ray[-1] != 0 for x in ray[:-1]):
            raise InternalConsistencyError("support section has a non-lattice vertex")
        verts.append(tuple(x // ray[-1] for x in ray[:-1]))
    return hull(verts)


def recover_partition(data: CayleyData, splitting: SplittingData) -> NefPartition:
    """Reassembles a nef partition from a splitting of the cone.

    The cut-out subpolytopes are translated by the canonical sections and
    written in the kernel lattice of the splitting vectors; base points are
    found by exhaustive search and the result is re-validated.
    """
    sections = splitting.sections
    mat = as_int_matrix(splitting.vectors)
    kern = kernel_basis(mat)
    n = data.polytope.ambient
    basis = [tuple(int(kern[i, j]) for i in range(n)) for j in range(kern.shape[1])]
    parts_down = []
    for i in range(splitting.length):
        eq_rows = [s for j, s in enumerate(splitting.vectors) if j != i]
        theta = _support_section(data, eq_rows)
        verts = []
        for v in theta.vertices:
            shifted = tuple(a - b for a, b in zip(v, sections[i]))
            coeffs = solve_integer(
                [[basis[j][k] for j in range(len(basis))] for k in range(n)], shifted
            )
            if coeffs is None:
                raise InternalConsistencyError("recovered vertex misses the kernel lattice")
            verts.append(tuple(int(x) for x in coeffs))
        parts_down.append(hull(verts))
    total = parts_down[0]
    for p in parts_down[1:]:
        total = total.minkowski(p)
    interior = total.interior_lattice_points()
    if len(interior) != 1:
        raise VerificationError(
            "recovered partition must have a unique interior point",
            f"found {len(interior)}",
        )
    base = find_base_points(parts_down, interior[0])
    if base is None:
        raise VerificationError(
            "recovered partition admits no base points summing to the interior point"
        )
    return validate_nef_partition(parts_down, base)


def find_base_points(parts, target):
    """Lattice points, one per part, summing to target (lexicographic DFS)."""
    target = tuple(int(x) for x in target)
    pts = [p.lattice_points() for p in parts]

    def dfs(i, acc):
        if i == len(pts):
            return [] if acc == target else None
        for cand in pts[i]:
            nxt = tuple(a + b for a, b in zip(acc, cand))
            rest = dfs(i + 1, nxt)
            if rest is not None:
                return [cand] + rest
        return None

    zero = tuple(0 for _ in target)
    return dfs(0, zero)


def special_simplices(polytope: LatticePolytope, length: int):
    """All special (length-1)-simplices: tuples of `length` affinely
    independent lattice points such that every facet of the polytope
    contains exactly length-1 of them.  Canonically sorted."""
    if length < 1:
        raise InputError("simplex length must be at least one")
    pts = polytope.lattice_points()
    out = []
    for combo in itertools.combinations(pts, length):
        lifted = [p + (1,) for p in combo]
        if rank(as_int_matrix(lifted)) != length:
            continue
        ok = True
        for normal, off in polytope.facets:
            on_facet = sum(1 for p in combo if pair(normal, p) + off == 0)
            if on_facet != length - 1:
                ok = False
                break
        if ok:
            out.append(tuple(sorted(combo)))
    return sorted(out)


def cayley_duality_check(partition: NefPartition) -> dict:
    """The three duality identities of a nef partition, reported not thrown.

    (i) the dual of the Cayley cone of the normalized parts is the Cayley
    cone of the dual parts; (ii) the hull of the normalized parts is dual
    to the sum of the dual parts; (iii) the hull of the dual parts is dual
    to the translated total polytope.
    """
    normalized = partition.normalized_parts()
    duals = dual_nef_partition(partition)
    report = {}

    cay = cayley(normalized)
    dual_cay = cayley(duals)
    try:
        report["dual_cone_is_dual_cayley_cone"] = cay.cone.dual() == dual_cay.cone
    except Exception:
        report["dual_cone_is_dual_cayley_cone"] = False

    union_parts = hull([v for p in normalized for v in p.vertices])
    nabla = duals[0]
    for p in duals[1:]:
        nabla = nabla.minkowski(p)
    try:
        d = dual_polytope(union_parts)
        report["hull_of_parts_dual_to_nabla"] = d.is_lattice() and d.to_lattice() == nabla
    except Exception:
        report["hull_of_parts_dual_to_nabla"] = False

    union_duals = hull([v for p in duals for v in p.vertices])
    shifted_total = partition.total.translate(tuple(-x for x in partition.interior_point))
    try:
        d = dual_polytope(union_duals)
        report["hull_of_duals_dual_to_total"] = d.is_lattice() and d.to_lattice() == shifted_total
    except Exception:
        report["hull_of_duals_dual_to_total"] = False

    report["all"] = all(report.values())
    return report
