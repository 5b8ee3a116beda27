"""Exact lattice polytopes and rational polyhedral cones.

Everything is computed over exact integers (with rationals only at the
user-facing vertices of dual polytopes).  Convex hulls and cone duals go
through a double description pass: half-spaces are inserted one at a time
while a minimal generator description (lineality basis plus extreme rays)
is maintained.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InputError, InternalConsistencyError
from .intlinalg import (
    as_int_matrix,
    hermite_normal_form,
    kernel_basis,
    primitive_vector,
    rank,
    solve_integer,
)


def pair(m, n) -> int:
    """The lattice pairing <m, n>; rejects length mismatches."""
    if len(m) != len(n):
        raise InputError(f"pairing of vectors of ranks {len(m)} and {len(n)}")
    return sum(int(a) * int(b) for a, b in zip(m, n))


def _ivec(v) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def _hnf_rows(rows) -> list[tuple[int, ...]]:
    if not rows:
        return []
    h, _ = hermite_normal_form(rows)
    return [tuple(r) for r in h.tolist() if any(x != 0 for x in r)]


def _reduce_mod_lattice(vec, hnf_rows) -> tuple[int, ...]:
    """Canonical coset representative of vec modulo the integer row span."""
    v = list(vec)
    for row in hnf_rows:
        piv = next(j for j, x in enumerate(row) if x != 0)
        q = v[piv] // row[piv]
        if q != 0:
            for k in range(len(v)):
                v[k] -= q * row[k]
    return tuple(v)


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------

def extreme_rays(inequalities, dim) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """V-description of the cone {x : a.x >= 0 for each row a}.

    Returns (lineality_basis, rays) with primitive integer rays; the
    lineality basis is in Hermite normal form.  Insertion order of the
    inequalities is the caller's, making the run deterministic.
    """
    lineality = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    zeros: list[set[int]] = []
    processed = 0

    for a in inequalities:
        a = _ivec(a)
        if len(a) != dim:
            raise InputError("inequality of wrong dimension")
        hit = next((l for l in lineality if pair(a, l) != 0), None)
        if hit is not None:
            s = pair(a, hit)
            if s < 0:
                hit = tuple(-x for x in hit)
                s = -s
            new_lin = []
            for l in lineality:
                if l is hit or l == hit:
                    continue
                t = pair(a, l)
                new_lin.append(primitive_vector(tuple(s * x - t * y for x, y in zip(l, hit))))
            new_rays, new_zeros = [], []
            for r, z in zip(rays, zeros):
                t = pair(a, r)
                new_rays.append(primitive_vector(tuple(s * x - t * y for x, y in zip(r, hit))))
                new_zeros.append(z | {processed})
            new_rays.append(hit)
            new_zeros.append(set(range(processed)))
            lineality, rays, zeros = new_lin, new_rays, new_zeros
        else:
            values = [pair(a, r) for r in rays]
            pos = [i for i, v in enumerate(values) if v > 0]
            neg = [i for i, v in enumerate(values) if v < 0]
            zer = [i for i, v in enumerate(values) if v == 0]
            if neg:
                combos, combo_zeros = [], []
                for ip in pos:
                    for io in neg:
                        common = zeros[ip] & zeros[io]
                        adjacent = not any(
                            k not in (ip, io) and common <= zeros[k]
                            for k in range(len(rays))
                        )
                        if not adjacent:
                            continue
                        vec = tuple(
                            values[ip] * x - values[io] * y
                            for x, y in zip(rays[io], rays[ip])
                        )
                        combos.append(primitive_vector(vec))
                        combo_zeros.append(common | {processed})
                keep = pos + zer
                rays = [rays[i] for i in keep] + combos
                zeros = [
                    zeros[i] | ({processed} if i in zer else set()) for i in keep
                ] + combo_zeros
            else:
                for i in zer:
                    zeros[i].add(processed)
        processed += 1

    return _hnf_rows(lineality), sorted(set(rays))


def cone_hrep(generators, dim) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """H-description (equations, facet inequalities) of cone(generators).

    Facet normals are inner, primitive, and reduced to a canonical coset
    representative when the cone is not full dimensional.
    """
    lin, rays = extreme_rays([_ivec(g) for g in generators], dim)
    equations = lin
    if equations:
        facets = sorted({_reduce_mod_lattice(r, equations) for r in rays})
        facets = [f for f in facets if any(x != 0 for x in f)]
    else:
        facets = rays
    return equations, facets


# ---------------------------------------------------------------------------
# Lattice polytopes
# ---------------------------------------------------------------------------

class LatticePolytope:
    """Convex hull of finitely many lattice points, kept in exact form.

    `facets` are pairs (normal, offset) with <x, normal> >= -offset on the
    polytope; `equations` are pairs that hold with equality and cut out the
    affine hull.  Vertices are lexicographically sorted, so equality of
    polytopes is plain structural equality.
    """

    __slots__ = ("ambient", "tag", "vertices", "facets", "equations", "dim")

    def __init__(self, ambient, tag, vertices, facets, equations, dim):
        self.ambient = ambient
        self.tag = tag
        self.vertices = vertices
        self.facets = facets
        self.equations = equations
        self.dim = dim

    @staticmethod
    def from_points(points, tag=None) -> "LatticePolytope":
        pts = sorted({_ivec(p) for p in points})
        if not pts:
            raise InputError("a polytope needs at least one point")
        ambient = len(pts[0])
        if any(len(p) != ambient for p in pts):
            raise InputError("points of mixed ambient rank")
        lifted = [p + (1,) for p in pts]
        equations, facet_rows = cone_hrep(lifted, ambient + 1)
        dim = ambient - len(equations)
        vertices = []
        for p, lp in zip(pts, lifted):
            tight = [row for row in facet_rows if pair(row, lp) == 0]
            if rank(as_int_matrix(list(equations) + tight)) == ambient:
                vertices.append(p)
        facets = sorted((row[:-1], row[-1]) for row in facet_rows)
        eqs = sorted((row[:-1], row[-1]) for row in equations)
        return LatticePolytope(ambient, tag, tuple(vertices), tuple(facets), tuple(eqs), dim)

    def __eq__(self, other):
        return (
            isinstance(other, LatticePolytope)
            and self.ambient == other.ambient
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient, self.vertices))

    def __repr__(self):
        return (
            f"LatticePolytope(dim={self.dim}, ambient={self.ambient}, "
            f"vertices={len(self.vertices)})"
        )

    def contains(self, point) -> bool:
        p = _ivec(point)
        if len(p) != self.ambient:
            return False
        return all(pair(n, p) + c == 0 for n, c in self.equations) and all(
            pair(n, p) + c >= 0 for n, c in self.facets
        )

    def interior_contains(self, point) -> bool:
        """Relative interior membership (strict on facets, tight on equations)."""
        p = _ivec(point)
        return all(pair(n, p) + c == 0 for n, c in self.equations) and all(
            pair(n, p) + c > 0 for n, c in self.facets
        )

    def lattice_points(self) -> list[tuple[int, ...]]:
        """All lattice points, lexicographically ordered (bounding-box scan)."""
        if not self.vertices:
            return []
        lows = [min(v[i] for v in self.vertices) for i in range(self.ambient)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.ambient)]
        out = []
        for cand in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
            if self.contains(cand):
                out.append(cand)
        return out

    def interior_lattice_points(self) -> list[tuple[int, ...]]:
        return [p for p in self.lattice_points() if self.interior_contains(p)]

    def translate(self, t) -> "LatticePolytope":
        t = _ivec(t)
        return LatticePolytope.from_points([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.tag)

    def dilate(self, k: int) -> "LatticePolytope":
        return LatticePolytope.from_points([tuple(k * x for x in v) for v in self.vertices], self.tag)

    def minkowski(self, other: "LatticePolytope") -> "LatticePolytope":
        if self.ambient != other.ambient:
            raise InputError("Minkowski sum of polytopes in different ambients")
        if self.tag is not None and other.tag is not None and self.tag != other.tag:
            raise InputError(f"Minkowski sum across ambient tags {self.tag!r} and {other.tag!r}")
        sums = [tuple(a + b for a, b in zip(v, w)) for v in self.vertices for w in other.vertices]
        return LatticePolytope.from_points(sums, self.tag or other.tag)

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def is_reflexive(self, base=None) -> bool:
        """Reflexive with respect to `base` (default: the origin).

        Equivalent to every primitive facet inequality having offset one
        relative to the base point, with the base point interior.
        """
        if not self.is_full_dimensional():
            return False
        base = _ivec(base) if base is not None else (0,) * self.ambient
        return all(pair(n, base) + c == 1 for n, c in self.facets)


def hull(points, tag=None) -> LatticePolytope:
    """Convex hull with irredundant vertex and facet descriptions."""
    return LatticePolytope.from_points(points, tag)


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    return p.minkowski(q)


def lattice_points(p: LatticePolytope) -> list[tuple[int, ...]]:
    return p.lattice_points()


class RationalPolytope:
    """Polytope with rational vertices; the output type of dual_polytope."""

    __slots__ = ("ambient", "vertices")

    def __init__(self, ambient, vertices):
        self.ambient = ambient
        self.vertices = tuple(sorted(tuple(Fraction(x) for x in v) for v in vertices))

    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def to_lattice(self, tag=None) -> LatticePolytope:
        if not self.is_lattice():
            raise InputError("polytope has non-integral vertices")
        return LatticePolytope.from_points([tuple(int(x) for x in v) for v in self.vertices], tag)

    def __repr__(self):
        kind = "lattice" if self.is_lattice() else "rational"
        return f"RationalPolytope({kind}, vertices={len(self.vertices)})"


def dual_polytope(p: LatticePolytope, base=None) -> RationalPolytope:
    """The polytope {n : <m - base, n> >= -1 for all m in p}.

    Requires p full dimensional with `base` strictly interior.  The result
    is rational in general; `is_lattice()` is the reflexivity witness.
    """
    base = _ivec(base) if base is not None else (0,) * p.ambient
    if not p.is_full_dimensional():
        raise InputError("dual polytope requires a full-dimensional polytope")
    if not p.interior_contains(base):
        raise InputError(f"base point {base} is not interior to the polytope")
    rows = [tuple(a - b for a, b in zip(v, base)) + (1,) for v in p.vertices]
    lin, rays = extreme_rays(rows, p.ambient + 1)
    if lin:
        raise InternalConsistencyError("dual of a full-dimensional polytope cannot have lineality")
    verts = []
    for r in rays:
        if r[-1] <= 0:
            raise InternalConsistencyError("dual polytope of an interior-based polytope must be bounded")
        verts.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
    return RationalPolytope(p.ambient, verts)


# ---------------------------------------------------------------------------
# Rational cones
# ---------------------------------------------------------------------------

class RationalCone:
    """Strictly convex rational polyhedral cone with apex at the origin.

    Stores primitive extreme generators and primitive inner facet normals,
    both lexicographically sorted; `span_equations` cut out the linear span
    when the cone is not full dimensional.
    """

    __slots__ = ("ambient", "tag", "generators", "facet_normals", "span_equations", "dim")

    def __init__(self, ambient, tag, generators, facet_normals, span_equations, dim):
        self.ambient = ambient
        self.tag = tag
        self.generators = generators
        self.facet_normals = facet_normals
        self.span_equations = span_equations
        self.dim = dim

    @staticmethod
    def from_generators(generators, tag=None) -> "RationalCone":
        gens = sorted({primitive_vector(_ivec(g)) for g in generators})
        gens = [g for g in gens if any(x != 0 for x in g)]
        if not gens:
            raise InputError("a cone needs at least one nonzero generator")
        ambient = len(gens[0])
        if any(len(g) != ambient for g in gens):
            raise InputError("generators of mixed ambient rank")
        equations, facets = cone_hrep(gens, ambient)
        if rank(as_int_matrix(list(equations) + list(facets))) < ambient:
            raise InputError("cone is not strictly convex (contains a line)")
        dim = ambient - len(equations)
        extreme = []
        for g in gens:
            tight = [f for f in facets if pair(f, g) == 0]
            if rank(as_int_matrix(list(equations) + tight)) == ambient - 1:
                extreme.append(g)
        return RationalCone(ambient, tag, tuple(extreme), tuple(facets), tuple(equations), dim)

    @staticmethod
    def from_inequalities(rows, ambient, tag=None) -> "RationalCone":
        lin, rays = extreme_rays([_ivec(r) for r in rows], ambient)
        if lin:
            raise InputError("cone is not strictly convex (contains a line)")
        return RationalCone.from_generators(rays, tag)

    def __eq__(self, other):
        return (
            isinstance(other, RationalCone)
            and self.ambient == other.ambient
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.ambient, self.generators))

    def __repr__(self):
        return (
            f"RationalCone(dim={self.dim}, ambient={self.ambient}, "
            f"generators={len(self.generators)})"
        )

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def contains(self, point) -> bool:
        p = _ivec(point)
        return all(pair(e, p) == 0 for e in self.span_equations) and all(
            pair(f, p) >= 0 for f in self.facet_normals
        )

    def interior_contains(self, point) -> bool:
        p = _ivec(point)
        return all(pair(e, p) == 0 for e in self.span_equations) and all(
            pair(f, p) > 0 for f in self.facet_normals
        )

    def dual(self) -> "RationalCone":
        if not self.is_full_dimensional():
            raise InputError("dual cone requires a full-dimensional cone")
        return RationalCone.from_generators(self.facet_normals, self.tag)


def dual_cone(c: RationalCone) -> RationalCone:
    """Generators become facet normals and vice versa (recomputed, exact)."""
    return c.dual()


# ---------------------------------------------------------------------------
# Gorenstein structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GorensteinData:
    """Degree data of a Gorenstein cone.

    `deg_dual` pairs to one with every generator; when the dual cone is
    Gorenstein too, `deg` is its degree element and `index` their pairing.
    """

    deg_dual: tuple[int, ...]
    deg: tuple[int, ...] | None
    index: int | None


def _degree_element(cone: RationalCone):
    sol = solve_integer(as_int_matrix(cone.generators), [1] * len(cone.generators))
    if sol is None:
        return None
    return _ivec(sol)


def affine_chart(functional, level) -> tuple[tuple[int, ...], list[tuple[int, ...]]]:
    """Lattice chart of the hyperplane {x : <x, functional> = level}.

    Returns (origin, basis columns); x = origin + basis @ y identifies the
    hyperplane lattice with Z^(n-1).
    """
    functional = _ivec(functional)
    origin = solve_integer([functional], [level])
    if origin is None:
        raise InputError("hyperplane has no lattice point at this level")
    k = kernel_basis([functional])
    basis = [tuple(int(k[i, j]) for i in range(k.shape[0])) for j in range(k.shape[1])]
    return _ivec(origin), basis


def to_chart(point, origin, basis):
    rhs = [int(a) - int(b) for a, b in zip(point, origin)]
    mat = [[basis[j][i] for j in range(len(basis))] for i in range(len(origin))]
    sol = solve_integer(mat, rhs)
    if sol is None:
        raise InputError("point does not lie on the chart lattice")
    return _ivec(sol)


def from_chart(coords, origin, basis):
    out = list(origin)
    for c, b in zip(coords, basis):
        for i in range(len(out)):
            out[i] += int(c) * b[i]
    return tuple(out)


def slice_polytope(cone: RationalCone, deg_dual, level: int):
    """The level-k slice of a Gorenstein cone as a full-dimensional polytope.

    Returns (polytope, origin, basis) where the polytope lives in the
    hyperplane chart and origin/basis map chart coordinates back to the
    ambient lattice.
    """
    origin, basis = affine_chart(deg_dual, level)
    verts = [to_chart(tuple(level * x for x in g), origin, basis) for g in cone.generators]
    return LatticePolytope.from_points(verts), origin, basis


def gorenstein_polytope_data(p: LatticePolytope):
    """Smallest r with an interior lattice point m of r*p making r*p - m reflexive.

    Searches r = 1 .. dim + 1 and returns (r, m) or None.  Requires a
    full-dimensional polytope.
    """
    if not p.is_full_dimensional():
        raise InputError("Gorenstein index search requires a full-dimensional polytope")
    for r in range(1, p.dim + 2):
        rp = p.dilate(r)
        for m in rp.interior_lattice_points():
            if rp.is_reflexive(m):
                return r, m
    return None


def gorenstein_cone_data(cone: RationalCone):
    """Degree data of a (reflexive) Gorenstein cone, with consistency checks.

    Returns None when the cone is not Gorenstein.  When it is reflexive
    Gorenstein, the equivalent characterizations (index-r slice reflexive
    around the degree point; support a Gorenstein polytope of index r) are
    verified and any disagreement raises InternalConsistencyError.
    """
    if not cone.is_full_dimensional():
        raise InputError("Gorenstein data requires a full-dimensional cone")
    deg_dual = _degree_element(cone)
    if deg_dual is None:
        return None
    deg = _degree_element(cone.dual())
    if deg is None:
        return GorensteinData(deg_dual=deg_dual, deg=None, index=None)
    index = pair(deg, deg_dual)
    data = GorensteinData(deg_dual=deg_dual, deg=deg, index=index)

    slice_r, origin_r, basis_r = slice_polytope(cone, deg_dual, index)
    deg_chart = to_chart(deg, origin_r, basis_r)
    if not slice_r.is_reflexive(deg_chart):
        raise InternalConsistencyError(
            "index slice of a reflexive Gorenstein cone is not reflexive at the degree point"
        )
    if slice_r.interior_lattice_points() != [deg_chart]:
        raise InternalConsistencyError(
            "degree point is not the unique interior point of the index slice"
        )
    support, origin_1, basis_1 = slice_polytope(cone, deg_dual, 1)
    gp = gorenstein_polytope_data(support)
    if gp is None or gp[0] != index:
        raise InternalConsistencyError(
            "support polytope does not have the Gorenstein index of its cone"
        )
    # Chart coordinates of r*support sit at ambient level r: z -> r*origin + B z.
    m_ambient = from_chart(gp[1], tuple(index * x for x in origin_1), basis_1)
    if m_ambient != deg:
        raise InternalConsistencyError("Gorenstein interior points disagree between slices")
    return data
