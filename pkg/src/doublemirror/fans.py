"""Fans of strictly convex cones: normal fans, Cox data, bundle fans,
and ray-preserving simplicial refinement by star subdivisions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError, InternalConsistencyError
from .intlinalg import as_int_matrix, primitive_vector, rank
from .polytopes import LatticePolytope, RationalCone, cone_hrep, extreme_rays, pair


class Fan:
    """A fan stored as ordered primitive rays plus maximal cones (ray index sets).

    Face cones are implicit.  The ray order is part of the data (divisor
    coefficient vectors are indexed by it); construction sorts cones
    canonically so fans compare structurally.
    """

    __slots__ = ("ambient", "rays", "maximal_cones", "tag")

    def __init__(self, rays, maximal_cones, tag=None):
        rays = tuple(primitive_vector(tuple(int(x) for x in r)) for r in rays)
        if not rays:
            raise InputError("a fan needs at least one ray")
        if len(set(rays)) != len(rays):
            raise InputError("duplicate rays in fan")
        self.ambient = len(rays[0])
        if any(len(r) != self.ambient for r in rays):
            raise InputError("rays of mixed ambient rank")
        self.rays = rays
        cones = sorted({tuple(sorted(set(c))) for c in maximal_cones})
        for c in cones:
            if not c or c[-1] >= len(rays) or c[0] < 0:
                raise InputError("cone refers to a ray index out of range")
        self.maximal_cones = tuple(cones)
        self.tag = tag

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.rays == other.rays
            and self.maximal_cones == other.maximal_cones
        )

    def __hash__(self):
        return hash((self.rays, self.maximal_cones))

    def __repr__(self):
        return f"Fan(ambient={self.ambient}, rays={len(self.rays)}, maximal={len(self.maximal_cones)})"

    def cone_rays(self, cone) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]

    def is_simplicial(self) -> bool:
        return all(
            rank(as_int_matrix(self.cone_rays(c))) == len(c) for c in self.maximal_cones
        )

    def apply(self, matrix) -> "Fan":
        """Image fan under an invertible integer matrix (rows act on column vectors)."""
        mat = [list(map(int, row)) for row in matrix]
        new_rays = [
            tuple(sum(mat[i][j] * r[j] for j in range(self.ambient)) for i in range(len(mat)))
            for r in self.rays
        ]
        # Keep ray order aligned with the original so cone index sets carry over.
        fan = Fan.__new__(Fan)
        fan.ambient = len(mat)
        fan.rays = tuple(primitive_vector(r) for r in new_rays)
        fan.maximal_cones = self.maximal_cones
        fan.tag = self.tag
        return fan

    def support_cone(self, tag=None) -> RationalCone:
        """Cone generated by all rays; meaningful when the support is convex."""
        return RationalCone.from_generators(self.rays, tag or self.tag)


def normal_fan(p: LatticePolytope, tag=None) -> Fan:
    """Inner-normal fan: one maximal cone per vertex, rays the facet normals."""
    if not p.is_full_dimensional():
        raise InputError("normal fan requires a full-dimensional polytope")
    rays = [n for n, _ in p.facets]
    cones = []
    for v in p.vertices:
        cones.append(tuple(i for i, (n, c) in enumerate(p.facets) if pair(n, v) + c == 0))
    return Fan(rays, cones, tag)


@dataclass(frozen=True)
class CoxData:
    """Cox-space combinatorics of a fan.

    `cox_cones` are the coordinate cones Cone(e_rho : rho in sigma) indexed
    by ray sets; `irrelevant_collections` are the minimal ray sets spanning
    no cone, i.e. the coordinate subspaces removed from affine space.
    """

    cox_cones: tuple[tuple[int, ...], ...]
    irrelevant_collections: tuple[tuple[int, ...], ...]


def cox_data(fan: Fan) -> CoxData:
    maximal = [set(c) for c in fan.maximal_cones]
    n = len(fan.rays)
    collections = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if any(s <= c for c in maximal):
                continue
            if any(set(found) <= s for found in collections):
                continue
            collections.append(subset)
    return CoxData(cox_cones=fan.maximal_cones, irrelevant_collections=tuple(collections))


def polytope_divisor(fan: Fan, polytope: LatticePolytope) -> tuple[int, ...]:
    """Coefficients a_rho = -min <P, u_rho> of the divisor carried by a polytope."""
    return tuple(-min(pair(v, r) for v in polytope.vertices) for r in fan.rays)


def bundle_fan(fan: Fan, divisors, tag=None) -> Fan:
    """The fan of the split bundle with the given divisor coefficient rows.

    Lives in rank ambient + r.  Rays are the lifts u_rho - sum_i a_i(rho) e_i
    together with the fiber basis vectors e_i; each maximal cone of the base
    fan contributes its lifted rays joined with the full fiber cone.
    """
    divisors = [tuple(int(a) for a in d) for d in divisors]
    if not divisors:
        raise InputError("bundle fan requires at least one divisor")
    r = len(divisors)
    for d in divisors:
        if len(d) != len(fan.rays):
            raise InputError(
                f"divisor has {len(d)} coefficients for a fan with {len(fan.rays)} rays"
            )
    lifted = [
        u + tuple(-divisors[i][j] for i in range(r))
        for j, u in enumerate(fan.rays)
    ]
    fibers = [
        (0,) * fan.ambient + tuple(1 if k == i else 0 for k in range(r)) for i in range(r)
    ]
    rays = lifted + fibers
    nbase = len(fan.rays)
    cones = [
        tuple(list(c) + [nbase + i for i in range(r)]) for c in fan.maximal_cones
    ]
    return Fan(rays, cones, tag)


def _cone_facet_members(rays) -> list[set[int]]:
    """Index sets of the facets of Cone(rays) (facets within the linear span)."""
    _, facets = cone_hrep(rays, len(rays[0]))
    members = []
    for f in facets:
        members.append({i for i, g in enumerate(rays) if pair(f, g) == 0})
    return members


def star_subdivision(fan: Fan, ray_index: int) -> Fan:
    """Star subdivision of the fan at one of its own rays."""
    new_cones = []
    for cone in fan.maximal_cones:
        if ray_index not in cone:
            new_cones.append(cone)
            continue
        gens = fan.cone_rays(cone)
        pos = cone.index(ray_index)
        for members in _cone_facet_members(gens):
            if pos in members:
                continue
            new_cones.append(tuple(sorted({cone[i] for i in members} | {ray_index})))
    return Fan(fan.rays, new_cones, fan.tag)


def simplicial_refinement(fan: Fan) -> Fan:
    """Simplicial refinement with the identical ray set.

    Star-subdivides at every ray in lexicographic order of the primitive
    generators; simplicial cones are untouched, every output cone lies in a
    cone of the input, and the result is simplicial.
    """
    order = sorted(range(len(fan.rays)), key=lambda i: fan.rays[i])
    out = fan
    for idx in order:
        out = star_subdivision(out, idx)
    if not out.is_simplicial():
        raise InternalConsistencyError("star subdivision pass left a non-simplicial cone")
    return out


def validate_fan(fan: Fan) -> None:
    """Checks the fan axiom: pairwise intersections of cones are common faces.

    Quadratic in the number of maximal cones; meant for test suites, not
    construction paths.
    """
    cones = fan.maximal_cones
    hreps = []
    for c in cones:
        eqs, facets = cone_hrep(fan.cone_rays(c), fan.ambient)
        hreps.append([e for e in eqs] + [tuple(-x for x in e) for e in eqs] + list(facets))
    for a, b in itertools.combinations(range(len(cones)), 2):
        lin, meet_rays = extreme_rays(hreps[a] + hreps[b], fan.ambient)
        if lin:
            raise InternalConsistencyError("cone intersection contains a line")
        for c in (cones[a], cones[b]):
            # Minimal face of the cone containing the intersection: cut by
            # every facet of the cone that vanishes on the whole intersection.
            eqs, facets = cone_hrep(fan.cone_rays(c), fan.ambient)
            tight = [f for f in facets if all(pair(f, g) == 0 for g in meet_rays)]
            face_members = [
                i for i in c if all(pair(f, fan.rays[i]) == 0 for f in tight)
            ]
            face_rays = [fan.rays[i] for i in face_members]
            ok = all(_in_cone(g, face_rays, fan.ambient) for g in meet_rays) and all(
                _in_cone(g, meet_rays, fan.ambient) for g in face_rays
            )
            if not ok:
                raise InternalConsistencyError("intersection of cones is not a face of both")


def _in_cone(point, generators, dim) -> bool:
    if not generators:
        return all(x == 0 for x in point)
    eqs, facets = cone_hrep(generators, dim)
    return all(pair(e, point) == 0 for e in eqs) and all(pair(f, point) >= 0 for f in facets)


def is_complete_sample(fan: Fan, samples: int, rng) -> bool:
    """Sampling completeness check: random directions all land in some cone."""
    for _ in range(samples):
        x = tuple(rng.randint(-10**6, 10**6) for _ in range(fan.ambient))
        if not any(_in_cone(x, fan.cone_rays(c), fan.ambient) for c in fan.maximal_cones):
            return False
    return True
