"""Regular subdivisions, triangulations, and GKZ chambers of a point
configuration lying on an affine hyperplane off the origin.

Weights lift the points one dimension up; the projected lower hull of the
lifted cone is the induced subdivision.  Everything is exact: weights are
integers or Fractions, ties are decided by exact arithmetic, and chamber
membership is a strict integer inequality system.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import InputError, InternalConsistencyError, VerificationError
from .fans import Fan
from .lp import feasible_interior
from .intlinalg import (
    as_int_matrix,
    determinant,
    primitive_vector,
    rank,
    solve_integer,
    solve_rational,
)
from .polytopes import RationalCone, cone_hrep, extreme_rays, pair


class PointConfig:
    """Labeled points spanning the ambient lattice, on a hyperplane <.,h> = 1."""

    __slots__ = ("points", "ambient", "hyperplane")

    def __init__(self, points):
        pts = tuple(tuple(int(x) for x in p) for p in points)
        if not pts:
            raise InputError("empty point configuration")
        if len(set(pts)) != len(pts):
            raise InputError("point configuration has repeated points")
        self.points = pts
        self.ambient = len(pts[0])
        if any(len(p) != self.ambient for p in pts):
            raise InputError("points of mixed ambient rank")
        if rank(as_int_matrix(pts)) != self.ambient:
            raise InputError("point configuration must span the ambient lattice")
        h = solve_integer(as_int_matrix(pts), [1] * len(pts))
        if h is None:
            raise InputError("points do not lie on a common affine hyperplane off 0")
        self.hyperplane = tuple(int(x) for x in h)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, PointConfig) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointConfig({len(self.points)} points, rank {self.ambient})"

    def label_of(self, point) -> int:
        p = tuple(int(x) for x in point)
        try:
            return self.points.index(p)
        except ValueError:
            raise InputError(f"point {p} is not in the configuration") from None

    def cone(self) -> RationalCone:
        return RationalCone.from_generators(self.points)


@dataclass(frozen=True)
class Triangulation:
    config: PointConfig
    simplices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "simplices", tuple(sorted(tuple(sorted(s)) for s in self.simplices))
        )

    def used_labels(self) -> tuple[int, ...]:
        return tuple(sorted({i for s in self.simplices for i in s}))

    def unused_labels(self) -> tuple[int, ...]:
        used = set(self.used_labels())
        return tuple(i for i in range(len(self.config)) if i not in used)

    def __repr__(self):
        return f"Triangulation({len(self.simplices)} simplices over {len(self.config)} points)"


@dataclass(frozen=True)
class Subdivision:
    """Projected lower hull of a weight lift; cells are label sets."""

    config: PointConfig
    weights: tuple
    cells: tuple[tuple[int, ...], ...]
    is_triangulation: bool

    def triangulation(self) -> Triangulation:
        if not self.is_triangulation:
            raise InputError("subdivision is not simplicial")
        return Triangulation(self.config, self.cells)


def _integer_weights(weights) -> list[int]:
    fracs = [Fraction(w) for w in weights]
    denom = lcm(*(f.denominator for f in fracs)) if fracs else 1
    return [int(f * denom) for f in fracs]


def triangulation_from_weights(config: PointConfig, weights) -> Subdivision:
    """The regular subdivision induced by lifting each point by its weight.

    Cells collect every label whose lift lies on the corresponding lower
    hull facet, so flat lifts return coarse cells; `is_triangulation`
    flags whether all cells are simplices.
    """
    if len(weights) != len(config):
        raise InputError(f"{len(weights)} weights for {len(config)} points")
    w = _integer_weights(weights)
    lifted = [p + (wi,) for p, wi in zip(config.points, w)]
    vertical = (0,) * config.ambient + (1,)
    equations, facets = cone_hrep(lifted + [vertical], config.ambient + 1)
    if equations:
        raise InternalConsistencyError("lifted cone of a spanning configuration is degenerate")
    cells = []
    for f in facets:
        if f[-1] <= 0:
            continue
        cells.append(tuple(i for i, lp in enumerate(lifted) if pair(f, lp) == 0))
    cells = tuple(sorted(cells))
    simplicial = all(len(c) == config.ambient for c in cells)
    return Subdivision(config, tuple(w), cells, simplicial)


def _simplex_volume(config: PointConfig, labels) -> int:
    return abs(determinant([config.points[i] for i in labels]))


def configuration_volume(config: PointConfig) -> int:
    """Lattice volume of Cone(points), via a generic regular triangulation."""
    rng = random.Random(0xD1CE)
    for _ in range(64):
        weights = [rng.randint(0, 10**9) for _ in range(len(config))]
        sub = triangulation_from_weights(config, weights)
        if sub.is_triangulation:
            return sum(_simplex_volume(config, c) for c in sub.cells)
    raise InternalConsistencyError("no generic lift found for volume computation")


def _in_simplicial_cone(point, gens) -> bool:
    sol = solve_rational([[g[i] for g in gens] for i in range(len(point))], point)
    return sol is not None and all(c >= 0 for c in sol)


def validate_triangulation(config: PointConfig, simplices) -> Triangulation:
    """Checks the three triangulation axioms exactly; raises on failure.

    (i) every simplex has rank-many linearly independent points of the
    configuration, (ii) pairwise intersections are common faces, and
    (iii) the simplices cover the cone of the configuration.
    """
    tri = Triangulation(config, tuple(tuple(s) for s in simplices))
    d = config.ambient
    for s in tri.simplices:
        if len(s) != d or any(i < 0 or i >= len(config) for i in s):
            raise VerificationError(
                "triangulation axiom: simplices need rank-many configuration points",
                f"simplex {s}",
            )
        if _simplex_volume(config, s) == 0:
            raise VerificationError(
                "triangulation axiom: simplex points must be affinely independent",
                f"simplex {s}",
            )
    for sa, sb in itertools.combinations(tri.simplices, 2):
        ga = [config.points[i] for i in sa]
        gb = [config.points[i] for i in sb]
        hrep_a = _cone_hrep_rows(ga, d)
        hrep_b = _cone_hrep_rows(gb, d)
        _, meet = extreme_rays(hrep_a + hrep_b, d)
        common = [config.points[i] for i in sorted(set(sa) & set(sb))]
        for g in meet:
            if not common or not _in_simplicial_cone(g, common):
                raise VerificationError(
                    "triangulation axiom: intersection of simplices must be a common face",
                    f"simplices {sa} and {sb}",
                )
    total = sum(_simplex_volume(config, s) for s in tri.simplices)
    if total != configuration_volume(config):
        raise VerificationError(
            "triangulation axiom: simplices must cover the configuration cone",
            f"covered volume {total}",
        )
    return tri


def _cone_hrep_rows(gens, dim):
    eqs, facets = cone_hrep(gens, dim)
    rows = list(facets)
    for e in eqs:
        rows.append(e)
        rows.append(tuple(-x for x in e))
    return rows


def _strict_system(config: PointConfig, tri: Triangulation) -> list[tuple[int, ...]]:
    """Integer rows B with {w : B w > 0} = weight vectors inducing tri.

    One row per (simplex, outside label): the lifted outside point must sit
    strictly above the affine span of the lifted simplex.
    """
    rows = set()
    t = len(config)
    for s in tri.simplices:
        gens = [config.points[i] for i in s]
        mat = [[g[i] for g in gens] for i in range(config.ambient)]
        for j in range(t):
            if j in s:
                continue
            coeffs = solve_rational(mat, config.points[j])
            if coeffs is None:
                raise InternalConsistencyError("simplex points stopped spanning")
            denom = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
            row = [0] * t
            row[j] = denom
            for i, c in zip(s, coeffs):
                row[i] -= int(c * denom)
            rows.add(primitive_vector(row))
    return sorted(rows)


def regularity_certificate(config: PointConfig, tri) -> tuple[int, ...] | None:
    """An exact weight vector inducing the triangulation, or None.

    The strict feasibility system is solved through the extreme rays of its
    closure; when feasible the certificate is normalized to nonnegative
    integers (the all-ones direction is lineality) and round-tripped.
    """
    tri = validate_triangulation(config, tri.simplices if isinstance(tri, Triangulation) else tri)
    rows = _strict_system(config, tri)
    t = len(config)
    if not rows:
        cert = tuple([0] * t)
    else:
        sol = feasible_interior(rows, t)
        if sol is None:
            return None
        denom = lcm(*(x.denominator for x in sol))
        s = [int(x * denom) for x in sol]
        # The all-ones direction is lineality (it lifts the hyperplane
        # functional), so shifting keeps the chamber and fixes signs.
        shift = max(0, -min(s))
        cert = tuple(x + shift for x in s)
        if not all(pair(b, cert) > 0 for b in rows):
            raise InternalConsistencyError("interior point fails its own strict system")
    check = triangulation_from_weights(config, cert)
    if not check.is_triangulation or check.cells != tri.simplices:
        raise InternalConsistencyError("certificate does not reproduce its triangulation")
    return cert


@dataclass(frozen=True)
class ChamberDescription:
    """Strict inequalities (weight space and character space) with a witness."""

    config: PointConfig
    weight_rows: tuple[tuple[int, ...], ...]
    certificate: tuple[int, ...]
    character_rows: tuple[tuple[int, ...], ...]

    def contains_weight(self, weights) -> bool:
        w = _integer_weights(weights)
        return all(pair(b, w) > 0 for b in self.weight_rows)


def chamber_of_triangulation(
    config: PointConfig, tri: Triangulation, certificate=None
) -> ChamberDescription:
    """The GKZ chamber of a regular triangulation.

    Weight-space rows cut the open cone of all weights inducing the
    triangulation; their images under the degree map of the configuration
    subgroup describe the same chamber in character space.  A known
    certificate may be passed to skip the feasibility solve.
    """
    if certificate is not None:
        cert = tuple(int(x) for x in certificate)
        check = triangulation_from_weights(config, cert)
        if not (check.is_triangulation and check.cells == Triangulation(config, tri.simplices).simplices):
            raise InputError("supplied certificate does not induce the triangulation")
    else:
        cert = regularity_certificate(config, tri)
    if cert is None:
        raise InputError("triangulation is not regular; it has no chamber")
    rows = _strict_system(config, tri)
    # Degree map: free rows of the cokernel presentation of the point matrix.
    from .intlinalg import cokernel

    pres = cokernel(as_int_matrix(config.points))
    free = pres.free_rows().tolist()
    char_rows = set()
    for b in rows:
        sol = solve_rational([[row[i] for row in free] for i in range(len(b))], b)
        if sol is None:
            raise InternalConsistencyError("chamber row does not descend to character space")
        denom = lcm(*(c.denominator for c in sol)) if sol else 1
        char_rows.add(primitive_vector([int(c * denom) for c in sol]))
    return ChamberDescription(config, tuple(rows), cert, tuple(sorted(char_rows)))


def triangulation_of_bundle_fan(fan: Fan, config: PointConfig) -> Triangulation:
    """Reads a simplicial fan supported on Cone(config) as a triangulation.

    Every ray must be a configuration point and the supports must agree;
    configuration points that are not rays end up as unused labels.
    """
    if not fan.is_simplicial():
        raise InputError("bundle fan must be simplicial to induce a triangulation")
    label = {p: i for i, p in enumerate(config.points)}
    ray_labels = []
    for r in fan.rays:
        if r not in label:
            raise InputError(f"fan ray {r} is not a configuration point")
        ray_labels.append(label[r])
    if fan.support_cone() != config.cone():
        raise InputError("fan support differs from the configuration cone")
    simplices = [tuple(sorted(ray_labels[i] for i in c)) for c in fan.maximal_cones]
    return validate_triangulation(config, simplices)
