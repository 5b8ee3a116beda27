from __future__ import annotations

import random

import pytest

from doublemirror.errors import InputError
from doublemirror.fans import (
    Fan,
    bundle_fan,
    cox_data,
    is_complete_sample,
    normal_fan,
    polytope_divisor,
    simplicial_refinement,
    star_subdivision,
    validate_fan,
)
from doublemirror.polytopes import RationalCone, dual_cone, hull, pair

SQUARE = hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])
NABLA = hull([(0, -1), (2, 1), (-2, 1)])
P2_TRIANGLE = hull([(1, 0), (0, 1), (-1, -1)])
P1_FAN = Fan([(1,), (-1,)], [(0,), (1,)])


def test_normal_fan_square():
    fan = normal_fan(SQUARE)
    assert set(fan.rays) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(fan.maximal_cones) == 4
    validate_fan(fan)


def test_normal_fan_nabla():
    fan = normal_fan(NABLA)
    assert set(fan.rays) == {(1, 1), (-1, 1), (0, -1)}
    assert len(fan.maximal_cones) == 3
    validate_fan(fan)


def test_normal_fan_p2_triangle():
    fan = normal_fan(P2_TRIANGLE)
    assert len(fan.maximal_cones) == 3
    assert set(fan.rays) == {(-1, -1), (-1, 2), (2, -1)}
    # One facet normal per vertex pair, tight on the opposite vertex.
    for n, c in P2_TRIANGLE.facets:
        assert c == 1


def test_normal_fan_one_cone_per_vertex_and_complete():
    rng = random.Random(99)
    for poly in (SQUARE, NABLA, P2_TRIANGLE):
        fan = normal_fan(poly)
        assert len(fan.maximal_cones) == len(poly.vertices)
        assert is_complete_sample(fan, 1000, rng)


def test_cox_data_triangle():
    fan = normal_fan(P2_TRIANGLE)
    data = cox_data(fan)
    assert data.irrelevant_collections == ((0, 1, 2),)


def test_cox_data_square():
    fan = normal_fan(SQUARE)
    data = cox_data(fan)
    pairs = {frozenset(fan.rays[i] for i in coll) for coll in data.irrelevant_collections}
    assert pairs == {
        frozenset({(1, 0), (-1, 0)}),
        frozenset({(0, 1), (0, -1)}),
    }


def test_cox_data_single_ray():
    fan = Fan([(1, 0)], [(0,)])
    data = cox_data(fan)
    assert data.irrelevant_collections == ()
    assert data.cox_cones == ((0,),)


def test_bundle_fan_trivial_divisor():
    fan = bundle_fan(P1_FAN, [(0, 0)])
    assert set(fan.rays) == {(1, 0), (-1, 0), (0, 1)}
    assert len(fan.maximal_cones) == 2


def test_bundle_fan_lifting_formula():
    # Divisor -D with coefficients (2, 0) lifts the ray 1 to (1, 2).
    fan = bundle_fan(P1_FAN, [(-2, 0)])
    assert set(fan.rays) == {(1, 2), (-1, 0), (0, 1)}


def test_bundle_fan_coefficient_mismatch():
    with pytest.raises(InputError):
        bundle_fan(P1_FAN, [(1, 2, 3)])


def test_polytope_divisor_offsets():
    fan = normal_fan(SQUARE)
    assert polytope_divisor(fan, SQUARE) == (1, 1, 1, 1)


def test_bundle_fan_support_dual_is_cayley_cone():
    # Fig-style pair of triangles: bundle fan over the normal fan of their sum.
    part1 = hull([(0, 0), (1, 1), (-1, 1)])
    part2 = hull([(0, 0), (0, -1)])
    total = part1.minkowski(part2)
    fan = normal_fan(total)
    d1 = tuple(-a for a in polytope_divisor(fan, part1))
    d2 = tuple(-a for a in polytope_divisor(fan, part2))
    bf = bundle_fan(fan, [d1, d2])
    support = bf.support_cone()
    cayley_gens = [v + (1, 0) for v in part1.vertices] + [v + (0, 1) for v in part2.vertices]
    cayley = RationalCone.from_generators(cayley_gens)
    assert dual_cone(support) == cayley
    # Nef partition: all rays of the bundle fan sit at height one.
    deg_dual = (0, 0, 1, 1)
    for r in bf.rays:
        assert pair(r, deg_dual) == 1
    validate_fan(bf)


def test_star_subdivision_cone_over_square():
    rays = [(-1, -1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, 1)]
    fan = Fan(rays, [(0, 1, 2, 3)])
    assert not fan.is_simplicial()
    refined = simplicial_refinement(fan)
    assert refined.rays == fan.rays
    assert refined.is_simplicial()
    # The subdivision happens at the lexicographically first ray (-1,-1,1).
    idx = fan.rays.index((-1, -1, 1))
    assert len(refined.maximal_cones) == 2
    assert all(idx in c for c in refined.maximal_cones)
    validate_fan(refined)


def test_simplicial_refinement_fixes_nothing_when_simplicial():
    fan = normal_fan(P2_TRIANGLE)
    assert simplicial_refinement(fan) == fan


def test_refinement_cones_nest_in_input_cones():
    rays = [(-1, -1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, 1), (0, 0, -1)]
    fan = Fan(
        rays,
        [(0, 1, 2, 3), (0, 1, 4), (0, 2, 4), (1, 3, 4), (2, 3, 4)],
    )
    refined = simplicial_refinement(fan)
    assert refined.rays == fan.rays
    assert refined.is_simplicial()
    validate_fan(refined)
    # Every refined cone lies inside some input cone.
    from doublemirror.polytopes import cone_hrep

    for c in refined.maximal_cones:
        gens = refined.cone_rays(c)
        ok = False
        for big in fan.maximal_cones:
            eqs, facets = cone_hrep(fan.cone_rays(big), 3)
            if all(
                all(pair(e, g) == 0 for e in eqs) and all(pair(f, g) >= 0 for f in facets)
                for g in gens
            ):
                ok = True
                break
        assert ok


def test_fan_apply_unimodular():
    fan = normal_fan(SQUARE)
    sheared = fan.apply([[1, 1], [0, 1]])
    assert len(sheared.rays) == len(fan.rays)
    assert sheared.maximal_cones == fan.maximal_cones
