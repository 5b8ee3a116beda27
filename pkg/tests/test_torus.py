from __future__ import annotations

import random

import pytest

from doublemirror.errors import InputError
from doublemirror.intlinalg import as_int_matrix, cokernel
from doublemirror.torus import (
    Character,
    TorusSubgroupData,
    calabi_yau_vector,
    divisor_character,
    is_quasi_calabi_yau,
    points_of_subgroup,
    torus_subgroup,
    unimodular_equivalence,
)
from support import random_reflexive_polytopes

P112 = [(1, 1), (-1, 1), (0, -1)]
P1XP1 = [(1, 0), (-1, 0), (0, 1), (0, -1)]


def degree_rows(subgroup):
    return [tuple(deg.free) for deg in subgroup.coordinate_degrees]


def test_weighted_projective_degrees():
    s = torus_subgroup(P112)
    assert s.rank == 1
    assert s.presentation.torsion_orders == ()
    degrees = [deg.free[0] for deg in s.coordinate_degrees]
    assert degrees in ([1, 1, 2], [-1, -1, -2])


def test_product_of_lines_degrees():
    s = torus_subgroup(P1XP1)
    assert s.rank == 2
    rows = s.degree_matrix_free()
    assert sorted(tuple(r) for r in rows) == [(0, 0, 1, 1), (1, 1, 0, 0)]


def test_standard_basis_gives_trivial_subgroup():
    s = torus_subgroup([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert s.rank == 0
    assert s.presentation.torsion_orders == ()


def test_points_of_diagonal_subgroup():
    # Diagonal G_m in G_m^3: degrees (1,1,1).
    pres = cokernel(as_int_matrix([(1, 0), (0, 1), (-1, -1)]))
    s = torus_subgroup([(1, 0), (0, 1), (-1, -1)])
    pts = points_of_subgroup(s)
    assert len(pts) == 3
    assert tuple(sum(col) for col in zip(*pts)) == (0, 0)
    from doublemirror.intlinalg import rank as irank

    assert irank(as_int_matrix(pts)) == 2
    assert pres.free_rank == 1


def test_points_of_trivial_subgroup():
    s = torus_subgroup([(1, 0), (0, 1)])
    assert points_of_subgroup(s) == [(1, 0), (0, 1)]


def test_subgroup_roundtrip_through_points():
    rng = random.Random(271828)
    done = 0
    while done < 20:
        t = rng.randint(3, 6)
        m = rng.randint(max(1, t - 3), t)
        mat = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(t)]
        pres = cokernel(as_int_matrix(mat))
        if pres.free_rank > 3:
            continue
        degrees = []
        for i in range(t):
            e = [1 if j == i else 0 for j in range(t)]
            free, tors = pres.project(e)
            degrees.append(Character(free, tors, pres.torsion_orders))
        s = TorusSubgroupData(pres, tuple(degrees))
        s2 = torus_subgroup(points_of_subgroup(s))
        assert s.same_subgroup(s2)
        done += 1


def test_points_roundtrip_unimodular():
    rng = random.Random(1618)
    done = 0
    while done < 20:
        t = rng.randint(3, 6)
        d = rng.randint(2, min(4, t))
        pts = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(t)]
        from doublemirror.intlinalg import rank as irank

        if irank(as_int_matrix(pts)) != d:
            continue
        recovered = points_of_subgroup(torus_subgroup(pts))
        w = unimodular_equivalence(pts, recovered)
        assert w is not None
        done += 1


def test_quasi_cy_balanced_pair():
    # Repeated point: the antidiagonal subgroup, degrees (1, -1).
    s = torus_subgroup([(1,), (1,)])
    assert [deg.free[0] for deg in s.coordinate_degrees] in ([1, -1], [-1, 1])
    assert is_quasi_calabi_yau(s)


def test_quasi_cy_projective_plane_fails():
    assert not is_quasi_calabi_yau(torus_subgroup([(1, 0), (0, 1), (-1, -1)]))


def test_quasi_cy_with_torsion_sum():
    # Degrees sum to a 2-torsion class: quasi-CY holds, CY fails.
    s = torus_subgroup([(2,)])
    assert s.presentation.torsion_orders == (2,)
    assert is_quasi_calabi_yau(s)
    assert calabi_yau_vector([(2,)]) is None


def test_cy_vector_box_configuration():
    assert calabi_yau_vector([(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)]) == (0, 0, 1)


def test_cy_vector_absent():
    assert calabi_yau_vector(P112) is None


def test_cy_implies_quasi_cy_on_gorenstein_slices():
    rng = random.Random(55)
    polys = random_reflexive_polytopes(2, 8, seed=21) + random_reflexive_polytopes(3, 4, seed=22)
    checked = 0
    for p in polys:
        points = [v + (1,) for v in p.lattice_points()]
        for _ in range(8):
            k = rng.randint(p.ambient + 1, len(points))
            sample = rng.sample(points, k)
            if calabi_yau_vector(sample) is None:
                continue
            assert is_quasi_calabi_yau(torus_subgroup(sample))
            checked += 1
    assert checked >= 50


def test_divisor_character_zero():
    s = torus_subgroup(P112)
    assert divisor_character(s, (0, 0, 0)).is_trivial()


def test_divisor_character_weighted_ray():
    s = torus_subgroup(P112)
    # The (0,-1) ray carries the weight-2 coordinate.
    c = divisor_character(s, (0, 0, 1))
    assert tuple(abs(x) for x in c.free) == (2,)


def test_divisor_character_bidegree():
    s = torus_subgroup(P1XP1)
    c = divisor_character(s, (1, 1, 0, 0))
    assert sorted(abs(x) for x in c.free) == [0, 2]


def test_divisor_character_additive():
    rng = random.Random(17)
    s = torus_subgroup(P1XP1)
    for _ in range(20):
        a = [rng.randint(-3, 3) for _ in range(4)]
        b = [rng.randint(-3, 3) for _ in range(4)]
        lhs = divisor_character(s, [x + y for x, y in zip(a, b)])
        rhs = divisor_character(s, a) + divisor_character(s, b)
        assert lhs == rhs


def test_divisor_character_length_mismatch():
    with pytest.raises(InputError):
        divisor_character(torus_subgroup(P112), (1, 2))


def test_unimodular_equivalence_certificate():
    pts = [(1, 0), (0, 1), (-1, -1), (2, 3)]
    w = [[2, 1], [1, 1]]
    image = [tuple(sum(w[i][j] * p[j] for j in range(2)) for i in range(2)) for p in pts]
    cert = unimodular_equivalence(pts, image)
    assert cert == w
    assert unimodular_equivalence(pts, [(5, 0), (0, 1), (-1, -1), (2, 3)]) is None
