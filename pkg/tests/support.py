"""Shared helpers and oracles for the test suite.

Everything here is deliberately independent of the library internals:
rational Gaussian elimination, Caratheodory membership checks, and seeded
searches that build small corpora of reflexive polytopes and cones.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from doublemirror.polytopes import LatticePolytope, RationalCone, hull


def rational_solve(matrix, rhs):
    """Solves matrix @ x = rhs over the rationals; None when inconsistent."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(m):
            if i != row and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if a[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = a[r][n]
    return x


def point_in_hull(point, points):
    """Caratheodory oracle: is `point` a convex combination of `points`?"""
    pts = list(points)
    d = len(point)
    for size in range(1, d + 2):
        for subset in itertools.combinations(pts, size):
            rows = [[Fraction(p[i]) for p in subset] for i in range(d)]
            rows.append([Fraction(1)] * size)
            sol = rational_solve(rows, [Fraction(c) for c in point] + [Fraction(1)])
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


def brute_force_vertices(points):
    """A point is a vertex iff it is not in the hull of the others."""
    pts = sorted(set(tuple(p) for p in points))
    return [p for p in pts if not point_in_hull(p, [q for q in pts if q != p])]


def box_scan_lattice_points(polytope: LatticePolytope):
    """Independent membership filter over the vertex bounding box."""
    lows = [min(v[i] for v in polytope.vertices) for i in range(polytope.ambient)]
    highs = [max(v[i] for v in polytope.vertices) for i in range(polytope.ambient)]
    out = []
    for cand in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        if point_in_hull(cand, polytope.vertices):
            out.append(cand)
    return out


def random_reflexive_polytopes(dim, count, seed):
    """Seeded search for distinct reflexive polytopes of the given dimension."""
    rng = random.Random(seed)
    found = []
    seen = set()
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200000:
            raise RuntimeError("reflexive search budget exceeded")
        npts = rng.randint(dim + 1, dim + 4)
        pts = [tuple(rng.choice((-2, -1, -1, 0, 1, 1, 2)) for _ in range(dim)) for _ in range(npts)]
        try:
            p = hull(pts)
        except Exception:
            continue
        if not p.is_full_dimensional():
            continue
        if not p.interior_contains((0,) * dim):
            continue
        if not p.is_reflexive():
            continue
        if p.vertices in seen:
            continue
        seen.add(p.vertices)
        found.append(p)
    return found


def all_triangulations(config):
    """Exhaustive triangulation enumeration (test oracle, small configs only).

    Searches all pairwise-face-compatible sets of nondegenerate simplices
    whose volumes add up to the configuration cone volume.
    """
    import functools

    from doublemirror.intlinalg import determinant, solve_rational
    from doublemirror.polytopes import cone_hrep, extreme_rays
    from doublemirror.triangulations import configuration_volume

    d = config.ambient
    t = len(config)
    target = configuration_volume(config)
    cands = [
        s
        for s in itertools.combinations(range(t), d)
        if determinant([config.points[i] for i in s]) != 0
    ]
    vols = {s: abs(determinant([config.points[i] for i in s])) for s in cands}

    def hrep_rows(gens):
        eqs, facets = cone_hrep(gens, d)
        rows = list(facets)
        for e in eqs:
            rows.append(e)
            rows.append(tuple(-x for x in e))
        return rows

    def in_simplex_cone(pt, gens):
        sol = solve_rational([[g[i] for g in gens] for i in range(d)], pt)
        return sol is not None and all(c >= 0 for c in sol)

    @functools.lru_cache(maxsize=None)
    def compatible(a, b):
        ga = [config.points[i] for i in a]
        gb = [config.points[i] for i in b]
        _, meet = extreme_rays(hrep_rows(ga) + hrep_rows(gb), d)
        common = [config.points[i] for i in sorted(set(a) & set(b))]
        return all(common and in_simplex_cone(g, common) for g in meet)

    results = []

    def dfs(start, chosen, vol):
        if vol == target:
            results.append(tuple(chosen))
            return
        for k in range(start, len(cands)):
            s = cands[k]
            if vol + vols[s] > target:
                continue
            if all(compatible(s, c) for c in chosen):
                chosen.append(s)
                dfs(k + 1, chosen, vol + vols[s])
                chosen.pop()

    dfs(0, [], 0)
    return results


NESTED_TRIANGLES = [(0, 0, 1), (4, 0, 1), (0, 4, 1), (1, 1, 1), (2, 1, 1), (1, 2, 1)]

FIG_TRIANGLE = [(0, 0), (1, 1), (-1, 1)]
FIG_SEGMENT = [(0, 0), (0, -1)]
FIG_BASE = [(0, 1), (0, -1)]
FIG_ALT = [(0, 0), (0, 0)]


def corpus_nef_partitions():
    """Hand-built nef partitions across lengths one to three, dims one to three."""
    from doublemirror.nefpartitions import validate_nef_partition

    entries = []
    square = hull([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    entries.append(validate_nef_partition([square], [(0, 0)]))
    p2 = hull([(1, 0), (0, 1), (-1, -1)])
    entries.append(validate_nef_partition([p2], [(0, 0)]))
    seg1 = hull([(-1,), (1,)])
    entries.append(validate_nef_partition([seg1], [(0,)]))

    tri = hull(FIG_TRIANGLE)
    seg = hull(FIG_SEGMENT)
    entries.append(validate_nef_partition([tri, seg], FIG_BASE))
    entries.append(validate_nef_partition([tri, seg], FIG_ALT))

    h1 = hull([(-1, 0), (1, 0)])
    v1 = hull([(0, -1), (0, 1)])
    entries.append(validate_nef_partition([h1, v1], [(0, 0), (0, 0)]))

    e1 = hull([(-1, 0, 0), (1, 0, 0)])
    e2 = hull([(0, -1, 0), (0, 1, 0)])
    e3 = hull([(0, 0, -1), (0, 0, 1)])
    entries.append(validate_nef_partition([e1, e2, e3], [(0, 0, 0)] * 3))

    s2 = hull([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)])
    s2m = s2.translate((-1, -1, -1))
    entries.append(validate_nef_partition([s2, s2m], [(1, 0, 0), (-1, 0, 0)]))
    entries.append(validate_nef_partition([s2, s2m], [(0, 1, 0), (0, -1, 0)]))

    tri3 = hull([(0, 0, 0), (1, 1, 0), (-1, 1, 0)])
    seg3 = hull([(0, 0, 0), (0, -1, 0)])
    z3 = hull([(0, 0, 1), (0, 0, -1)])
    entries.append(
        validate_nef_partition([tri3, seg3, z3], [(0, 1, 0), (0, -1, 0), (0, 0, 0)])
    )

    for p in random_reflexive_polytopes(2, 4, seed=777):
        entries.append(validate_nef_partition([p], [(0, 0)]))
    return entries


def corpus_double_mirror_inputs():
    """Inputs with two genuinely different base-point systems, plus one trivial."""
    from doublemirror.pipeline import DoubleMirrorInput

    entries = [
        DoubleMirrorInput.from_vertices([FIG_TRIANGLE, FIG_SEGMENT], FIG_BASE, FIG_ALT),
        DoubleMirrorInput.from_vertices(
            [
                [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)],
                [(-1, -1, -1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)],
            ],
            [(1, 0, 0), (-1, 0, 0)],
            [(0, 1, 0), (0, -1, 0)],
        ),
        DoubleMirrorInput.from_vertices(
            [
                [(0, 0, 0), (1, 1, 0), (-1, 1, 0)],
                [(0, 0, 0), (0, -1, 0)],
                [(0, 0, 1), (0, 0, -1)],
            ],
            [(0, 1, 0), (0, -1, 0), (0, 0, 0)],
            [(0, 0, 0), (0, 0, 0), (0, 0, 0)],
        ),
        DoubleMirrorInput.from_vertices(
            [FIG_TRIANGLE, FIG_SEGMENT], FIG_ALT, FIG_ALT
        ),
    ]
    return entries


def random_cones(count, seed, dims=(2, 3, 4)):
    """Seeded full-dimensional strictly convex cones (from shifted generators)."""
    rng = random.Random(seed)
    cones = []
    seen = set()
    while len(cones) < count:
        dim = rng.choice(dims)
        ngens = rng.randint(dim, dim + 3)
        gens = []
        for _ in range(ngens):
            # Last coordinate positive keeps the cone strictly convex.
            g = tuple(rng.randint(-3, 3) for _ in range(dim - 1)) + (rng.randint(1, 3),)
            gens.append(g)
        try:
            c = RationalCone.from_generators(gens)
        except Exception:
            continue
        if not c.is_full_dimensional():
            continue
        if c.generators in seen:
            continue
        seen.add(c.generators)
        cones.append(c)
    return cones
