"""Torus subgroups of a coordinate torus through their character data.

A subgroup S of G_m^t is stored by a presentation of its character group
(the cokernel of the map attached to a point configuration) together with
the degree of every coordinate.  All checks here are degree computations;
no group schemes appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .intlinalg import (
    AbelianPresentation,
    as_int_matrix,
    cokernel,
    determinant,
    solve_integer,
    solve_rational,
)


@dataclass(frozen=True)
class Character:
    """An element of Z^free + sum Z/d_j with residues reduced to [0, d_j)."""

    free: tuple[int, ...]
    torsion: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "torsion", tuple(r % d for r, d in zip(self.torsion, self.moduli))
        )

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
            self.moduli,
        )

    def __neg__(self) -> "Character":
        return Character(
            tuple(-a for a in self.free), tuple(-a for a in self.torsion), self.moduli
        )

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def scale(self, k: int) -> "Character":
        return Character(
            tuple(k * a for a in self.free), tuple(k * a for a in self.torsion), self.moduli
        )

    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.free) and all(r == 0 for r in self.torsion)

    def free_is_trivial(self) -> bool:
        return all(a == 0 for a in self.free)

    def _check(self, other):
        if self.moduli != other.moduli or len(self.free) != len(other.free):
            raise InputError("characters live in different groups")


@dataclass(frozen=True)
class TorusSubgroupData:
    """A subgroup of G_m^t with per-coordinate character degrees."""

    presentation: AbelianPresentation
    coordinate_degrees: tuple[Character, ...]

    @property
    def num_coordinates(self) -> int:
        return self.presentation.ambient

    @property
    def rank(self) -> int:
        return self.presentation.free_rank

    def character_of(self, vector) -> Character:
        free, tors = self.presentation.project(vector)
        return Character(free, tors, self.presentation.torsion_orders)

    def zero_character(self) -> Character:
        return Character(
            (0,) * self.presentation.free_rank,
            (0,) * len(self.presentation.torsion_orders),
            self.presentation.torsion_orders,
        )

    def degree_matrix_free(self) -> list[list[int]]:
        """Free parts of the coordinate degrees, one row per free generator."""
        f = self.presentation.free_rank
        return [
            [deg.free[i] for deg in self.coordinate_degrees] for i in range(f)
        ]

    def same_subgroup(self, other: "TorusSubgroupData") -> bool:
        return self.presentation.same_quotient(other.presentation)


def torus_subgroup(points) -> TorusSubgroupData:
    """The subgroup S attached to a point configuration.

    Characters of S form the cokernel of m -> (<v_i, m>)_i; the degree of
    coordinate i is the class of the i-th basis vector.
    """
    mat = as_int_matrix([tuple(int(x) for x in p) for p in points])
    pres = cokernel(mat)
    t = mat.shape[0]
    degrees = []
    for i in range(t):
        e = [1 if j == i else 0 for j in range(t)]
        free, tors = pres.project(e)
        degrees.append(Character(free, tors, pres.torsion_orders))
    return TorusSubgroupData(pres, tuple(degrees))


def points_of_subgroup(subgroup: TorusSubgroupData) -> list[tuple[int, ...]]:
    """The point configuration recovered from a subgroup.

    Columns of the canonical (HNF) basis of the kernel lattice of the
    degree projection, one point per coordinate of the ambient torus.
    """
    basis = subgroup.presentation.kernel_hnf()
    t = subgroup.presentation.ambient
    if not basis:
        return [() for _ in range(t)]
    return [tuple(row[i] for row in basis) for i in range(t)]


def is_quasi_calabi_yau(subgroup: TorusSubgroupData) -> bool:
    """True when the coordinate degrees sum to a torsion character."""
    total = subgroup.zero_character()
    for deg in subgroup.coordinate_degrees:
        total = total + deg
    return total.free_is_trivial()


def calabi_yau_vector(points):
    """A dual vector pairing to one with every point, or None.

    Existence is the Calabi-Yau condition on the configuration; for slice
    configurations of a Gorenstein cone the degree element works.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    sol = solve_integer(as_int_matrix(pts), [1] * len(pts))
    if sol is None:
        return None
    return tuple(int(x) for x in sol)


def divisor_character(subgroup: TorusSubgroupData, coefficients) -> Character:
    """The character sum a_rho * deg(x_rho) attached to divisor coefficients."""
    coeffs = [int(a) for a in coefficients]
    if len(coeffs) != subgroup.num_coordinates:
        raise InputError(
            f"{len(coeffs)} divisor coefficients for {subgroup.num_coordinates} coordinates"
        )
    total = subgroup.zero_character()
    for a, deg in zip(coeffs, subgroup.coordinate_degrees):
        total = total + deg.scale(a)
    return total


def unimodular_equivalence(points_a, points_b):
    """A unimodular matrix W with W a_i = b_i for all i, or None.

    The match is in order: point i of the first configuration maps to
    point i of the second.  The certificate is explicit so failures are
    diagnosable.
    """
    a = [tuple(int(x) for x in p) for p in points_a]
    b = [tuple(int(x) for x in p) for p in points_b]
    if len(a) != len(b) or not a:
        return None
    d = len(a[0])
    if len(b[0]) != d:
        return None
    rows = []
    rhs = []
    for pa, pb in zip(a, b):
        for i in range(d):
            # Row of unknowns W[i][0..d): sum_j W[i][j] pa[j] = pb[i].
            row = [0] * (d * d)
            for j in range(d):
                row[i * d + j] = pa[j]
            rows.append(row)
            rhs.append(pb[i])
    sol = solve_rational(rows, rhs)
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    w = [[int(sol[i * d + j]) for j in range(d)] for i in range(d)]
    if abs(determinant(w)) != 1:
        return None
    for pa, pb in zip(a, b):
        if tuple(sum(w[i][j] * pa[j] for j in range(d)) for i in range(d)) != pb:
            return None
    return w
