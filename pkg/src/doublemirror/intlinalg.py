"""Exact integer linear algebra: normal forms, kernels, cokernels, solving.

All routines work over arbitrary-precision Python ints carried in numpy
arrays of dtype=object.  Nothing here ever touches floating point; fixed
width integer dtypes are rejected on input so overflow cannot occur
silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np


def as_int_matrix(entries) -> np.ndarray:
    """Coerces input to a 2-d numpy object array of Python ints.

    Accepts nested sequences or numpy arrays.  Raises on ragged input or
    non-integer entries.
    """
    if isinstance(entries, np.ndarray) and entries.dtype == object and entries.ndim == 2:
        rows = entries.tolist()
    else:
        rows = [list(row) for row in entries]
    if not rows:
        return np.empty((0, 0), dtype=object)
    width = len(rows[0])
    out = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError("ragged rows in integer matrix")
        for j, entry in enumerate(row):
            out[i, j] = _as_int(entry)
    return out


def as_int_vector(entries) -> np.ndarray:
    out = np.empty(len(entries), dtype=object)
    for i, entry in enumerate(entries):
        out[i] = _as_int(entry)
    return out


def _as_int(x) -> int:
    if isinstance(x, (bool, float)):
        raise TypeError(f"expected an integer entry, got {x!r}")
    if isinstance(x, (int, np.integer)):
        return int(x)
    # Fractions with denominator 1 appear when callers clear denominators.
    denom = getattr(x, "denominator", None)
    if denom == 1:
        return int(x.numerator)
    raise TypeError(f"expected an integer entry, got {x!r}")


def identity_matrix(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form with transforms.

    Returns (U, D, V) with U @ a @ V == D, U and V unimodular, D diagonal
    with nonnegative entries satisfying d_i | d_{i+1}.  Pivots are chosen
    by smallest nonzero absolute value to limit entry growth.
    """
    a = as_int_matrix(a)
    m, n = a.shape
    d = [list(row) for row in a.tolist()]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        drow, srow = d[dst], d[src]
        for k in range(n):
            drow[k] += q * srow[k]
        urow, usrc = u[dst], u[src]
        for k in range(m):
            urow[k] += q * usrc[k]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    def pivot_at(t):
        # Smallest nonzero |entry| in the trailing submatrix, moved to (t, t).
        best = None
        for i in range(t, m):
            for j in range(t, n):
                entry = d[i][j]
                if entry != 0 and (best is None or abs(entry) < best[0]):
                    best = (abs(entry), i, j)
        if best is None:
            return False
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        return True

    def clear_position(t):
        # One Euclid step per entry per round, re-pivoting on the global
        # smallest entry between rounds; this keeps quotients (and therefore
        # entry growth) small and strictly shrinks |d[t][t]| every round.
        while True:
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    if q != 0:
                        add_row(i, t, -q)
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    if q != 0:
                        add_col(j, t, -q)
            if all(d[i][t] == 0 for i in range(t + 1, m)) and all(
                d[t][j] == 0 for j in range(t + 1, n)
            ):
                return
            pivot_at(t)

    def divisibility_violation(t):
        p = d[t][t]
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % p != 0:
                    return i
        return None

    t = 0
    while t < min(m, n) and pivot_at(t):
        # Clearing can be re-entered: whenever the pivot fails to divide some
        # trailing entry, folding that row into row t shrinks the pivot to a
        # gcd, so later pivots stay multiples of earlier ones.
        while True:
            clear_position(t)
            bad = divisibility_violation(t)
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1

    to_obj = lambda rows, r, c: as_int_matrix(rows) if r and c else np.empty((r, c), dtype=object)
    return to_obj(u, m, m), to_obj(d, m, n), to_obj(v, n, n)


def hermite_normal_form(a) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular and U @ a == H, where H is in row
    echelon form with positive pivots and entries above each pivot reduced
    to [0, pivot).  Zero rows sit at the bottom.
    """
    a = as_int_matrix(a)
    m, n = a.shape
    h = [list(row) for row in a.tolist()]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def add_row(dst, src, q):
        hd, hs = h[dst], h[src]
        for k in range(n):
            hd[k] += q * hs[k]
        ud, us = u[dst], u[src]
        for k in range(m):
            ud[k] += q * us[k]

    row = 0
    for col in range(n):
        # Euclid on the column below `row` until a single nonzero remains.
        while True:
            pivots = [i for i in range(row, m) if h[i][col] != 0]
            if not pivots:
                break
            i0 = min(pivots, key=lambda i: abs(h[i][col]))
            if i0 != row:
                h[row], h[i0] = h[i0], h[row]
                u[row], u[i0] = u[i0], u[row]
            done = True
            for i in range(row + 1, m):
                if h[i][col] != 0:
                    add_row(i, row, -(h[i][col] // h[row][col]))
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if row < m and h[row][col] != 0:
            if h[row][col] < 0:
                h[row] = [-x for x in h[row]]
                u[row] = [-x for x in u[row]]
            for i in range(row):
                if h[i][col] != 0:
                    add_row(i, row, -(h[i][col] // h[row][col]))
            row += 1
            if row == m:
                break

    hout = as_int_matrix(h) if m and n else np.empty((m, n), dtype=object)
    return hout, as_int_matrix(u)


def rank(a) -> int:
    a = as_int_matrix(a)
    if 0 in a.shape:
        return 0
    h, _ = hermite_normal_form(a)
    return sum(1 for row in h.tolist() if any(x != 0 for x in row))


def determinant(a) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    a = as_int_matrix(a)
    m, n = a.shape
    if m != n:
        raise ValueError("determinant requires a square matrix")
    if m == 0:
        return 1
    mat = [list(row) for row in a.tolist()]
    sign = 1
    prev = 1
    for k in range(m - 1):
        if mat[k][k] == 0:
            for i in range(k + 1, m):
                if mat[i][k] != 0:
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[m - 1][m - 1]


def is_unimodular(a) -> bool:
    return abs(determinant(a)) == 1


def kernel_basis(a) -> np.ndarray:
    """Basis of the right kernel lattice {x : a @ x = 0}, as matrix columns.

    The returned lattice is saturated: it is the full group of integer
    solutions, not merely a finite-index sublattice.
    """
    a = as_int_matrix(a)
    m, n = a.shape
    _, d, v = smith_normal_form(a)
    r = sum(1 for i in range(min(m, n)) if d[i, i] != 0)
    if n - r == 0:
        return np.empty((n, 0), dtype=object)
    return v[:, r:]


def solve_integer(a, b):
    """Solves a @ x = b over the integers; returns None when no solution exists.

    Raises ValueError when len(b) does not match the row count of a.
    """
    a = as_int_matrix(a)
    b = as_int_vector(b)
    m, n = a.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    u, d, v = smith_normal_form(a)
    c = u @ b
    y = [0] * n
    for i in range(min(m, n)):
        di = d[i, i]
        if di != 0:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
        elif c[i] != 0:
            return None
    for i in range(min(m, n), m):
        if c[i] != 0:
            return None
    return v @ as_int_vector(y)


@dataclass(frozen=True)
class AbelianPresentation:
    """A finitely generated abelian quotient of Z^ambient.

    The quotient is Z^free_rank + Z/d_1 + ... + Z/d_s with the d_j forming
    a divisibility chain, presented by an explicit surjection: `projection`
    holds the free rows followed by the torsion rows, and torsion residues
    are read modulo `torsion_orders`.
    """

    ambient: int
    free_rank: int
    torsion_orders: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]

    def project(self, vector) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Image of an ambient integer vector: (free part, reduced residues)."""
        vec = [int(x) for x in vector]
        if len(vec) != self.ambient:
            raise ValueError(f"vector length {len(vec)} != ambient rank {self.ambient}")
        rows = self.projection
        free = tuple(sum(r * x for r, x in zip(rows[i], vec)) for i in range(self.free_rank))
        tors = tuple(
            sum(r * x for r, x in zip(rows[self.free_rank + j], vec)) % d
            for j, d in enumerate(self.torsion_orders)
        )
        return free, tors

    def projection_matrix(self) -> np.ndarray:
        return as_int_matrix(self.projection) if self.projection else np.empty(
            (0, self.ambient), dtype=object
        )

    def free_rows(self) -> np.ndarray:
        mat = self.projection_matrix()
        return mat[: self.free_rank]

    def kernel_hnf(self) -> tuple[tuple[int, ...], ...]:
        """Canonical (HNF) basis of the kernel lattice of the projection.

        Two presentations define the same quotient map of Z^ambient exactly
        when these bases agree, so this is the canonical equality key.
        """
        f = self.free_rank
        s = len(self.torsion_orders)
        n = self.ambient
        if f + s == 0:
            basis = identity_matrix(n)
            h, _ = hermite_normal_form(basis)
            return tuple(tuple(row) for row in h.tolist())
        # Kernel of x -> (F x, T x mod d): integer solutions of
        # F x = 0, T x + diag(d) y = 0, projected to the x block.
        mat = np.zeros((f + s, n + s), dtype=object)
        proj = self.projection_matrix()
        mat[:, :n] = proj
        for j, d in enumerate(self.torsion_orders):
            mat[f + j, n + j] = d
        ker = kernel_basis(mat)
        xpart = ker[:n, :].T
        h, _ = hermite_normal_form(xpart)
        rows = [tuple(row) for row in h.tolist() if any(x != 0 for x in row)]
        return tuple(rows)

    def canonical(self) -> "AbelianPresentation":
        """Deterministic presentation depending only on the quotient map."""
        ker = self.kernel_hnf()
        if not ker:
            mat = np.zeros((self.ambient, 0), dtype=object)
        else:
            mat = as_int_matrix(ker).T
        return cokernel(mat)

    def same_quotient(self, other: "AbelianPresentation") -> bool:
        return (
            self.ambient == other.ambient
            and self.free_rank == other.free_rank
            and self.torsion_orders == other.torsion_orders
            and self.kernel_hnf() == other.kernel_hnf()
        )


def cokernel(a) -> AbelianPresentation:
    """Presentation of Z^rows / (column span of a)."""
    a = as_int_matrix(a)
    m, n = a.shape
    if m == 0:
        return AbelianPresentation(0, 0, (), ())
    u, d, _ = smith_normal_form(a)
    diag = [d[i, i] for i in range(min(m, n))]
    free_idx = [i for i in range(m) if i >= len(diag) or diag[i] == 0]
    tors_idx = [i for i in range(len(diag)) if diag[i] > 1]
    urows = u.tolist()

    def signed(row):
        for x in row:
            if x != 0:
                return tuple(row) if x > 0 else tuple(-y for y in row)
        return tuple(row)

    rows = [signed(urows[i]) for i in free_idx] + [signed(urows[i]) for i in tors_idx]
    return AbelianPresentation(
        ambient=m,
        free_rank=len(free_idx),
        torsion_orders=tuple(diag[i] for i in tors_idx),
        projection=tuple(rows),
    )


def solve_rational(a, b):
    """Solves a @ x = b over the rationals; returns Fractions or None.

    Plain Gauss-Jordan over Fraction; inputs may mix ints and Fractions.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return x


def content(vector) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in vector:
        g = gcd(g, int(x))
    return g


def primitive_vector(vector) -> tuple[int, ...]:
    """Divides out the content; the zero vector is returned unchanged."""
    vec = [int(x) for x in vector]
    g = content(vec)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)
