"""Exact rational linear feasibility (phase-one simplex, Bland's rule).

Used to find interior points of open polyhedral cones given by strict
integer inequalities.  Everything runs over Fraction, so feasibility
decisions are exact.
"""

from __future__ import annotations

from fractions import Fraction


def feasible_interior(rows, dim):
    """A rational x with row . x >= 1 for every row, or None.

    Since the rows define an open cone (row . x > 0 is scale invariant),
    this decides strict feasibility exactly.
    """
    if not rows:
        return [Fraction(0)] * dim
    # Free variables x = u - v with u, v >= 0; slacks s >= 0:
    #   row . u - row . v - s = 1.
    # Phase-one: minimize the sum of artificials.
    m = len(rows)
    n = 2 * dim + m
    a = []
    b = []
    for i, row in enumerate(rows):
        r = [Fraction(x) for x in row] + [Fraction(-x) for x in row] + [Fraction(0)] * m
        r[2 * dim + i] = Fraction(-1)
        a.append(r)
        b.append(Fraction(1))
    return _phase_one(a, b, n, dim)


def _phase_one(a, b, n, dim):
    m = len(a)
    # Tableau with artificial variables n .. n+m-1 forming the initial basis.
    tableau = [row[:] + [Fraction(0)] * m + [b[i]] for i, row in enumerate(a)]
    for i in range(m):
        tableau[i][n + i] = Fraction(1)
    basis = list(range(n, n + m))
    # Objective: minimize sum of artificials; reduced costs start as the
    # negated column sums of the constraint rows.
    cost = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= tableau[i][j]
    for k in range(m):
        # Artificials carry objective coefficient one, so their reduced
        # cost starts at zero (they are basic).
        cost[n + k] += 1

    total = n + m
    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tableau[i][enter] > 0:
                ratio = tableau[i][total] / tableau[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # Unbounded phase-one objective cannot happen (bounded below by 0).
            return None
        _pivot(tableau, cost, basis, leave, enter, total)

    if -cost[total] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][total]
    return [x[j] - x[dim + j] for j in range(dim)]


def _pivot(tableau, cost, basis, leave, enter, total):
    piv = tableau[leave][enter]
    if piv != 1:
        tableau[leave] = [v / piv for v in tableau[leave]]
    pivot_row = tableau[leave]
    for i in range(len(tableau)):
        if i != leave and tableau[i][enter] != 0:
            f = tableau[i][enter]
            tableau[i] = [
                v - f * w if w else v for v, w in zip(tableau[i], pivot_row)
            ]
    f = cost[enter]
    if f != 0:
        for j in range(total + 1):
            w = pivot_row[j]
            if w:
                cost[j] -= f * w
    basis[leave] = enter
