"""Exact rational simplex for linear programs in standard equality form.

Solves max/min of c.x subject to A x = b, x >= 0, entirely over
``fractions.Fraction``. Pivoting uses Bland's rule, so the method
terminates without cycling and runs bit-identically on every platform.
Speed is deliberately traded for determinism and auditability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SimplexResult:
    """Outcome of an exact LP solve.

    For ``infeasible`` problems, ``certificate`` holds Farkas multipliers
    y (one per original row) with y.A >= 0 componentwise and y.b < 0,
    proving emptiness exactly.
    """

    status: str
    objective: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None
    certificate: tuple[Fraction, ...] | None = None


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot_row = tableau[row]
    inv = ONE / pivot_row[col]
    tableau[row] = pivot_row = [x * inv for x in pivot_row]
    for r, other in enumerate(tableau):
        if r == row:
            continue
        factor = other[col]
        if factor != ZERO:
            tableau[r] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _bland_iterate(
    tableau: list[list[Fraction]], basis: list[int], ncols: int
) -> str:
    """Run simplex pivots until optimal or unbounded.

    The last tableau row is the reduced-cost row for a maximization; a
    positive entry marks an improving column. Entering variable: the
    smallest improving column index; leaving: minimum ratio, ties broken
    by the smallest basis variable index (Bland's rule).
    """
    m = len(tableau) - 1
    cost = tableau[m]
    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] > ZERO:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best: Fraction | None = None
        for i in range(m):
            coeff = tableau[i][enter]
            if coeff > ZERO:
                ratio = tableau[i][-1] / coeff
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tableau, basis, leave, enter)
        cost = tableau[m]


def solve_equality_form(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    objective: Sequence[Fraction],
    *,
    maximize: bool = True,
) -> SimplexResult:
    """Solve max (or min) objective.x subject to rows.x = rhs, x >= 0."""
    m = len(rows)
    n = len(objective)
    if any(len(r) != n for r in rows) or len(rhs) != m:
        raise ValueError("inconsistent LP dimensions")
    if m == 0:
        # Only x >= 0 remains; the optimum is 0 unless some coefficient
        # improves without bound.
        direction = 1 if maximize else -1
        for j in range(n):
            if direction * objective[j] > ZERO:
                return SimplexResult(UNBOUNDED)
        return SimplexResult(OPTIMAL, ZERO, tuple(ZERO for _ in range(n)))

    flipped = [rhs[i] < ZERO for i in range(m)]
    tableau: list[list[Fraction]] = []
    for i in range(m):
        sign = -ONE if flipped[i] else ONE
        row = [sign * Fraction(x) for x in rows[i]]
        art = [ZERO] * m
        art[i] = ONE
        tableau.append(row + art + [sign * Fraction(rhs[i])])
    basis = [n + i for i in range(m)]

    # Phase 1: maximize -(sum of artificials); feasible iff the optimum is 0.
    # The cost row stores reduced costs with -(objective value) on the right.
    cost = [ZERO] * (n + m) + [ZERO]
    for i in range(m):
        for j in range(n):
            cost[j] += tableau[i][j]
        cost[-1] += tableau[i][-1]
    tableau.append(cost)
    status = _bland_iterate(tableau, basis, n + m)
    assert status == OPTIMAL  # phase 1 is bounded above by 0
    if tableau[m][-1] > ZERO:
        # Farkas: y_i = -1 - (phase-1 reduced cost of artificial i), then
        # undo the row sign flips so the certificate refers to the input rows.
        y = []
        for i in range(m):
            value = -ONE - tableau[m][n + i]
            y.append(-value if flipped[i] else value)
        return SimplexResult(INFEASIBLE, certificate=tuple(y))

    # Drive artificials out of the basis; rows where that is impossible
    # are redundant (all-zero) and get dropped.
    drop: list[int] = []
    for i in range(m):
        if basis[i] < n:
            continue
        enter = next((j for j in range(n) if tableau[i][j] != ZERO), -1)
        if enter >= 0:
            _pivot(tableau, basis, i, enter)
        else:
            drop.append(i)
    for i in reversed(drop):
        del tableau[i]
        del basis[i]
    rows_left = len(basis)

    # Phase 2: real objective on the artificial-free tableau.
    direction = ONE if maximize else -ONE
    body = [row[:n] + [row[-1]] for row in tableau[:rows_left]]
    cost = [direction * Fraction(c) for c in objective] + [ZERO]
    for i in range(rows_left):
        factor = cost[basis[i]]
        if factor != ZERO:
            cost = [a - factor * b for a, b in zip(cost, body[i])]
    body.append(cost)
    status = _bland_iterate(body, basis, n)
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED)
    solution = [ZERO] * n
    for i in range(rows_left):
        solution[basis[i]] = body[i][-1]
    value = direction * -ONE * body[rows_left][-1]
    # The cost row accumulates -(objective value) under this sign convention.
    return SimplexResult(OPTIMAL, value, tuple(solution))
