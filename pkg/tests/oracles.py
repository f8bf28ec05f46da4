"""Independent oracles and generators used across the test suite.

Nothing here may call the double-description code or the simplex: the
whole point is to cross-check those implementations against slow,
obviously-correct enumeration.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from contextuality.polytope import has_model
from contextuality.scenario import Scenario, validate_scenario

ZERO = Fraction(0)
ONE = Fraction(1)


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a (possibly overdetermined) exact system with unique solution.

    Returns None when inconsistent or underdetermined.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    work = [list(rows[i]) + [rhs[i]] for i in range(m)]
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, m) if work[r][col] != ZERO), -1)
        if pivot < 0:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = ONE / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(m):
            if r != rank and work[r][col] != ZERO:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, m):
        if work[r][n] != ZERO:
            return None
    if rank < n:
        return None
    solution = [ZERO] * n
    for r, col in enumerate(pivots):
        solution[col] = work[r][n]
    return solution


def _matrix_rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    work = [list(r) for r in rows]
    n = len(work[0])
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != ZERO), -1)
        if pivot < 0:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = ONE / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != ZERO:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


def brute_force_model_vertices(scenario: Scenario) -> list[dict[str, Fraction]]:
    """Every extreme point of G(H), as the basic feasible solutions of the
    edge-equation system intersected with the nonnegative orthant."""
    n = scenario.size
    index = scenario.vertex_index
    rows: list[list[Fraction]] = []
    for edge in scenario.edges:
        row = [ZERO] * n
        for v in edge:
            row[index[v]] = ONE
        rows.append(row)
    rhs = [ONE] * len(rows)
    rank = _matrix_rank(rows)
    points: set[tuple[Fraction, ...]] = set()
    for support in itertools.combinations(range(n), rank):
        sub = [[row[j] for j in support] for row in rows]
        solved = _solve_square(sub, rhs)
        if solved is None:
            continue
        if any(x < ZERO for x in solved):
            continue
        full = [ZERO] * n
        for j, value in zip(support, solved):
            full[j] = value
        points.add(tuple(full))
    return [
        dict(zip(scenario.vertices, point)) for point in sorted(points)
    ]


def random_scenario(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 4,
    max_edge_size: int = 3,
    min_edge_size: int = 1,
    require_model: bool = True,
) -> Scenario:
    """A random valid scenario within the size caps; rejection-sampled so
    that G(H) is nonempty when requested."""
    while True:
        nv = rng.randint(2, max_vertices)
        labels = [chr(ord("a") + i) for i in range(nv)]
        ne = rng.randint(1, max_edges)
        edges = []
        for _ in range(ne):
            size = rng.randint(min_edge_size, min(max_edge_size, nv))
            edges.append(rng.sample(labels, size))
        covered = sorted({v for e in edges for v in e})
        if len(covered) < 2:
            continue
        scenario = validate_scenario(covered, edges, warn_subset_edges=False)
        if require_model and not has_model(scenario):
            continue
        return scenario


def deterministic_models_by_force(scenario: Scenario) -> list[dict[str, Fraction]]:
    """All 0/1 models, by exhausting every 0/1 assignment."""
    found = []
    for bits in itertools.product((ZERO, ONE), repeat=scenario.size):
        model = dict(zip(scenario.vertices, bits))
        if all(
            sum(model[v] for v in edge) == ONE for edge in scenario.edges
        ):
            found.append(model)
    found.sort(key=lambda m: tuple(m[v] for v in scenario.vertices))
    return found
