"""Exact geometry of the model polytope G(H) = {p >= 0 : every edge sums to 1}.

Membership, optimization (exact simplex), complete vertex enumeration
(double description), convex-hull membership for the classical set, and
the consistent-exclusivity bound over maximal orthogonality cliques.
Floating point never enters a decision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import linprog
from .errors import (
    BudgetExceededError,
    DomainMismatchError,
    NoDeterministicModelsError,
    UnknownVertexError,
)
from .scenario import Model, Scenario, enumerate_deterministic_models, orthogonality_pairs

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_VERTEX_BUDGET = 64
DEFAULT_CLIQUE_BUDGET = 100_000


@dataclass(frozen=True)
class LpResult:
    """Exact optimum of a weight sum over G(H), with a witness model.

    ``certificate`` carries Farkas multipliers (one per edge) proving
    G(H) empty when the status is infeasible.
    """

    status: str
    optimum: Fraction | None = None
    witness: Model | None = None
    certificate: tuple[Fraction, ...] | None = None


@dataclass(frozen=True)
class PolytopeVertexSet:
    """The extreme points of G(H); exhaustive when ``complete`` is set."""

    scenario: Scenario
    vertices: tuple[Model, ...]
    complete: bool


def edge_system(scenario: Scenario) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Incidence rows and all-ones right-hand side of the edge equations."""
    n = scenario.size
    index = scenario.vertex_index
    rows = []
    for edge in scenario.edges:
        row = [ZERO] * n
        for v in edge:
            row[index[v]] = ONE
        rows.append(row)
    return rows, [ONE] * len(rows)


def check_model_domain(scenario: Scenario, model: Mapping[str, Fraction]) -> None:
    if set(model) != scenario.vertex_set:
        missing = sorted(scenario.vertex_set - set(model))
        extra = sorted(set(model) - scenario.vertex_set)
        raise DomainMismatchError(
            "model domain does not match the vertex set",
            missing=missing,
            extra=extra,
        )


def is_model(scenario: Scenario, model: Mapping[str, Fraction]) -> bool:
    """True iff the weights lie in [0,1] and every edge sums to exactly 1."""
    check_model_domain(scenario, model)
    if any(w < ZERO or w > ONE for w in model.values()):
        return False
    for edge in scenario.edges:
        total = ZERO
        for v in edge:
            total += model[v]
        if total != ONE:
            return False
    return True


def optimize_weight(
    scenario: Scenario, subset: Iterable[str], direction: str
) -> LpResult:
    """Exact min or max of p(W) over G(H), with an optimal witness model."""
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    wanted = set(subset)
    unknown = sorted(wanted - scenario.vertex_set)
    if unknown:
        raise UnknownVertexError(
            f"subset mentions unknown vertices: {', '.join(unknown)}", labels=unknown
        )
    rows, rhs = edge_system(scenario)
    objective = [ONE if v in wanted else ZERO for v in scenario.vertices]
    result = linprog.solve_equality_form(
        rows, rhs, objective, maximize=(direction == "max")
    )
    if result.status != linprog.OPTIMAL:
        return LpResult(result.status, certificate=result.certificate)
    witness = dict(zip(scenario.vertices, result.solution))
    return LpResult(result.status, result.objective, witness)


def has_model(scenario: Scenario) -> bool:
    """True iff G(H) is nonempty (exact LP feasibility)."""
    rows, rhs = edge_system(scenario)
    zero_objective = [ZERO] * scenario.size
    result = linprog.solve_equality_form(rows, rhs, zero_objective)
    return result.status == linprog.OPTIMAL


def enumerate_model_vertices(
    scenario: Scenario, budget: int | None = None
) -> PolytopeVertexSet:
    """All extreme points of G(H) by double description over {p>=0, Ap=1}.

    The scenario size must stay within ``budget`` (default 64 vertices);
    larger inputs raise BudgetExceededError rather than approximating.
    """
    limit = DEFAULT_VERTEX_BUDGET if budget is None else budget
    if scenario.size > limit:
        raise BudgetExceededError(
            f"scenario has {scenario.size} vertices, budget is {limit}",
            size=scenario.size,
            budget=limit,
        )
    rows, rhs = edge_system(scenario)
    points = _polytope_vertices(rows, rhs, scenario.size)
    models = tuple(
        dict(zip(scenario.vertices, point)) for point in sorted(points)
    )
    return PolytopeVertexSet(scenario, models, complete=True)


def is_classical_model(scenario: Scenario, model: Mapping[str, Fraction]) -> bool:
    """True iff the model is a convex combination of deterministic models.

    Decided by exact LP feasibility of the mixture system. Raises
    NoDeterministicModelsError when D(H) is empty while the model exists.
    """
    check_model_domain(scenario, model)
    deterministic = enumerate_deterministic_models(scenario)
    if not deterministic:
        raise NoDeterministicModelsError(
            "scenario admits no deterministic model to mix"
        )
    # Columns are mixture weights; rows force the combination to hit the
    # model exactly and the weights to sum to 1.
    k = len(deterministic)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for v in scenario.vertices:
        rows.append([d[v] for d in deterministic])
        rhs.append(Fraction(model[v]))
    rows.append([ONE] * k)
    rhs.append(ONE)
    result = linprog.solve_equality_form(rows, rhs, [ZERO] * k)
    return result.status == linprog.OPTIMAL


def maximal_orthogonality_cliques(
    scenario: Scenario, budget: int | None = None
) -> list[tuple[str, ...]]:
    """Maximal cliques of the orthogonality relation (Bron-Kerbosch, pivoting)."""
    limit = DEFAULT_CLIQUE_BUDGET if budget is None else budget
    neighbours: dict[str, set[str]] = {v: set() for v in scenario.vertices}
    for u, v in orthogonality_pairs(scenario):
        neighbours[u].add(v)
        neighbours[v].add(u)
    cliques: list[tuple[str, ...]] = []

    def expand(current: list[str], candidates: set[str], excluded: set[str]) -> None:
        if not candidates and not excluded:
            if len(cliques) >= limit:
                raise BudgetExceededError(
                    f"more than {limit} maximal cliques", budget=limit
                )
            cliques.append(tuple(sorted(current)))
            return
        pivot = max(candidates | excluded, key=lambda u: len(neighbours[u] & candidates))
        for v in sorted(candidates - neighbours[pivot]):
            expand(current + [v], candidates & neighbours[v], excluded & neighbours[v])
            candidates.remove(v)
            excluded.add(v)

    expand([], set(scenario.vertices), set())
    return sorted(cliques)


def ce1_check(
    scenario: Scenario, model: Mapping[str, Fraction], budget: int | None = None
) -> bool:
    """Consistent exclusivity: p(S) <= 1 for every pairwise-orthogonal set S.

    It suffices to check maximal cliques of the orthogonality relation,
    since weights are nonnegative.
    """
    check_model_domain(scenario, model)
    for clique in maximal_orthogonality_cliques(scenario, budget):
        total = ZERO
        for v in clique:
            total += model[v]
        if total > ONE:
            return False
    return True


# ---------------------------------------------------------------------------
# Double description


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the null space of the row matrix, by exact RREF."""
    matrix = [list(r) for r in rows]
    pivot_cols: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = next(
            (r for r in range(rank, len(matrix)) if matrix[r][col] != ZERO), -1
        )
        if pivot_row < 0:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        inv = ONE / matrix[rank][col]
        matrix[rank] = [x * inv for x in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != ZERO:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        pivot_cols.append(col)
        rank += 1
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        vec = [ZERO] * ncols
        vec[free] = ONE
        for r, piv in enumerate(pivot_cols):
            vec[piv] = -matrix[r][free]
        basis.append(vec)
    return basis


def _normalize_ray(vec: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale by a positive rational so entries are coprime integers."""
    scale = ZERO
    for x in vec:
        if x != ZERO:
            scale = abs(x)
            break
    if scale == ZERO:
        return tuple(vec)
    scaled = [x / scale for x in vec]
    denominator = 1
    for x in scaled:
        denominator = denominator * x.denominator // gcd(denominator, x.denominator)
    ints = [x * denominator for x in scaled]
    common = 0
    for x in ints:
        common = gcd(common, x.numerator)
    if common > 1:
        ints = [x / common for x in ints]
    return tuple(ints)


def _polytope_vertices(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], n: int
) -> list[tuple[Fraction, ...]]:
    """Extreme points of {x in R^n : x >= 0, rows.x = rhs}.

    Works on the homogenization cone {z >= 0 : [rows | -rhs] z = 0} in
    R^(n+1); the cone is pointed because every coordinate is sign
    constrained, so plain double description applies. Constraints are
    inserted in coordinate order (the spec'd lexicographic order).
    """
    width = n + 1
    eq_rows = [list(r) + [-Fraction(b)] for r, b in zip(rows, rhs)]
    basis = _nullspace(eq_rows, width)
    d = len(basis)
    if d == 0:
        return []

    # Seed with d coordinates whose restriction of the basis is invertible;
    # the initial simplicial cone has the inverse's columns as rays.
    chosen: list[int] = []
    reducer: list[list[Fraction]] = []
    for coord in range(width):
        candidate = [basis[k][coord] for k in range(d)]
        trial = reducer + [list(candidate)]
        if _rank(trial, d) > len(reducer):
            reducer = trial
            chosen.append(coord)
            if len(chosen) == d:
                break
    assert len(chosen) == d, "homogenization cone is not pointed"

    seed = [[basis[k][c] for k in range(d)] for c in chosen]
    inverse = _invert(seed)
    rays: list[tuple[Fraction, ...]] = []
    for j in range(d):
        coeffs = [inverse[k][j] for k in range(d)]
        z = []
        for coord in range(width):
            value = ZERO
            for k in range(d):
                value += coeffs[k] * basis[k][coord]
            z.append(value)
        rays.append(_normalize_ray(z))

    processed_mask = 0
    for c in chosen:
        processed_mask |= 1 << c

    def zero_mask(ray: tuple[Fraction, ...]) -> int:
        mask = 0
        for i in range(width):
            if ray[i] == ZERO:
                mask |= 1 << i
        return mask & processed_mask

    masks = [zero_mask(r) for r in rays]

    chosen_set = set(chosen)
    for coord in range(width):
        if coord in chosen_set:
            continue
        processed_mask |= 1 << coord
        values = [ray[coord] for ray in rays]
        if all(v >= ZERO for v in values):
            masks = [
                m | ((1 << coord) if rays[i][coord] == ZERO else 0)
                for i, m in enumerate(masks)
            ]
            continue
        positive = [i for i, v in enumerate(values) if v > ZERO]
        negative = [i for i, v in enumerate(values) if v < ZERO]
        zero = [i for i, v in enumerate(values) if v == ZERO]
        new_rays: list[tuple[Fraction, ...]] = []
        new_masks: list[int] = []
        for i in positive + zero:
            new_rays.append(rays[i])
            new_masks.append(
                masks[i] | ((1 << coord) if rays[i][coord] == ZERO else 0)
            )
        for p in positive:
            for q in negative:
                common = masks[p] & masks[q]
                if common.bit_count() < d - 2:
                    continue
                adjacent = True
                for other in range(len(rays)):
                    if other in (p, q):
                        continue
                    if common & masks[other] == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = [
                    values[p] * rays[q][i] - values[q] * rays[p][i]
                    for i in range(width)
                ]
                ray = _normalize_ray(combo)
                new_rays.append(ray)
                mask = 0
                for i in range(width):
                    if ray[i] == ZERO:
                        mask |= 1 << i
                new_masks.append(mask & processed_mask)
        rays = new_rays
        masks = new_masks

    points: list[tuple[Fraction, ...]] = []
    for ray in rays:
        scale = ray[n]
        if scale == ZERO:
            raise RuntimeError(
                "unbounded direction in a model polytope; scenario invariants violated"
            )
        points.append(tuple(ray[i] / scale for i in range(n)))
    return sorted(set(points))


def _rank(rows: list[list[Fraction]], ncols: int) -> int:
    matrix = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        pivot_row = next(
            (r for r in range(rank, len(matrix)) if matrix[r][col] != ZERO), -1
        )
        if pivot_row < 0:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        inv = ONE / matrix[rank][col]
        matrix[rank] = [x * inv for x in matrix[rank]]
        for r in range(rank + 1, len(matrix)):
            if matrix[r][col] != ZERO:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def _invert(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    d = len(matrix)
    work = [list(row) + [ONE if i == j else ZERO for j in range(d)] for i, row in enumerate(matrix)]
    for col in range(d):
        pivot_row = next(r for r in range(col, d) if work[r][col] != ZERO)
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv = ONE / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(d):
            if r != col and work[r][col] != ZERO:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[d:] for row in work]
