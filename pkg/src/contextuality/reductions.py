"""Zero, contraction, and virtual equivalence reductions, the VCZ canonical
form, and observational-equivalence search.

Every operation requires a nonempty model set and raises
EmptyModelSetError otherwise, rather than silently reducing a scenario
whose model polytope is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    BudgetExceededError,
    EmptyModelSetError,
    EmptySubsetError,
    UnknownVertexError,
)
from .polytope import (
    enumerate_model_vertices,
    has_model,
    optimize_weight,
)
from .scenario import Edge, Model, Scenario, _scenario, induced_subhypergraph

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_SUBSET_BUDGET = 500_000


@dataclass(frozen=True)
class ContractiblePartition:
    """Maximal indistinguishable classes of the non-zero-weighted vertices.

    Two vertices are indistinguishable when every edge contains both or
    neither, i.e. their edge-incidence sets coincide.
    """

    blocks: tuple[tuple[str, ...], ...]
    zero_vertices: tuple[str, ...]


@dataclass(frozen=True)
class VczForm:
    """Canonical reduced scenario with the maps that produced it."""

    reduced: Scenario
    vertex_map: dict[str, str | None]
    completion_edges_removed: int
    zero_vertices: tuple[str, ...]
    completion_size: int


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of an observational-equivalence search.

    ``bijection`` maps vertices of the second scenario onto the first
    when the model polytopes correspond; otherwise ``reason`` explains
    the refutation.
    """

    equivalent: bool
    bijection: dict[str, str] | None = None
    reason: str | None = None


def _require_models(scenario: Scenario) -> None:
    if not has_model(scenario):
        raise EmptyModelSetError("scenario admits no probabilistic model")


def zero_weighted_vertices(scenario: Scenario) -> tuple[str, ...]:
    """Vertices whose weight is 0 under every model (one max-LP per vertex)."""
    _require_models(scenario)
    zeros = []
    for v in scenario.vertices:
        result = optimize_weight(scenario, [v], "max")
        if result.optimum == ZERO:
            zeros.append(v)
    return tuple(zeros)


def contractible_partition(scenario: Scenario) -> ContractiblePartition:
    """Drop zero-weighted vertices, then group the rest by incidence signature."""
    zeros = zero_weighted_vertices(scenario)
    if zeros:
        remainder = induced_subhypergraph(
            scenario, set(scenario.vertices) - set(zeros)
        ).scenario
    else:
        remainder = scenario
    groups: dict[frozenset[int], list[str]] = {}
    for v in remainder.vertices:
        groups.setdefault(remainder.incidence[v], []).append(v)
    blocks = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    return ContractiblePartition(blocks, zeros)


def is_virtual_edge(scenario: Scenario, candidate: Iterable[str]) -> bool:
    """True iff the subset sums to exactly 1 under every model (two LPs)."""
    subset = set(candidate)
    if not subset:
        raise EmptySubsetError("a virtual edge cannot be empty")
    unknown = sorted(subset - scenario.vertex_set)
    if unknown:
        raise UnknownVertexError(
            f"candidate mentions unknown vertices: {', '.join(unknown)}",
            labels=unknown,
        )
    _require_models(scenario)
    low = optimize_weight(scenario, subset, "min")
    if low.optimum != ONE:
        return False
    high = optimize_weight(scenario, subset, "max")
    return high.optimum == ONE


def enumerate_virtual_edges(
    scenario: Scenario, budget: int | None = None
) -> tuple[Edge, ...]:
    """All virtual edges, by DFS over vertex subsets with monotone pruning.

    A subset e is virtual iff p(e) = 1 at every extreme point of G(H).
    Weights are nonnegative, so partial sums only grow along a DFS
    branch: once any extreme point exceeds 1 the branch dies. ``budget``
    caps the number of DFS nodes visited.
    """
    _require_models(scenario)
    limit = DEFAULT_SUBSET_BUDGET if budget is None else budget
    extremes = enumerate_model_vertices(scenario).vertices
    columns = [
        tuple(p[v] for p in extremes) for v in scenario.vertices
    ]
    n = scenario.size
    found: list[Edge] = []
    visited = 0
    stack: list[tuple[int, tuple[int, ...], tuple[Fraction, ...]]] = [
        (0, (), tuple(ZERO for _ in extremes))
    ]
    while stack:
        start, members, sums = stack.pop()
        visited += 1
        if visited > limit:
            raise BudgetExceededError(
                f"virtual-edge search exceeded {limit} subsets", budget=limit
            )
        if members and all(s == ONE for s in sums):
            found.append(tuple(scenario.vertices[i] for i in members))
        for nxt in range(start, n):
            column = columns[nxt]
            grown = tuple(a + b for a, b in zip(sums, column))
            if any(s > ONE for s in grown):
                continue
            stack.append((nxt + 1, members + (nxt,), grown))
    return tuple(sorted(found))


def completion(scenario: Scenario, budget: int | None = None) -> Scenario:
    """The virtual equivalent with the most edges: add every virtual edge."""
    virtual = enumerate_virtual_edges(scenario, budget)
    return _scenario(scenario.vertices, set(scenario.edges) | set(virtual))


def vcz_reduce(scenario: Scenario, budget: int | None = None) -> VczForm:
    """Canonical form: drop zero-weighted vertices, contract indistinguishable
    blocks to their least label, complete, then greedily prune redundant edges.

    Greedy pruning visits edges in lexicographic order and removes an
    edge whenever it stays a virtual edge of the remainder (removal then
    provably leaves the model set unchanged). One pass suffices: once an
    edge fails the test, later removals only enlarge the remainder's
    model set, so the edge can never become removable again.
    """
    partition = contractible_partition(scenario)
    vertex_map: dict[str, str | None] = {v: None for v in partition.zero_vertices}
    keep: list[str] = []
    for block in partition.blocks:
        representative = block[0]
        keep.append(representative)
        for member in block:
            vertex_map[member] = representative
    if partition.zero_vertices:
        base = induced_subhypergraph(
            scenario, set(scenario.vertices) - set(partition.zero_vertices)
        ).scenario
    else:
        base = scenario
    contracted = induced_subhypergraph(base, keep).scenario

    completed = completion(contracted, budget)
    edges = list(completed.edges)
    removed = 0
    for edge in list(edges):
        rest = [e for e in edges if e != edge]
        covered = {v for e in rest for v in e}
        if covered != set(completed.vertices):
            continue
        remainder = _scenario(completed.vertices, rest)
        if is_virtual_edge(remainder, edge):
            edges = rest
            removed += 1
    reduced = _scenario(completed.vertices, edges)

    signatures = {reduced.incidence[v] for v in reduced.vertices}
    if len(signatures) != len(reduced.vertices):
        raise RuntimeError(
            "reduced scenario has indistinguishable vertices; "
            "contraction invariant violated"
        )
    return VczForm(
        reduced=reduced,
        vertex_map=vertex_map,
        completion_edges_removed=removed,
        zero_vertices=partition.zero_vertices,
        completion_size=len(completed.edges),
    )


def _value_profile(models: tuple[Model, ...], vertex: str) -> tuple[Fraction, ...]:
    return tuple(sorted(p[vertex] for p in models))


def observational_equivalence(
    first: Scenario, second: Scenario, budget: int | None = None
) -> EquivalenceResult:
    """Search for a bijection phi: V2 -> V1 with G(H2) = G(H1) o phi.

    Both extreme-point sets are enumerated; candidate pairings are pruned
    by per-vertex value multisets, then backtracking keeps, for every
    extreme model of H2, the set of extreme models of H1 that still agree
    on the assigned vertices. A completed assignment is accepted only if
    composing maps the two extreme sets exactly onto each other.
    """
    models1 = enumerate_model_vertices(first, budget).vertices
    models2 = enumerate_model_vertices(second, budget).vertices
    if first.size != second.size:
        return EquivalenceResult(
            False,
            reason=f"vertex counts differ: {first.size} vs {second.size}",
        )
    if len(models1) != len(models2):
        return EquivalenceResult(
            False,
            reason=(
                "extreme model counts differ: "
                f"{len(models1)} vs {len(models2)}"
            ),
        )
    if not models1:
        pairing = dict(zip(second.vertices, first.vertices))
        return EquivalenceResult(True, bijection=pairing)

    profiles1: dict[str, tuple[Fraction, ...]] = {
        v: _value_profile(models1, v) for v in first.vertices
    }
    profiles2: dict[str, tuple[Fraction, ...]] = {
        w: _value_profile(models2, w) for w in second.vertices
    }
    candidates: dict[str, list[str]] = {}
    for w in second.vertices:
        options = sorted(v for v in first.vertices if profiles1[v] == profiles2[w])
        if not options:
            return EquivalenceResult(
                False, reason=f"no vertex of the first scenario matches {w!r}"
            )
        candidates[w] = options

    order = sorted(second.vertices, key=lambda w: (len(candidates[w]), w))
    assignment: dict[str, str] = {}
    used: set[str] = set()
    compatible: list[set[int]] = [set(range(len(models1))) for _ in models2]

    def verify(mapping: dict[str, str]) -> bool:
        composed = {
            tuple(p[mapping[w]] for w in second.vertices) for p in models1
        }
        target = {tuple(q[w] for w in second.vertices) for q in models2}
        return composed == target

    def search(depth: int) -> dict[str, str] | None:
        if depth == len(order):
            return dict(assignment) if verify(assignment) else None
        w = order[depth]
        for v in candidates[w]:
            if v in used:
                continue
            narrowed = []
            feasible = True
            for qi, q in enumerate(models2):
                kept = {
                    pi for pi in compatible[qi] if models1[pi][v] == q[w]
                }
                if not kept:
                    feasible = False
                    break
                narrowed.append(kept)
            if not feasible:
                continue
            saved = [compatible[qi] for qi in range(len(models2))]
            for qi in range(len(models2)):
                compatible[qi] = narrowed[qi]
            assignment[w] = v
            used.add(v)
            found = search(depth + 1)
            if found is not None:
                return found
            del assignment[w]
            used.remove(v)
            for qi in range(len(models2)):
                compatible[qi] = saved[qi]
        return None

    mapping = search(0)
    if mapping is None:
        return EquivalenceResult(
            False, reason="no bijection identifies the extreme model sets"
        )
    return EquivalenceResult(True, bijection=mapping)
