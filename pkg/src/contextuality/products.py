"""Foulis-Randall products, questions, rules, games, and no-signaling checks.

Product vertices are tuples of factor vertices; their printed labels
follow the paper-style ``ab|xy`` convention whenever every factor label
has the ``outcome|question`` shape (comma-separated variants are used
when components are longer than one character, so labels stay
unambiguous).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    NotAModelError,
    RuleDomainMismatchError,
    SizeBudgetExceededError,
    WinningSetNotSubsetError,
)
from .polytope import check_model_domain
from .reductions import enumerate_virtual_edges
from .scenario import Edge, Model, Scenario, _scenario, induced_subhypergraph

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_EDGE_BUDGET = 100_000

QUESTION = "question"


@dataclass(frozen=True)
class ProductScenario:
    """A product hypergraph that remembers its factors.

    ``coords`` decomposes every product vertex label into its factor
    labels; ``edge_origin`` tags each edge of ``scenario`` with the
    adapting party that generated it ("question" for full product edges,
    "virtual" for completion edges).
    """

    scenario: Scenario
    factors: tuple[Scenario, ...]
    coords: dict[str, tuple[str, ...]]
    edge_origin: tuple[str, ...]


@dataclass(frozen=True)
class Rule:
    """Winning subsets per question, keyed by factor-edge index tuples."""

    winners: dict[tuple[int, ...], frozenset[str]]


@dataclass(frozen=True)
class NoSignalingViolation:
    party: int
    edge_pair: tuple[int, int]
    context: tuple[str, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class NoSignalingReport:
    ok: bool
    violations: tuple[NoSignalingViolation, ...]


def combine_labels(parts: Sequence[str]) -> str:
    """Canonical printed label for a tuple of factor vertex labels."""
    split = [part.split("|") for part in parts]
    if all(len(s) == 2 for s in split):
        outcomes = [s[0] for s in split]
        questions = [s[1] for s in split]
        if all(len(t) == 1 for t in outcomes + questions):
            return "".join(outcomes) + "|" + "".join(questions)
        return ",".join(outcomes) + "|" + ",".join(questions)
    return ",".join(parts)


def _product_vertices(
    factors: Sequence[Scenario],
) -> tuple[dict[tuple[str, ...], str], dict[str, tuple[str, ...]]]:
    label_of: dict[tuple[str, ...], str] = {}
    coords: dict[str, tuple[str, ...]] = {}
    for combo in itertools.product(*(f.vertices for f in factors)):
        label = combine_labels(combo)
        if label in coords:
            raise ValueError(
                f"factor labels produce a colliding product label {label!r}"
            )
        label_of[combo] = label
        coords[label] = combo
    return label_of, coords


def joint_measurement_edges(
    factors: Sequence[Scenario], party: int, *, edge_budget: int | None = None
) -> set[frozenset[str]]:
    """Edges where every other party fixes a measurement and, for each of
    their joint outcomes, the given party picks one of its own measurements.
    """
    k = len(factors)
    if k < 2:
        raise ValueError("need at least two factors")
    if not 0 <= party < k:
        raise ValueError(f"party index {party} out of range")
    limit = DEFAULT_EDGE_BUDGET if edge_budget is None else edge_budget
    others = [j for j in range(k) if j != party]
    own_edges = factors[party].edges
    generated = 0
    for combo in itertools.product(*(factors[j].edges for j in others)):
        contexts = 1
        for e in combo:
            contexts *= len(e)
        generated += len(own_edges) ** contexts
    if generated > limit:
        raise SizeBudgetExceededError(
            f"party {party} would generate {generated} edges, budget is {limit}",
            generated=generated,
            budget=limit,
        )

    label_of, _ = _product_vertices(factors)
    edges: set[frozenset[str]] = set()
    for combo in itertools.product(*(factors[j].edges for j in others)):
        contexts = list(itertools.product(*combo))
        for choice in itertools.product(own_edges, repeat=len(contexts)):
            members: set[str] = set()
            for context, own_edge in zip(contexts, choice):
                for own_vertex in own_edge:
                    point = [""] * k
                    for j, value in zip(others, context):
                        point[j] = value
                    point[party] = own_vertex
                    members.add(label_of[tuple(point)])
            edges.add(frozenset(members))
    return edges


def _assemble(
    factors: Sequence[Scenario],
    edges_by_origin: Mapping[str, set[frozenset[str]]],
) -> ProductScenario:
    label_of, coords = _product_vertices(factors)
    questions_set = {
        frozenset(label_of[combo] for combo in itertools.product(*edge_tuple))
        for edge_tuple in itertools.product(*(f.edges for f in factors))
    }
    merged: dict[frozenset[str], list[str]] = {}
    for origin in sorted(edges_by_origin):
        for edge in edges_by_origin[origin]:
            merged.setdefault(edge, []).append(origin)
    canonical = sorted(tuple(sorted(e)) for e in merged)
    origins = []
    for edge in canonical:
        key = frozenset(edge)
        if key in questions_set:
            origins.append(QUESTION)
        else:
            origins.append("+".join(sorted(set(merged[key]))))
    scenario = _scenario(coords.keys(), canonical)
    assert scenario.edges == tuple(canonical)
    return ProductScenario(scenario, tuple(factors), coords, tuple(origins))


def fr_product_bipartite(
    first: Scenario, second: Scenario, *, edge_budget: int | None = None
) -> ProductScenario:
    """Bipartite Foulis-Randall product, built directly from the two
    families of adaptive joint measurements (A picks and B adapts, and
    symmetrically)."""
    limit = DEFAULT_EDGE_BUDGET if edge_budget is None else edge_budget
    generated = sum(len(second.edges) ** len(e) for e in first.edges)
    generated += sum(len(first.edges) ** len(e) for e in second.edges)
    if generated > limit:
        raise SizeBudgetExceededError(
            f"product would generate {generated} edges, budget is {limit}",
            generated=generated,
            budget=limit,
        )
    label_of, _ = _product_vertices([first, second])
    forward: set[frozenset[str]] = set()
    for edge_a in first.edges:
        for choice in itertools.product(second.edges, repeat=len(edge_a)):
            members: set[str] = set()
            for a, edge_b in zip(edge_a, choice):
                for b in edge_b:
                    members.add(label_of[(a, b)])
            forward.add(frozenset(members))
    backward: set[frozenset[str]] = set()
    for edge_b in second.edges:
        for choice in itertools.product(first.edges, repeat=len(edge_b)):
            members = set()
            for b, edge_a in zip(edge_b, choice):
                for a in edge_a:
                    members.add(label_of[(a, b)])
            backward.add(frozenset(members))
    return _assemble([first, second], {"party1": forward, "party0": backward})


def fr_product_min(
    factors: Sequence[Scenario], *, edge_budget: int | None = None
) -> ProductScenario:
    """Minimal k-partite Foulis-Randall product: the union over parties of
    their joint-measurement edges."""
    if len(factors) < 2:
        raise ValueError("need at least two factors")
    by_origin = {
        f"party{i}": joint_measurement_edges(factors, i, edge_budget=edge_budget)
        for i in range(len(factors))
    }
    return _assemble(factors, by_origin)


def fr_product_complete(
    factors: Sequence[Scenario],
    *,
    edge_budget: int | None = None,
    subset_budget: int | None = None,
) -> ProductScenario:
    """Completion of the minimal product: add all of its virtual edges."""
    minimal = fr_product_min(factors, edge_budget=edge_budget)
    virtual = enumerate_virtual_edges(minimal.scenario, subset_budget)
    extra = {
        frozenset(e) for e in virtual if frozenset(e) not in set(minimal.scenario.edge_sets)
    }
    merged = sorted(
        set(minimal.scenario.edges) | {tuple(sorted(e)) for e in extra}
    )
    origins = []
    existing = {e: o for e, o in zip(minimal.scenario.edges, minimal.edge_origin)}
    for edge in merged:
        origins.append(existing.get(edge, "virtual"))
    scenario = _scenario(minimal.scenario.vertices, merged)
    assert scenario.edges == tuple(merged)
    return ProductScenario(
        scenario, minimal.factors, minimal.coords, tuple(origins)
    )


def questions(product: ProductScenario) -> dict[tuple[int, ...], tuple[str, ...]]:
    """Full product edges, keyed by their factor-edge index tuples."""
    out: dict[tuple[int, ...], tuple[str, ...]] = {}
    for key in itertools.product(*(range(len(f.edges)) for f in product.factors)):
        combos = itertools.product(
            *(product.factors[i].edges[key[i]] for i in range(len(key)))
        )
        labels = tuple(sorted(combine_labels(c) for c in combos))
        out[key] = labels
    return out


def apply_rule(product: ProductScenario, rule: Rule) -> Scenario:
    """The game: restrict the product to the union of winning outcomes.

    Empty induced edges are dropped and duplicates merged.
    """
    wanted = questions(product)
    if set(rule.winners) != set(wanted):
        missing = sorted(set(wanted) - set(rule.winners))
        extra = sorted(set(rule.winners) - set(wanted))
        raise RuleDomainMismatchError(
            "rule is not defined on exactly the questions of the product",
            missing=[list(k) for k in missing],
            extra=[list(k) for k in extra],
        )
    for key, winners in rule.winners.items():
        outside = sorted(winners - set(wanted[key]))
        if outside:
            raise WinningSetNotSubsetError(
                f"winners of question {key} are not a subset of it",
                question=list(key),
                outside=outside,
            )
    winning = sorted(set().union(*rule.winners.values()))
    return induced_subhypergraph(product.scenario, winning).scenario


def full_rule(product: ProductScenario) -> Rule:
    """The trivial rule keeping every outcome of every question."""
    return Rule({key: frozenset(edge) for key, edge in questions(product).items()})


def check_no_signaling(
    product: ProductScenario, model: Mapping[str, Fraction]
) -> NoSignalingReport:
    """Verify every marginal of one party is independent of another party's
    measurement choice.

    The input must be normalized on every question (a conditional
    probability table); models of the Foulis-Randall product always pass.
    """
    check_model_domain(product.scenario, model)
    for key, edge in questions(product).items():
        total = ZERO
        for v in edge:
            total += model[v]
        if total != ONE:
            raise NotAModelError(
                f"question {key} sums to {total}, expected 1",
                question=list(key),
            )
    k = len(product.factors)
    by_coords = {coords: label for label, coords in product.coords.items()}
    violations: list[NoSignalingViolation] = []
    for party in range(k):
        others = [j for j in range(k) if j != party]
        own = product.factors[party].edges
        other_vertices = [product.factors[j].vertices for j in others]
        for a, b in itertools.combinations(range(len(own)), 2):
            for context in itertools.product(*other_vertices):
                sums = []
                for edge_index in (a, b):
                    total = ZERO
                    for v in own[edge_index]:
                        point = [""] * k
                        for j, value in zip(others, context):
                            point[j] = value
                        point[party] = v
                        total += model[by_coords[tuple(point)]]
                    sums.append(total)
                if sums[0] != sums[1]:
                    violations.append(
                        NoSignalingViolation(
                            party, (a, b), tuple(context), sums[0], sums[1]
                        )
                    )
    return NoSignalingReport(not violations, tuple(violations))
