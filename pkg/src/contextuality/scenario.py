"""Contextuality scenarios: labeled hypergraphs whose edges are measurements.

A scenario stores its vertex labels and edges in canonical lexicographic
order, so two structurally equal scenarios compare equal and serialize to
byte-identical JSON. All values are immutable after construction; every
operation here is a pure function.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DuplicateLabelError,
    EmptyEdgeError,
    EmptySubsetError,
    IsolatedVertexError,
    UnknownVertexError,
    ZeroCountError,
)

Edge = tuple[str, ...]
Model = dict[str, Fraction]


class SubsetEdgeWarning(UserWarning):
    """An edge is a strict subset of another: the difference is forced to weight 0."""


@dataclass(frozen=True)
class Scenario:
    """A hypergraph with no isolated vertex, in canonical order."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def edge_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset(e) for e in self.edges)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incidence(self) -> dict[str, frozenset[int]]:
        """Vertex label -> indices of the edges containing it."""
        found: dict[str, set[int]] = {v: set() for v in self.vertices}
        for i, edge in enumerate(self.edges):
            for v in edge:
                found[v].add(i)
        return {v: frozenset(s) for v, s in found.items()}


@dataclass(frozen=True)
class PartyScenario(Scenario):
    """A scenario whose edges are pairwise disjoint (one player's measurements)."""


@dataclass(frozen=True)
class InducedSubhypergraph:
    """Result of restricting a scenario to a vertex subset.

    When ``empty_induced_edge`` is set, some original edge had an empty
    intersection with the subset; the restriction then admits no model
    even though ``scenario`` (which keeps only the nonempty induced edges)
    may look satisfiable on its own.
    """

    scenario: Scenario
    empty_induced_edge: bool


def _canonicalize(
    vertices: Iterable[str], edges: Iterable[Iterable[str]]
) -> tuple[tuple[str, ...], tuple[Edge, ...]]:
    vertex_list = list(vertices)
    seen: set[str] = set()
    for label in vertex_list:
        if label in seen:
            raise DuplicateLabelError(f"duplicate vertex label {label!r}", label=label)
        seen.add(label)
    canon_edges: set[Edge] = set()
    for edge in edges:
        members = sorted(set(edge))
        if not members:
            raise EmptyEdgeError("edge with no vertices")
        for v in members:
            if v not in seen:
                raise UnknownVertexError(
                    f"edge mentions undeclared vertex {v!r}", label=v
                )
        canon_edges.add(tuple(members))
    sorted_edges = tuple(sorted(canon_edges))
    covered = {v for e in sorted_edges for v in e}
    isolated = sorted(seen - covered)
    if isolated:
        raise IsolatedVertexError(
            f"isolated vertices: {', '.join(isolated)}", labels=isolated
        )
    return tuple(sorted(seen)), sorted_edges


def _scenario(vertices: Iterable[str], edges: Iterable[Iterable[str]]) -> Scenario:
    """Internal constructor: canonicalize without the subset-edge lint."""
    verts, canon = _canonicalize(vertices, edges)
    return Scenario(verts, canon)


def subset_edge_pairs(scenario: Scenario) -> list[tuple[Edge, Edge]]:
    """All pairs (e1, e2) of distinct edges with e1 a strict subset of e2."""
    pairs = []
    sets = scenario.edge_sets
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a < b:
                pairs.append((scenario.edges[i], scenario.edges[j]))
    return pairs


def validate_scenario(
    vertices: Iterable[str],
    edges: Iterable[Iterable[str]],
    *,
    warn_subset_edges: bool = True,
) -> Scenario:
    """Build a canonical Scenario from raw vertex and edge lists.

    Raises IsolatedVertexError, UnknownVertexError, EmptyEdgeError or
    DuplicateLabelError when the input violates the scenario invariants.
    Edges that are subsets of other edges are allowed but linted: every
    vertex of the difference is forced to weight 0 in every model.
    """
    scenario = _scenario(vertices, edges)
    if warn_subset_edges:
        for inner, outer in subset_edge_pairs(scenario):
            warnings.warn(
                f"edge {list(inner)} is a subset of {list(outer)}; "
                f"vertices {sorted(set(outer) - set(inner))} are forced to weight 0",
                SubsetEdgeWarning,
                stacklevel=2,
            )
    return scenario


def build_party(m: int, d: int) -> PartyScenario:
    """Uncorrelated single-party scenario: m disjoint measurements, d outcomes each.

    Vertex labels follow the ``a|x`` convention (outcome a of question x).
    """
    if m < 1 or d < 1:
        raise ZeroCountError(f"need m >= 1 and d >= 1, got m={m}, d={d}", m=m, d=d)
    edges = []
    for x in range(m):
        edges.append(tuple(sorted(f"{a}|{x}" for a in range(d))))
    verts, canon = _canonicalize((v for e in edges for v in e), edges)
    return PartyScenario(verts, canon)


def induced_subhypergraph(scenario: Scenario, subset: Iterable[str]) -> InducedSubhypergraph:
    """Restrict a scenario to a vertex subset, intersecting every edge.

    Duplicate induced edges are merged. If some edge has empty
    intersection with the subset, the result is flagged: such a
    restriction admits no probabilistic model.
    """
    keep = set(subset)
    if not keep:
        raise EmptySubsetError("cannot induce on the empty vertex set")
    unknown = sorted(keep - scenario.vertex_set)
    if unknown:
        raise UnknownVertexError(
            f"subset mentions unknown vertices: {', '.join(unknown)}", labels=unknown
        )
    induced: set[Edge] = set()
    empty = False
    for edge_set in scenario.edge_sets:
        cut = edge_set & keep
        if cut:
            induced.add(tuple(sorted(cut)))
        else:
            empty = True
    return InducedSubhypergraph(_scenario(sorted(keep), induced), empty)


def orthogonality_pairs(scenario: Scenario) -> set[tuple[str, str]]:
    """All unordered pairs of distinct vertices that share an edge."""
    pairs: set[tuple[str, str]] = set()
    for edge in scenario.edges:
        for i, u in enumerate(edge):
            for v in edge[i + 1 :]:
                pairs.add((u, v))
    return pairs


def enumerate_deterministic_models(scenario: Scenario) -> list[Model]:
    """All 0/1 models assigning exactly one weight-1 vertex per edge.

    Backtracks edge by edge; returns the empty list when no assignment
    exists (e.g. odd cycles of binary edges).
    """
    zero, one = Fraction(0), Fraction(1)
    assignment: dict[str, Fraction] = {}
    results: list[Model] = []

    def assign(edge_idx: int) -> None:
        if edge_idx == len(scenario.edges):
            results.append({v: assignment.get(v, zero) for v in scenario.vertices})
            return
        edge = scenario.edges[edge_idx]
        chosen = [v for v in edge if assignment.get(v) == one]
        if len(chosen) > 1:
            return
        if len(chosen) == 1:
            touched = [v for v in edge if v not in assignment]
            for v in touched:
                assignment[v] = zero
            assign(edge_idx + 1)
            for v in touched:
                del assignment[v]
            return
        for pick in edge:
            if assignment.get(pick) == zero:
                continue
            touched = [v for v in edge if v not in assignment]
            for v in edge:
                if v not in touched:
                    continue
                assignment[v] = one if v == pick else zero
            assign(edge_idx + 1)
            for v in touched:
                del assignment[v]

    assign(0)
    results.sort(key=lambda m: tuple(m[v] for v in scenario.vertices))
    return results


def subset_weight(model: Mapping[str, Fraction], subset: Iterable[str]) -> Fraction:
    """p(W): the exact sum of the model's weights over a vertex subset."""
    total = Fraction(0)
    for v in subset:
        total += model[v]
    return total
