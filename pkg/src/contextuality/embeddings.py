"""Constructive embeddings of contextuality scenarios into bipartite games,
with exact bidirectional verification of the conditional interpretation.

Two constructions are provided: the general one (clone factors, standard
rule, diagonal injection) for arbitrary scenarios, and the linear-size
one for connected graphs (2-colorable case and odd-cycle case).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DisconnectedError,
    EmptyModelSetError,
    NonBinaryEdgeError,
    NotAModelError,
)
from .polytope import enumerate_model_vertices, has_model, is_model
from .products import ProductScenario, Rule, apply_rule, combine_labels, fr_product_bipartite, questions
from .scenario import Model, PartyScenario, Scenario, _canonicalize, build_party, subset_weight

ZERO = Fraction(0)
ONE = Fraction(1)

THEOREM41 = "theorem41"
GRAPH_BIPARTITE = "graph_bipartite"
GRAPH_ODDCYCLE = "graph_oddcycle"


@dataclass(frozen=True)
class Embedding:
    """An injection of a scenario's vertices into a game scenario.

    ``edge_choice`` (general construction only) records the edge e(v)
    whose diagonal clone pair hosts each vertex. ``target_parts``
    decomposes every target vertex into (v, v', edge index, edge index)
    so that extensions can be evaluated without re-parsing labels.
    """

    source: Scenario
    target: Scenario
    injection: dict[str, str]
    kind: str
    edge_choice: dict[str, tuple[str, ...]] | None = None
    target_parts: dict[str, tuple[str, str, int, int]] | None = None
    color_classes: tuple[tuple[str, ...], tuple[str, ...]] | None = None


@dataclass(frozen=True)
class ConditionalVerification:
    """Verdict of the exact two-direction check, with per-point certificates."""

    verdict: str
    certificates: tuple[dict, ...]
    counterexample: dict | None = None

    @property
    def verified(self) -> bool:
        return self.verdict == "Verified"


def clone_factor(scenario: Scenario) -> PartyScenario:
    """The uncorrelated factor whose vertices are clones v|e of the
    scenario's outcomes, one per containing edge."""
    edges = []
    for index, edge in enumerate(scenario.edges):
        edges.append(tuple(sorted(f"{v}|{index}" for v in edge)))
    verts, canon = _canonicalize((v for e in edges for v in e), edges)
    return PartyScenario(verts, canon)


def standard_rule(scenario: Scenario, product: ProductScenario) -> Rule:
    """Keep vv'|ee' iff v = v' or neither v nor v' lies in the overlap of e and e'."""
    winners: dict[tuple[int, ...], frozenset[str]] = {}
    for (i, j) in questions(product):
        edge_i = scenario.edges[i]
        edge_j = scenario.edges[j]
        overlap = set(edge_i) & set(edge_j)
        kept = set()
        for v in edge_i:
            for w in edge_j:
                if v == w or (v not in overlap and w not in overlap):
                    kept.add(combine_labels((f"{v}|{i}", f"{w}|{j}")))
        winners[(i, j)] = frozenset(kept)
    return Rule(winners)


def build_theorem41(
    scenario: Scenario,
    edge_choice: Mapping[str, Iterable[str]] | None = None,
    *,
    edge_budget: int | None = None,
) -> Embedding:
    """General bipartite embedding: clone factors, standard rule, and the
    diagonal injection v -> vv|e(v)e(v).

    ``edge_choice`` may pick, per vertex, any containing edge; the default
    is the lexicographically least one. Any valid choice yields a correct
    embedding, which verify_conditional confirms.
    """
    if not has_model(scenario):
        raise EmptyModelSetError("scenario admits no probabilistic model")
    chosen: dict[str, int] = {}
    if edge_choice is None:
        for v in scenario.vertices:
            chosen[v] = min(scenario.incidence[v])
    else:
        if set(edge_choice) != set(scenario.vertices):
            raise ValueError("edge_choice must cover exactly the vertex set")
        lookup = {edge: index for index, edge in enumerate(scenario.edges)}
        for v, raw in edge_choice.items():
            edge = tuple(sorted(set(raw)))
            if edge not in lookup:
                raise ValueError(f"edge_choice[{v!r}] is not an edge of the scenario")
            if v not in edge:
                raise ValueError(f"edge_choice[{v!r}] does not contain {v!r}")
            chosen[v] = lookup[edge]

    factor = clone_factor(scenario)
    product = fr_product_bipartite(factor, factor, edge_budget=edge_budget)
    rule = standard_rule(scenario, product)
    game = apply_rule(product, rule)

    parts: dict[str, tuple[str, str, int, int]] = {}
    for (i, j), winners in rule.winners.items():
        for v in scenario.edges[i]:
            for w in scenario.edges[j]:
                label = combine_labels((f"{v}|{i}", f"{w}|{j}"))
                if label in winners:
                    parts[label] = (v, w, i, j)
    injection = {
        v: combine_labels((f"{v}|{chosen[v]}", f"{v}|{chosen[v]}"))
        for v in scenario.vertices
    }
    edge_choice_out = {v: scenario.edges[chosen[v]] for v in scenario.vertices}
    return Embedding(
        source=scenario,
        target=game,
        injection=injection,
        kind=THEOREM41,
        edge_choice=edge_choice_out,
        target_parts=parts,
    )


def extend_model(scenario: Scenario, embedding: Embedding, model: Mapping[str, Fraction]) -> Model:
    """Extend a model of the source to the game by the explicit product
    formula: diagonal pairs carry p(v); a disjoint pair vv'|ee' carries
    p(v)p(v') / (1 - p(e and e')), or 0 when the overlap is fully weighted.
    """
    if embedding.kind != THEOREM41:
        raise ValueError("extend_model applies to the general construction only")
    if not is_model(scenario, model):
        raise NotAModelError("input is not a model of the source scenario")
    assert embedding.target_parts is not None
    overlap_weight: dict[tuple[int, int], Fraction] = {}
    extension: Model = {}
    for label, (v, w, i, j) in embedding.target_parts.items():
        if v == w:
            extension[label] = Fraction(model[v])
            continue
        key = (i, j)
        if key not in overlap_weight:
            members = set(scenario.edges[i]) & set(scenario.edges[j])
            overlap_weight[key] = subset_weight(model, members)
        blocked = overlap_weight[key]
        if blocked == ONE:
            extension[label] = ZERO
        else:
            extension[label] = Fraction(model[v]) * Fraction(model[w]) / (ONE - blocked)
    return extension


def _two_color(scenario: Scenario) -> tuple[tuple[str, ...], tuple[str, ...]] | None:
    """BFS 2-coloring over binary edges; None when an odd cycle exists.

    Also serves as the connectivity check: raises if some vertex is
    unreachable from the least one.
    """
    adjacency: dict[str, set[str]] = {v: set() for v in scenario.vertices}
    for u, w in scenario.edges:
        adjacency[u].add(w)
        adjacency[w].add(u)
    colors: dict[str, int] = {scenario.vertices[0]: 0}
    frontier = [scenario.vertices[0]]
    while frontier:
        nxt: list[str] = []
        for u in frontier:
            for w in sorted(adjacency[u]):
                if w not in colors:
                    colors[w] = 1 - colors[u]
                    nxt.append(w)
        frontier = nxt
    unreachable = sorted(set(scenario.vertices) - set(colors))
    if unreachable:
        raise DisconnectedError(
            f"vertices unreachable from {scenario.vertices[0]!r}: "
            f"{', '.join(unreachable)}",
            labels=unreachable,
        )
    for u, w in scenario.edges:
        if colors[u] == colors[w]:
            return None
    first = tuple(v for v in scenario.vertices if colors[v] == 0)
    second = tuple(v for v in scenario.vertices if colors[v] == 1)
    return first, second


def build_graph_embedding(scenario: Scenario) -> Embedding:
    """Linear-size embedding for a connected scenario with binary edges.

    2-colorable graphs embed into the product of a many-question
    single-outcome party with one binary measurement; graphs with an odd
    cycle embed into a grid of CHSH games whose unique model is 1/2
    everywhere, matching the graph's unique model.
    """
    bad = [e for e in scenario.edges if len(e) != 2]
    if bad:
        raise NonBinaryEdgeError(
            f"edges must have exactly two vertices, offending: {bad[0]}",
            edge=list(bad[0]),
        )
    coloring = _two_color(scenario)
    if coloring is not None:
        first, second = coloring
        m = max(len(first), len(second))
        product = fr_product_bipartite(build_party(m, 1), build_party(1, 2))
        injection: dict[str, str] = {}
        for index, v in enumerate(first):
            injection[v] = combine_labels((f"0|{index}", "0|0"))
        for index, v in enumerate(second):
            injection[v] = combine_labels((f"0|{index}", "1|0"))
        return Embedding(
            source=scenario,
            target=product.scenario,
            injection=injection,
            kind=GRAPH_BIPARTITE,
            color_classes=(first, second),
        )

    blocks = -(-scenario.size // 8)  # ceil(|V| / 8): one CHSH block per 8 vertices
    m, n = 1, blocks
    product = fr_product_bipartite(build_party(2 * m, 2), build_party(2 * n, 2))
    winners: dict[tuple[int, ...], frozenset[str]] = {}
    for (x, y), edge in questions(product).items():
        kept = set()
        for label in edge:
            left, right = product.coords[label]
            a = left.split("|")[0]
            b = right.split("|")[0]
            if (a == b) == (x % 2 == 0 or y % 2 == 0):
                kept.add(label)
        winners[(x, y)] = frozenset(kept)
    game = apply_rule(product, Rule(winners))
    injection = dict(zip(scenario.vertices, game.vertices))
    return Embedding(
        source=scenario,
        target=game,
        injection=injection,
        kind=GRAPH_ODDCYCLE,
    )


def _extend_graph_bipartite(embedding: Embedding, model: Mapping[str, Fraction]) -> Model:
    first, second = embedding.color_classes
    q = Fraction(model[first[0]])
    m = len(embedding.target.vertices) // 2
    extension: Model = {}
    for x in range(m):
        extension[combine_labels((f"0|{x}", "0|0"))] = q
        extension[combine_labels((f"0|{x}", "1|0"))] = ONE - q
    return extension


def _extension_for(embedding: Embedding, model: Mapping[str, Fraction]) -> Model:
    if embedding.kind == THEOREM41:
        return extend_model(embedding.source, embedding, model)
    if embedding.kind == GRAPH_BIPARTITE:
        return _extend_graph_bipartite(embedding, model)
    half = Fraction(1, 2)
    return {v: half for v in embedding.target.vertices}


def verify_conditional(
    scenario: Scenario, embedding: Embedding, budget: int | None = None
) -> ConditionalVerification:
    """Check both directions of the conditional interpretation exactly.

    Restriction: every extreme point of the target polytope composes with
    the injection to a model of the source (enough for the whole polytope
    by convexity, since composition is affine). Extension: every extreme
    point of the source extends, via the construction's explicit formula,
    to a target model that composes back to it exactly.
    """
    source_points = enumerate_model_vertices(scenario, budget).vertices
    target_points = enumerate_model_vertices(embedding.target, budget).vertices
    certificates: list[dict] = []
    for index, point in enumerate(target_points):
        composed = {v: point[embedding.injection[v]] for v in scenario.vertices}
        ok = is_model(scenario, composed)
        certificates.append(
            {"direction": "restriction", "index": index, "ok": ok}
        )
        if not ok:
            return ConditionalVerification(
                "Refuted",
                tuple(certificates),
                counterexample={
                    "direction": "restriction",
                    "model": point,
                    "composed": composed,
                },
            )
    for index, point in enumerate(source_points):
        extension = _extension_for(embedding, point)
        ok = is_model(embedding.target, extension) and all(
            extension[embedding.injection[v]] == point[v] for v in scenario.vertices
        )
        certificates.append({"direction": "extension", "index": index, "ok": ok})
        if not ok:
            return ConditionalVerification(
                "Refuted",
                tuple(certificates),
                counterexample={
                    "direction": "extension",
                    "model": point,
                    "extension": extension,
                },
            )
    return ConditionalVerification("Verified", tuple(certificates))
