"""JSON round trips for every value the CLI reads or writes.

Rationals are serialized as normalized ``num/den`` strings so results
stay exact across tools; scenario JSON is order-insensitive on read and
canonical (lexicographic) on write.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Mapping

from .embeddings import (
    GRAPH_BIPARTITE,
    GRAPH_ODDCYCLE,
    THEOREM41,
    Embedding,
    build_graph_embedding,
    build_theorem41,
)
from .errors import ContextualityError
from .polytope import PolytopeVertexSet
from .products import ProductScenario, Rule, combine_labels
from .reductions import EquivalenceResult, VczForm
from .scenario import Model, Scenario, validate_scenario


class FormatError(ContextualityError):
    code = "FormatError"


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational: {text!r}") from exc


def scenario_to_json(scenario: Scenario) -> dict:
    return {
        "vertices": list(scenario.vertices),
        "edges": [list(e) for e in scenario.edges],
    }


def scenario_from_json(data: Any, *, warn_subset_edges: bool = False) -> Scenario:
    if not isinstance(data, Mapping) or "vertices" not in data or "edges" not in data:
        raise FormatError("scenario JSON needs 'vertices' and 'edges'")
    return validate_scenario(
        data["vertices"], data["edges"], warn_subset_edges=warn_subset_edges
    )


def model_to_json(model: Model) -> dict:
    return {
        "weights": {v: format_rational(model[v]) for v in sorted(model)}
    }


def model_from_json(data: Any) -> Model:
    if not isinstance(data, Mapping) or "weights" not in data:
        raise FormatError("model JSON needs 'weights'")
    return {v: parse_rational(w) for v, w in data["weights"].items()}


def vertex_set_to_json(vertex_set: PolytopeVertexSet) -> dict:
    return {
        "vertices": [model_to_json(m) for m in vertex_set.vertices],
        "complete": vertex_set.complete,
    }


def vcz_to_json(form: VczForm) -> dict:
    return {
        "reduced": scenario_to_json(form.reduced),
        "vertex_map": {v: form.vertex_map[v] for v in sorted(form.vertex_map)},
        "statistics": {
            "zero_vertices_removed": len(form.zero_vertices),
            "vertices_contracted": sum(
                1
                for v, rep in form.vertex_map.items()
                if rep is not None and rep != v
            ),
            "completion_edges": form.completion_size,
            "completion_edges_removed": form.completion_edges_removed,
        },
    }


def product_to_json(product: ProductScenario) -> dict:
    data = scenario_to_json(product.scenario)
    data["factors"] = [scenario_to_json(f) for f in product.factors]
    data["edge_origin"] = list(product.edge_origin)
    return data


def product_from_json(data: Any) -> ProductScenario:
    if not isinstance(data, Mapping) or "factors" not in data:
        raise FormatError("product JSON needs 'factors'")
    scenario = scenario_from_json(data)
    factors = tuple(scenario_from_json(f) for f in data["factors"])
    origins = data.get("edge_origin")
    if origins is None or len(origins) != len(scenario.edges):
        raise FormatError("product JSON needs one edge_origin entry per edge")
    coords = {}
    for combo in itertools.product(*(f.vertices for f in factors)):
        coords[combine_labels(combo)] = combo
    if set(coords) != set(scenario.vertices):
        raise FormatError("product vertices do not match the factor product")
    return ProductScenario(scenario, factors, coords, tuple(origins))


def _question_key(key: tuple[int, ...]) -> str:
    return ",".join(str(i) for i in key)


def rule_to_json(rule: Rule) -> dict:
    return {
        _question_key(key): sorted(rule.winners[key])
        for key in sorted(rule.winners)
    }


def rule_from_json(data: Any) -> Rule:
    if not isinstance(data, Mapping):
        raise FormatError("rule JSON must map question ids to winner lists")
    winners: dict[tuple[int, ...], frozenset[str]] = {}
    for raw_key, labels in data.items():
        try:
            key = tuple(int(part) for part in raw_key.split(","))
        except ValueError as exc:
            raise FormatError(f"bad question id {raw_key!r}") from exc
        winners[key] = frozenset(labels)
    return Rule(winners)


def embedding_to_json(embedding: Embedding) -> dict:
    data = {
        "kind": embedding.kind,
        "target": scenario_to_json(embedding.target),
        "injection": {v: embedding.injection[v] for v in sorted(embedding.injection)},
    }
    if embedding.edge_choice is not None:
        data["edge_choice"] = {
            v: list(embedding.edge_choice[v]) for v in sorted(embedding.edge_choice)
        }
    return data


def embedding_from_json(data: Any, source: Scenario) -> Embedding:
    """Rebuild the construction from its source scenario, then check that
    it reproduces the serialized target and injection exactly."""
    if not isinstance(data, Mapping) or "kind" not in data:
        raise FormatError("embedding JSON needs 'kind'")
    kind = data["kind"]
    if kind == THEOREM41:
        rebuilt = build_theorem41(source, data.get("edge_choice"))
    elif kind in (GRAPH_BIPARTITE, GRAPH_ODDCYCLE):
        rebuilt = build_graph_embedding(source)
    else:
        raise FormatError(f"unknown embedding kind {kind!r}")
    stored_target = scenario_from_json(data["target"])
    if (
        kind != rebuilt.kind
        or stored_target != rebuilt.target
        or dict(data["injection"]) != rebuilt.injection
    ):
        raise FormatError(
            "embedding JSON does not match the construction for this source scenario"
        )
    return rebuilt


def equivalence_to_json(result: EquivalenceResult) -> dict:
    data: dict = {"equivalent": result.equivalent}
    if result.bijection is not None:
        data["bijection"] = {w: result.bijection[w] for w in sorted(result.bijection)}
    if result.reason is not None:
        data["reason"] = result.reason
    return data
