"""Exact-arithmetic toolkit for hypergraph contextuality.

Scenarios are labeled hypergraphs (edges = measurements, vertices =
outcomes). The package computes their model polytopes exactly, reduces
scenarios to VCZ canonical form, builds Foulis-Randall products and
games, and constructs and verifies conditional-contextuality embeddings
into bipartite games.
"""

from .embeddings import (
    ConditionalVerification,
    Embedding,
    build_graph_embedding,
    build_theorem41,
    extend_model,
    verify_conditional,
)
from .errors import ContextualityError
from .polytope import (
    LpResult,
    PolytopeVertexSet,
    ce1_check,
    enumerate_model_vertices,
    has_model,
    is_classical_model,
    is_model,
    optimize_weight,
)
from .products import (
    ProductScenario,
    Rule,
    apply_rule,
    check_no_signaling,
    fr_product_bipartite,
    fr_product_complete,
    fr_product_min,
    joint_measurement_edges,
    questions,
)
from .reductions import (
    ContractiblePartition,
    EquivalenceResult,
    VczForm,
    completion,
    contractible_partition,
    enumerate_virtual_edges,
    is_virtual_edge,
    observational_equivalence,
    vcz_reduce,
    zero_weighted_vertices,
)
from .scenario import (
    InducedSubhypergraph,
    Model,
    PartyScenario,
    Scenario,
    build_party,
    enumerate_deterministic_models,
    induced_subhypergraph,
    orthogonality_pairs,
    subset_weight,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionalVerification",
    "ContextualityError",
    "ContractiblePartition",
    "Embedding",
    "EquivalenceResult",
    "InducedSubhypergraph",
    "LpResult",
    "Model",
    "PartyScenario",
    "PolytopeVertexSet",
    "ProductScenario",
    "Rule",
    "Scenario",
    "VczForm",
    "apply_rule",
    "build_graph_embedding",
    "build_party",
    "build_theorem41",
    "ce1_check",
    "check_no_signaling",
    "completion",
    "contractible_partition",
    "enumerate_deterministic_models",
    "enumerate_model_vertices",
    "enumerate_virtual_edges",
    "extend_model",
    "fr_product_bipartite",
    "fr_product_complete",
    "fr_product_min",
    "has_model",
    "induced_subhypergraph",
    "is_classical_model",
    "is_model",
    "is_virtual_edge",
    "joint_measurement_edges",
    "observational_equivalence",
    "optimize_weight",
    "orthogonality_pairs",
    "questions",
    "subset_weight",
    "validate_scenario",
    "vcz_reduce",
    "verify_conditional",
    "zero_weighted_vertices",
]
