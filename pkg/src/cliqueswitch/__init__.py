"""Monotone switching for k-CLIQUE, checked exhaustively at desk scale.

Edge sets are Python ``int`` bitmasks over lexicographically ranked pairs of
``{0, ..., n-1}``; truth tables are boolean numpy matrices with one row per
input graph.
"""
from .checks import SUITES, CheckResult
from .circuits import (
    CircuitBuilder,
    FlatCNF,
    FlatDNF,
    LayeredCircuit,
    MonotoneCircuit,
    apply_restriction,
    as_flat,
    build_dnf,
    evaluate,
    measure,
    normalize_alternating,
    simplify_cnf,
    truth_table,
)
from .cliques import (
    CliqueFamily,
    MaximalFreeFamily,
    clique_cnf,
    clique_implication_set,
    clique_implication_set_definitional,
    clique_indicator,
    enumerate_maximal_clique_free,
    extend_maximal,
    is_maximal_clique_free,
)
from .errors import DomainError, ResourceError
from .graphs import (
    Graph,
    Restriction,
    RngStream,
    clique_edges,
    compose,
    edge_id,
    edge_pair,
    has_k_clique,
    restriction_to_graph,
    sample_er_graph,
    sample_restriction,
)
from .pipeline import (
    PipelineParams,
    asymptotic_schedule,
    clique_appearance_bound,
    clique_gap_experiment,
    estimate_satisfaction,
    run_pipeline,
    select_disjoint_monomials,
)
from .switching import (
    UnswitchFailure,
    build_trees,
    check_tree_relations,
    cnf_to_dnf,
    depth_for_width,
    dnf_to_cnf,
    transversal_tree,
)

__version__ = "0.1.0"

__all__ = [
    "CircuitBuilder",
    "FlatCNF",
    "FlatDNF",
    "LayeredCircuit",
    "MonotoneCircuit",
    "apply_restriction",
    "as_flat",
    "build_dnf",
    "evaluate",
    "measure",
    "normalize_alternating",
    "simplify_cnf",
    "truth_table",
    "CliqueFamily",
    "MaximalFreeFamily",
    "clique_cnf",
    "clique_implication_set",
    "clique_implication_set_definitional",
    "clique_indicator",
    "enumerate_maximal_clique_free",
    "extend_maximal",
    "is_maximal_clique_free",
    "Graph",
    "Restriction",
    "RngStream",
    "clique_edges",
    "compose",
    "edge_id",
    "edge_pair",
    "has_k_clique",
    "restriction_to_graph",
    "sample_er_graph",
    "sample_restriction",
    "PipelineParams",
    "asymptotic_schedule",
    "clique_appearance_bound",
    "clique_gap_experiment",
    "estimate_satisfaction",
    "run_pipeline",
    "select_disjoint_monomials",
    "UnswitchFailure",
    "build_trees",
    "check_tree_relations",
    "cnf_to_dnf",
    "depth_for_width",
    "dnf_to_cnf",
    "transversal_tree",
    "SUITES",
    "CheckResult",
    "DomainError",
    "ResourceError",
]
