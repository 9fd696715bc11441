"""Decision-tree search strategies for locating a hidden vertex in a graph
under non-uniform query-cost models: exact desk-scale solvers, approximation
algorithms with certified bounds, and a benchmark harness tying them together.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .core import (
    CostModel,
    DecisionTree,
    Graph,
    GraphSearchError,
    LevelDecomposition,
    LimitExceededError,
    PairwiseCost,
    ParseError,
    SearchInstance,
    SolverError,
    UnsupportedModelError,
    ValidationError,
    VertexCost,
    average_cost,
    decompose_levels,
    evaluate_target_cost,
    generate,
    parse_decision_tree,
    parse_instance,
    serialize_decision_tree,
    serialize_instance,
    validate_decision_tree,
    validate_instance,
    worst_cost,
)

__version__ = "0.1.0"

__all__ = [
    "CostModel",
    "DecisionTree",
    "Graph",
    "GraphSearchError",
    "KERNEL_BACKEND",
    "LevelDecomposition",
    "LimitExceededError",
    "PairwiseCost",
    "ParseError",
    "SearchInstance",
    "SolverError",
    "UnsupportedModelError",
    "ValidationError",
    "VertexCost",
    "average_cost",
    "decompose_levels",
    "evaluate_target_cost",
    "generate",
    "parse_decision_tree",
    "parse_instance",
    "serialize_decision_tree",
    "serialize_instance",
    "validate_decision_tree",
    "validate_instance",
    "worst_cost",
]
