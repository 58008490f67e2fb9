"""Clearing and cash-injection planning for borrower-lender networks."""

from .network import (
    Allocation,
    ClearingError,
    ClearingOutcome,
    LiabilityNetwork,
    NetworkValidationError,
    RelativeLiabilities,
    clearing_uniqueness_gap,
    clearing_vector,
    default_tolerance,
    outcome_metrics,
    picard_clearing,
    relative_liabilities,
    validate,
)
from .fileio import (
    NetworkFormatError,
    allocation_from_doc,
    load_allocation,
    load_network,
    network_from_doc,
    network_to_doc,
    save_network,
)
from .lp import (
    EQUAL,
    GREATER_EQUAL,
    INFEASIBLE,
    LESS_EQUAL,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    LpError,
    LpNumericalError,
    LpSolution,
    enumerate_vertices_oracle,
    reoptimize,
    solve,
    solve_with_state,
)
from .optimize import (
    OptimizationResult,
    ReweightParams,
    build_bailout_lp,
    minimize_defaults,
    minimize_unpaid,
    minimize_unpaid_lagrangian,
    reweight_update,
)
from .benchmark import (
    TreeSpec,
    binary_tree_network,
    generalized_tree_defaults,
    optimal_tree_defaults,
    reproduce_figure,
)

__version__ = "0.1.0"

__all__ = [
    "EQUAL",
    "GREATER_EQUAL",
    "INFEASIBLE",
    "LESS_EQUAL",
    "OPTIMAL",
    "UNBOUNDED",
    "Allocation",
    "ClearingError",
    "ClearingOutcome",
    "Constraint",
    "LiabilityNetwork",
    "LinearProgram",
    "LpError",
    "LpNumericalError",
    "LpSolution",
    "NetworkFormatError",
    "NetworkValidationError",
    "OptimizationResult",
    "RelativeLiabilities",
    "ReweightParams",
    "TreeSpec",
    "allocation_from_doc",
    "binary_tree_network",
    "build_bailout_lp",
    "clearing_uniqueness_gap",
    "clearing_vector",
    "default_tolerance",
    "enumerate_vertices_oracle",
    "generalized_tree_defaults",
    "load_allocation",
    "load_network",
    "minimize_defaults",
    "minimize_unpaid",
    "minimize_unpaid_lagrangian",
    "network_from_doc",
    "network_to_doc",
    "optimal_tree_defaults",
    "outcome_metrics",
    "picard_clearing",
    "relative_liabilities",
    "reoptimize",
    "reproduce_figure",
    "reweight_update",
    "save_network",
    "solve",
    "solve_with_state",
    "validate",
]
