"""Approximate solver for augmenting a forest to a 2-edge-connected graph."""

from .credits import AuditReport, CreditLedger, audit_run, compute_credits
from .driver import CombinedSolution, bench, pap_track, solve_combined
from .errors import (
    AssertionFailure,
    BudgetExceeded,
    CoverageFailure,
    FapkitError,
    Infeasible,
    InfeasibleWitness,
    InputError,
    InternalDefect,
    InvalidPartition,
    MalformedEdge,
    NoTrailTarget,
    NotAForest,
    UnsatisfiableProfile,
)
from .generate import FAMILIES, GeneratorProfile, generate
from .graph import (
    BlockDecomposition,
    ContractedView,
    Edge,
    Graph,
    contract,
    decompose,
    is_two_edge_connected,
)
from .instance import (
    Instance,
    parse_instance,
    parse_solution,
    render_instance,
    render_solution,
    validate,
)
from .matching import initial_partial_solution, max_matching
from .oracle import Budget, OracleResult, solve_exact_fap, solve_exact_wtap
from .pap import PapResult, StepRecord, solve_pap
from .tap import TapTrackResult, solve_tap_track

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "AssertionFailure",
    "BlockDecomposition",
    "Budget",
    "BudgetExceeded",
    "CombinedSolution",
    "ContractedView",
    "CoverageFailure",
    "CreditLedger",
    "Edge",
    "FAMILIES",
    "FapkitError",
    "GeneratorProfile",
    "Graph",
    "Infeasible",
    "InfeasibleWitness",
    "InputError",
    "Instance",
    "InternalDefect",
    "InvalidPartition",
    "MalformedEdge",
    "NoTrailTarget",
    "NotAForest",
    "OracleResult",
    "PapResult",
    "StepRecord",
    "TapTrackResult",
    "UnsatisfiableProfile",
    "audit_run",
    "bench",
    "compute_credits",
    "contract",
    "decompose",
    "generate",
    "initial_partial_solution",
    "is_two_edge_connected",
    "max_matching",
    "pap_track",
    "parse_instance",
    "parse_solution",
    "render_instance",
    "render_solution",
    "solve_combined",
    "solve_exact_fap",
    "solve_exact_wtap",
    "solve_pap",
    "solve_tap_track",
    "validate",
]
