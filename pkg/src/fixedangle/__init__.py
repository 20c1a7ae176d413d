"""Fixed-angle QAOA for MaxCut on regular graphs.

Angles optimized once on the tree subgraph of a ``d``-regular graph are
reused on every ``d``-regular graph. This package simulates those circuits
(dense statevector and tensor-network contraction over edge lightcones),
optimizes tree angles, and compares against exact and Goemans-Williamson
MaxCut.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError,
    DataError,
    FixedAngleError,
    Graph6Error,
    NotAvailableError,
    ValidationError,
)
from .graphs import (  # noqa: E402
    EdgeSubgraph,
    Graph,
    TreeSpec,
    edge_lightcone,
    encode_graph6,
    girth,
    load_cubic_corpus,
    parse_graph6,
    random_regular,
    tree_subgraph,
)
from .statevec import QaoaAngles, simulate_expectation  # noqa: E402
from .engine import EvalReport, Evaluator, evaluate, guarantee  # noqa: E402
from .classical import approximation_ratio, goemans_williamson, maxcut_exact, performance_ratio  # noqa: E402
from .angles import FixedAngleEntry, Registry, builtin_table, verify_conjecture  # noqa: E402
from .optimize import optimize_tree_angles  # noqa: E402

__all__ = [
    "CapacityError", "DataError", "FixedAngleError", "Graph6Error", "NotAvailableError", "ValidationError",
    "EdgeSubgraph", "Graph", "TreeSpec", "edge_lightcone", "encode_graph6", "girth", "load_cubic_corpus",
    "parse_graph6", "random_regular", "tree_subgraph", "QaoaAngles", "simulate_expectation",
    "EvalReport", "Evaluator", "evaluate", "guarantee", "approximation_ratio", "goemans_williamson",
    "maxcut_exact", "performance_ratio", "FixedAngleEntry", "Registry", "builtin_table",
    "verify_conjecture", "optimize_tree_angles",
]
