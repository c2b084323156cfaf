"""Minimum-links influence solvers for the deterministic threshold model."""

from minlinks.errors import BudgetError, InputError, ParseError, SizeError
from minlinks.exact import (
    ml_clique,
    ml_cycle,
    ml_tree,
    solve_clique,
    solve_cycle,
    solve_tree,
)
from minlinks.feasibility import (
    classify_topology,
    feasible_clique,
    feasible_cycle,
    feasible_generic,
    feasible_tree,
    violates_degree_bound,
)
from minlinks.graph import (
    DiffusionTrace,
    Graph,
    SolveOutcome,
    Status,
    is_pervading,
    simulate,
)
from minlinks.oracle import (
    brute_min_links,
    brute_min_links_all_optima,
    brute_target_set,
)
from minlinks.tpi import TpiReport, tpi, tpi_bound

__all__ = [
    "BudgetError",
    "DiffusionTrace",
    "Graph",
    "InputError",
    "ParseError",
    "SizeError",
    "SolveOutcome",
    "Status",
    "TpiReport",
    "brute_min_links",
    "brute_min_links_all_optima",
    "brute_target_set",
    "classify_topology",
    "feasible_clique",
    "feasible_cycle",
    "feasible_generic",
    "feasible_tree",
    "is_pervading",
    "ml_clique",
    "ml_cycle",
    "ml_tree",
    "simulate",
    "solve_clique",
    "solve_cycle",
    "solve_tree",
    "tpi",
    "tpi_bound",
    "violates_degree_bound",
]
