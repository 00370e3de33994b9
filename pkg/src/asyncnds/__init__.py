"""Incremental non-dominated sorting with concurrent insertion strategies."""

from .core import Dominance, Ordering, Point, UsageError, compare_dominance, crowding_distance, dominates, lex_compare, nadir
from .inds import InvariantError, QueryResult, RankedPopulation, levels_from_points
from .level import Level
from .offline import brute_force_ranks, helper_b_merge, merge_two_antichains, sort_ranks

__version__ = "0.1.0"

__all__ = [
    "Dominance", "InvariantError", "Level", "Ordering", "Point", "QueryResult", "RankedPopulation",
    "UsageError", "brute_force_ranks", "compare_dominance", "crowding_distance", "dominates",
    "helper_b_merge", "levels_from_points", "lex_compare", "merge_two_antichains", "nadir",
    "sort_ranks",
]
