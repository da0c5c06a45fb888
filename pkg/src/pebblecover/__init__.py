"""Exact graph pebbling toolkit focused on cover pebbling of hypercubes."""

from .decider import DeciderResult, SearchBudget, Verdict, can_reach, is_coverable
from .graphs import (
    Graph,
    build_complete,
    build_hypercube,
    build_path,
    cartesian_product,
    cube_canonical,
    cube_cut,
    parse_graph_spec,
)
from .pebbling import (
    BranchTag,
    PebbleMove,
    apply_move,
    classify,
    is_good,
    simple_bound,
    simple_cost,
    size,
    support,
    verify_cover_sequence,
)
from .strategist import StrategyTrace, cover_strategy

__version__ = "0.1.0"
