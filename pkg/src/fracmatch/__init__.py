"""Exact-arithmetic workbench for online fractional matching at low degree."""

from .golden import (
    GUARANTEE,
    GoldenNumber,
    Rat,
    decimal_str,
    fibonacci,
    guarantee,
    ideal_path_value,
)
from .engine import (
    BridgeCase,
    DegreeViolation,
    DuplicateEdge,
    ImpossibleCombination,
    InvariantReport,
    MatchState,
    SelfLoop,
    arrive,
    check_invariants,
    classify,
    orient,
    residual,
    run_stream,
    type_vector,
)
from .instances import (
    ArrivalStream,
    InstanceError,
    builtin_instance,
    consistent_instance,
    degree4_instance,
    integral_hard_instance,
    load_instance,
    minindex_family1,
    minindex_family2,
    random_stream,
    save_instance,
)
from .matching import (
    IncrementalMatching,
    RatioTrace,
    competitive_trace,
    max_matching,
    max_matching_bruteforce,
)
from .minindex import (
    MinIndexState,
    minindex_expected,
    minindex_feed,
    minindex_new,
    minindex_run,
)
from .lp import (
    LinearProgram,
    LpSolution,
    build_deg4_lp,
    build_integral_deg3_lp,
    build_minindex_lp,
    enumerate_vertices,
    simplex_max,
)

__all__ = [name for name in dir() if not name.startswith("_")]
