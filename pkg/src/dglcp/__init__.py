"""Discounted games solved exactly through linear complementarity problems."""

from .bench import (
    ExperimentConfig,
    ExperimentReport,
    FamilyRange,
    derive_seed,
    fit_growth,
    run_experiment,
)
from .game import (
    DiscountedGame,
    Edge,
    Owner,
    Strategy,
    brute_force_equilibrium,
    evaluate_profile,
    make_game,
    validate_game,
    value_iteration,
)
from .instances import (
    CD_FAMILY,
    LEMKE_FAMILY,
    RANDOM_FAMILY,
    FamilySpec,
    RandomGameParams,
    gen_cd_lower_bound,
    gen_lemke_lower_bound,
    gen_random_binary_game,
)
from .lcp import (
    LCPInstance,
    LCPSolution,
    PivotTrace,
    Tableau,
    check_solution,
    complementary_solutions,
    init_tableau,
    is_p_matrix,
    lex_ratio_test,
    pivot,
)
from .reduction import ReductionCertificate, lift_solution, reduce_to_lcp, strategy_tie_audit
from .solvers import (
    CoveringVector,
    IndexOrdering,
    cottle_dantzig_solve,
    lemke_solve,
    realize_covering,
    realize_ordering,
)

__version__ = "0.1.0"
