"""Truthful maximal-in-range approximation mechanisms for multi-unit auctions."""

from .core import (
    AuctionError,
    InnerSolverBreach,
    Instance,
    InstanceTooLarge,
    InvalidAllocation,
    InvalidValuation,
    MechanismMismatch,
    MechanismResult,
    is_t_round,
    iter_allocations,
    iter_complete_allocations,
    validate_allocation,
    welfare,
)
from .half import BundleScheme, HalfMechanism, bundle_scheme, enumerate_half_range, solve_half
from .lift import (
    INNER_SOLVERS,
    InnerSolver,
    LiftMechanism,
    build_l_grid,
    check_lift_witness,
    delta_grid,
    enumerate_lift_range,
    exhaustive_k_minded_solver,
    inner_exhaustive_k_minded,
    inner_piecewise_exact,
    inner_single_bidder,
    inner_subadditive,
    lift_solve,
    piecewise_solver,
    single_bidder_solver,
    subadditive_solver,
)
from .ptas import PtasMechanism, dp_equal_bundles, enumerate_t_round_range, solve_ptas
from .testkit import (
    BruteMechanism,
    GreedyBaseline,
    MisreportReport,
    baseline_greedy_vcg,
    brute_force_opt,
    gen_onepoint,
    gen_random,
    gen_subadditive_hard,
    misreport_search,
    range_argmax_check,
)
from .valuations import (
    VALUE_CAP,
    KMindedValuation,
    MarginalPiecewiseValuation,
    QueryCountedValuation,
    TableValuation,
    Valuation,
    dump_instance,
    eval_k_minded,
    eval_marginal_piecewise,
    instance_record,
    is_subadditive,
    load_instance,
    parse_instance,
    parse_valuation,
    subadditive_closure,
    unwrap,
    valuation_record,
)
from .vcg import PAYMENT_RULES, compute_payments, solve_with_payments, utility

__version__ = "0.1.0"
