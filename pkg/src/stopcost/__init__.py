"""Optimal threshold rules for the rank-based best-choice problem with a cost of choice."""

__version__ = "0.1.0"

from .model import (
    CostError,
    HorizonError,
    ProblemSpec,
    StopCostError,
    TieError,
    TimeIndexError,
    Variant,
    conditional_payoff,
    expected_cost,
    immediate_payoff,
    relative_rank_sequence,
    terminal_value,
    validate_spec,
)
from .chain import (
    absorb_probability,
    apply_T,
    apply_T_pair,
    horizon_lump_probability,
    operator_table,
    transition_probability,
)
from .solver import (
    ExactModeBoundError,
    MonotoneReport,
    NumericMode,
    SolveResult,
    ThresholdRule,
    exact_solve,
    ola_threshold,
    pair_stopping_set,
    pair_value_table,
    rule_value,
    solve,
    verify_monotone_case,
)
from .asymptotics import (
    AsymptoticSolution,
    ConvergenceError,
    DomainError,
    asymptotic_solution,
    convergence_report,
    limit_functions,
    limiting_value,
    threshold_equation_root,
)
from .simulator import (
    OracleBoundError,
    SimulationEstimate,
    TrajectorySample,
    chain_consistency_check,
    estimate_value,
    exhaustive_oracle,
    make_rng,
    simulate_once,
)
