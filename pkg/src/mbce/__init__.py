"""Exact solver for marginal consistency with Bayes correlated equilibrium.

Given a finite base game, the library decides whether a prior over states and
a marginal over actions can arise together from some Bayes correlated
equilibrium, returns an exact certificate either way, and constructs
implementing experiments (posterior distributions plus decision rules) via
network flows. Public-information and ring-network multi-agent problems
reduce to the single-agent machinery.

All arithmetic is over ``fractions.Fraction``; verdicts are exact, never
tolerance-based.
"""

from __future__ import annotations

from .applications import (
    FirstOrderGame,
    MarginalProfile,
    PlayerSpec,
    RingGame,
    RingOutcome,
    RingVerdict,
    action_profiles,
    auxiliary_single_agent,
    check_public_bce,
    check_ring,
    check_ring_obedience,
    construct_ring_outcome,
    make_first_order,
    make_profile,
    make_ring,
    player_game,
    ring_pair_marginal,
    ring_player_marginal,
    ring_stage_game,
)
from .consistency import (
    ACTION_PAIR_CONDITION,
    STATE_CONDITION,
    STRASSEN_DIRECTION,
    UNSUPPORTABLE_ACTION,
    ConsistencyVerdict,
    ViolationCertificate,
    action_pair_residual,
    belief_decomposition,
    check_bce_consistent,
    oracle_feasibility,
    separating_direction,
    state_condition_residual,
    strassen_residual,
)
from .errors import (
    DimensionMismatch,
    EmptyPolytope,
    ImplementationInfeasible,
    MbceError,
    NotADistribution,
    ParseError,
    UnsupportableAction,
    ValidationError,
)
from .game import (
    ActionMarginal,
    BaseGame,
    BeliefSystem,
    ObedienceReport,
    ObedienceViolation,
    Outcome,
    StochasticChoiceRule,
    action_marginal_of,
    belief_system_from_outcome,
    best_response_set,
    check_action_marginal,
    check_obedience,
    check_state_marginal,
    choice_rule_from_outcome,
    expected_utility,
    make_game,
    make_marginal,
    make_outcome,
    matching_game,
    state_marginal_of,
    validate_game,
    validate_marginal,
    validate_outcome,
)
from .generators import XorShift64, random_game, random_marginal, random_posteriors
from .implementation import (
    DecisionRule,
    PosteriorDistribution,
    build_gale_network,
    core_check,
    demand_check,
    implement_marginal,
    is_bayes_plausible,
    make_posteriors,
    menu_measure,
    menu_rule_from_core,
    outcome_from_tau,
    tau_from_outcome,
)
from .io import Report, load_game, load_report, save_report
from .polytope import (
    BeliefPolytope,
    enumerate_vertices,
    is_empty,
    maximize_direction,
    opt_belief_polytope,
)

__all__ = [
    "ACTION_PAIR_CONDITION",
    "ActionMarginal",
    "BaseGame",
    "BeliefPolytope",
    "BeliefSystem",
    "ConsistencyVerdict",
    "DecisionRule",
    "DimensionMismatch",
    "EmptyPolytope",
    "FirstOrderGame",
    "ImplementationInfeasible",
    "MarginalProfile",
    "MbceError",
    "NotADistribution",
    "ObedienceReport",
    "ObedienceViolation",
    "Outcome",
    "ParseError",
    "PlayerSpec",
    "PosteriorDistribution",
    "Report",
    "RingGame",
    "RingOutcome",
    "RingVerdict",
    "STATE_CONDITION",
    "STRASSEN_DIRECTION",
    "StochasticChoiceRule",
    "UNSUPPORTABLE_ACTION",
    "UnsupportableAction",
    "ValidationError",
    "ViolationCertificate",
    "XorShift64",
    "action_marginal_of",
    "action_pair_residual",
    "action_profiles",
    "auxiliary_single_agent",
    "belief_decomposition",
    "belief_system_from_outcome",
    "best_response_set",
    "build_gale_network",
    "check_action_marginal",
    "check_bce_consistent",
    "check_obedience",
    "check_public_bce",
    "check_ring",
    "check_ring_obedience",
    "check_state_marginal",
    "choice_rule_from_outcome",
    "construct_ring_outcome",
    "core_check",
    "demand_check",
    "enumerate_vertices",
    "expected_utility",
    "implement_marginal",
    "is_bayes_plausible",
    "is_empty",
    "load_game",
    "load_report",
    "make_first_order",
    "make_game",
    "make_marginal",
    "make_outcome",
    "make_posteriors",
    "make_profile",
    "make_ring",
    "matching_game",
    "maximize_direction",
    "menu_measure",
    "menu_rule_from_core",
    "opt_belief_polytope",
    "oracle_feasibility",
    "outcome_from_tau",
    "player_game",
    "random_game",
    "random_marginal",
    "random_posteriors",
    "ring_pair_marginal",
    "ring_player_marginal",
    "ring_stage_game",
    "save_report",
    "separating_direction",
    "state_condition_residual",
    "state_marginal_of",
    "strassen_residual",
    "tau_from_outcome",
    "validate_game",
    "validate_marginal",
    "validate_outcome",
]
