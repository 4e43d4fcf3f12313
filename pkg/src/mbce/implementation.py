"""From posterior distributions to implementing experiments.

A posterior distribution tau says how often an experiment leaves the agent
at each belief. Whether tau can be steered into a target action marginal is
a matching question: each belief can only route its mass to actions optimal
there. Three equivalent tests answer it — the core condition on menu masses
(subset sums), the demand condition on posterior masses, and exact max-flow
on the belief/action network — and the flow route is constructive: its flow
ratios are the decision rule, which then unfolds into a stochastic choice
rule and a full outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    CoreViolation,
    DimensionMismatch,
    ImplementationInfeasible,
    InfeasibleFlow,
    NotADistribution,
    NotBayesPlausible,
    StateMarginalMismatch,
    TooManyActionsForSubsetCheck,
)
from .flows import FlowMap, FlowNetwork, max_flow_feasible
from .game import (
    ActionMarginal,
    BaseGame,
    Outcome,
    StochasticChoiceRule,
    best_response_set,
    check_state_marginal,
    state_marginal_of,
)
from .polytope import Belief
from .rationals import fraction_table, fraction_vector

ZERO = Fraction(0)
ONE = Fraction(1)

# Exhaustive subset checks walk 2^|A| sets; beyond this they are refused.
MAX_ACTIONS_FOR_SUBSET_CHECK = 12

MenuMeasure = dict[frozenset[int], Fraction]
MenuRule = dict[frozenset[int], tuple[Fraction, ...]]


@dataclass(frozen=True)
class PosteriorDistribution:
    """Finitely supported distribution over beliefs; weights are positive
    and sum to one, support points are pairwise distinct."""

    support: tuple[Belief, ...]
    weights: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class DecisionRule:
    """Distribution over actions at each support belief; ``rows[i][a]``
    aligned with a PosteriorDistribution's support order."""

    rows: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SubsetCheck:
    """Outcome of a subset-sum test: ``ok``, or the first violating subset
    in size-then-lexicographic order together with its (negative) slack."""

    ok: bool
    subset: frozenset[int] | None = None
    slack: Fraction | None = None


def make_posteriors(support, weights) -> PosteriorDistribution:
    """Validate and build, coercing ints and "p/q" strings like make_game."""
    support = fraction_table(support)
    weights = fraction_vector(weights)
    if len(support) != len(weights) or not support:
        raise DimensionMismatch("support and weights must align and be nonempty")
    dim = len(support[0])
    for belief in support:
        if len(belief) != dim:
            raise DimensionMismatch("support beliefs have mixed dimensions")
        if any(q < 0 for q in belief) or sum(belief) != ONE:
            raise NotADistribution(f"support point {belief} is not a probability vector")
    if any(w <= 0 for w in weights) or sum(weights) != ONE:
        raise NotADistribution("weights must be positive and sum to 1")
    if len(set(support)) != len(support):
        raise NotADistribution("support points must be pairwise distinct")
    return PosteriorDistribution(support=support, weights=weights)


def is_bayes_plausible(tau: PosteriorDistribution, prior) -> bool:
    """True iff the weighted posteriors average back to the prior exactly."""
    dim = len(tau.support[0])
    if len(prior) != dim:
        raise DimensionMismatch("prior and posteriors have different dimensions")
    for t in range(dim):
        mean = sum((w * mu[t] for w, mu in zip(tau.weights, tau.support)), ZERO)
        if mean != prior[t]:
            return False
    return True


def menu_measure(tau: PosteriorDistribution, game: BaseGame) -> MenuMeasure:
    """Aggregate tau's weight by exact best-response set ("menu")."""
    menus: MenuMeasure = {}
    for mu, w in zip(tau.support, tau.weights):
        menu = best_response_set(game, mu)
        menus[menu] = menus.get(menu, ZERO) + w
    return menus


def _subsets_in_order(n_actions: int, caller: str):
    if n_actions > MAX_ACTIONS_FOR_SUBSET_CHECK:
        raise TooManyActionsForSubsetCheck(
            f"{caller} enumerates 2^{n_actions} subsets; "
            f"refusing beyond {MAX_ACTIONS_FOR_SUBSET_CHECK} actions"
        )
    for size in range(1, n_actions + 1):
        for combo in combinations(range(n_actions), size):
            yield frozenset(combo)


def core_check(marginal: ActionMarginal, menus: MenuMeasure) -> SubsetCheck:
    """Menu masses must fit inside the action mass of every subset.

    For each nonempty subset B of actions, the total mass of menus entirely
    inside B may not exceed the marginal mass on B.
    """
    n_actions = len(marginal.probs)
    for subset in _subsets_in_order(n_actions, "core_check"):
        lhs = sum((marginal.probs[a] for a in subset), ZERO)
        rhs = sum((w for menu, w in menus.items() if menu <= subset), ZERO)
        if lhs < rhs:
            return SubsetCheck(ok=False, subset=subset, slack=lhs - rhs)
    return SubsetCheck(ok=True)


def demand_check(
    marginal: ActionMarginal, tau: PosteriorDistribution, game: BaseGame
) -> SubsetCheck:
    """Posteriors offering an action in B must carry at least B's mass.

    The complement view of core_check; the two verdicts always agree.
    """
    if len(marginal.probs) != game.n_actions:
        raise DimensionMismatch("marginal length does not match the game")
    menus = [best_response_set(game, mu) for mu in tau.support]
    for subset in _subsets_in_order(game.n_actions, "demand_check"):
        supply = sum(
            (w for menu, w in zip(menus, tau.weights) if menu & subset),
            ZERO,
        )
        need = sum((marginal.probs[a] for a in subset), ZERO)
        if supply < need:
            return SubsetCheck(ok=False, subset=subset, slack=supply - need)
    return SubsetCheck(ok=True)


def build_gale_network(
    tau: PosteriorDistribution, marginal: ActionMarginal, game: BaseGame
) -> FlowNetwork:
    """Posterior beliefs supply their tau weight; actions demand their
    marginal mass; an edge exists exactly where the action is optimal at the
    belief. Unbounded capacities are written as 1, the total mass in play."""
    supplies = tuple(
        (("posterior", i), w) for i, w in enumerate(tau.weights)
    )
    demands = tuple(
        (("action", a), q) for a, q in enumerate(marginal.probs)
    )
    edges = []
    for i, mu in enumerate(tau.support):
        for a in sorted(best_response_set(game, mu)):
            edges.append((("posterior", i), ("action", a), ONE))
    return FlowNetwork(supplies=supplies, demands=demands, edges=tuple(edges))


def decision_rule_from_flow(
    flow: FlowMap, tau: PosteriorDistribution, n_actions: int
) -> DecisionRule:
    """Normalize each posterior's outgoing flow into action probabilities."""
    if flow is None:
        raise InfeasibleFlow("no flow to normalize; the demands were not met")
    rows = []
    for i, w in enumerate(tau.weights):
        row = [ZERO] * n_actions
        for a in range(n_actions):
            f = flow.get((("posterior", i), ("action", a)))
            if f:
                row[a] = f / w
        rows.append(tuple(row))
    return DecisionRule(rows=tuple(rows))


def menu_rule_from_core(menus: MenuMeasure, marginal: ActionMarginal) -> MenuRule:
    """Split each menu's mass across its actions so the splits add up to the
    marginal, by max-flow on the action/menu network (actions supply their
    marginal mass, menus demand their measure, unit edges where a is in B)."""
    supplies = tuple(
        (("action", a), q) for a, q in enumerate(marginal.probs)
    )
    menu_order = sorted(menus, key=lambda m: (len(m), sorted(m)))
    demands = tuple((("menu", menu), menus[menu]) for menu in menu_order)
    edges = []
    for menu in menu_order:
        for a in sorted(menu):
            edges.append((("action", a), ("menu", menu), ONE))
    feasible, flow = max_flow_feasible(
        FlowNetwork(supplies=supplies, demands=demands, edges=tuple(edges))
    )
    if not feasible:
        witness = core_check(marginal, menus)
        raise CoreViolation(witness.subset, witness.slack)
    n_actions = len(marginal.probs)
    rule: MenuRule = {}
    for menu in menu_order:
        mass = menus[menu]
        row = [ZERO] * n_actions
        for a in sorted(menu):
            f = flow.get((("action", a), ("menu", menu)), ZERO)
            if f:
                row[a] = f / mass
        rule[menu] = tuple(row)
    return rule


def choice_rule_from_tau(
    tau: PosteriorDistribution, rule: DecisionRule, prior
) -> StochasticChoiceRule:
    """Mix the decision rule over posteriors, reweighted by how much each
    posterior moves each state relative to the prior."""
    n_actions = len(rule.rows[0]) if rule.rows else 0
    rows = []
    for t, p in enumerate(prior):
        row = [ZERO] * n_actions
        for i, (mu, w) in enumerate(zip(tau.support, tau.weights)):
            if mu[t] == 0:
                continue
            factor = w * mu[t] / p
            for a in range(n_actions):
                if rule.rows[i][a]:
                    row[a] += factor * rule.rows[i][a]
        rows.append(tuple(row))
    return StochasticChoiceRule(rows=tuple(rows))


def outcome_from_tau(
    tau: PosteriorDistribution, rule: DecisionRule, prior
) -> Outcome:
    """Joint distribution ``prior(t) * sigma(a|t)`` induced by (tau, rule)."""
    sigma = choice_rule_from_tau(tau, rule, prior)
    n_actions = len(rule.rows[0]) if rule.rows else 0
    probs = tuple(
        tuple(prior[t] * sigma.rows[t][a] for t in range(len(prior)))
        for a in range(n_actions)
    )
    return Outcome(probs=probs)


def tau_from_outcome(
    outcome: Outcome, prior
) -> tuple[PosteriorDistribution, DecisionRule]:
    """Read the experiment back out of an outcome.

    Each positively recommended action contributes its conditional belief
    with its marginal mass. Coincident beliefs are merged; the decision rule
    records how the merged mass splits across the originating actions, so
    rebuilding the outcome from (tau, rule) is an exact identity.
    """
    if not check_state_marginal(outcome, tuple(prior)):
        raise StateMarginalMismatch(
            f"outcome's state marginal {state_marginal_of(outcome)} is not the prior"
        )
    n_actions = outcome.n_actions
    support: list[Belief] = []
    weights: list[Fraction] = []
    splits: list[dict[int, Fraction]] = []
    index: dict[Belief, int] = {}
    for a, row in enumerate(outcome.probs):
        mass = sum(row, ZERO)
        if mass == 0:
            continue
        belief = tuple(q / mass for q in row)
        if belief in index:
            i = index[belief]
            weights[i] += mass
            splits[i][a] = splits[i].get(a, ZERO) + mass
        else:
            index[belief] = len(support)
            support.append(belief)
            weights.append(mass)
            splits.append({a: mass})
    rows = tuple(
        tuple(splits[i].get(a, ZERO) / weights[i] for a in range(n_actions))
        for i in range(len(support))
    )
    tau = PosteriorDistribution(support=tuple(support), weights=tuple(weights))
    return tau, DecisionRule(rows=rows)


def implement_marginal(
    game: BaseGame, marginal: ActionMarginal, tau: PosteriorDistribution
) -> Outcome:
    """Steer tau into the target marginal and return the full outcome.

    Checks the demand condition first so failures carry a violating subset;
    on success the flow is guaranteed to exist, and the outcome inherits
    obedience from routing mass only to optimal actions.
    """
    if len(marginal.probs) != game.n_actions:
        raise DimensionMismatch("marginal length does not match the game")
    if not is_bayes_plausible(tau, game.prior):
        raise NotBayesPlausible("posterior distribution does not average to the prior")
    verdict = demand_check(marginal, tau, game)
    if not verdict.ok:
        # Report the violation in menu-mass form: it names the overfull
        # action subset rather than the underfed one, which reads better.
        core = core_check(marginal, menu_measure(tau, game))
        if core.ok:  # the two tests are equivalent; disagreement is a bug
            raise AssertionError("demand check failed but core check passed")
        raise ImplementationInfeasible(core.subset, core.slack)
    network = build_gale_network(tau, marginal, game)
    feasible, flow = max_flow_feasible(network)
    if not feasible:  # demand_check passing guarantees a flow; a miss is a bug
        raise AssertionError("demand condition passed but the flow fell short")
    rule = decision_rule_from_flow(flow, tau, game.n_actions)
    return outcome_from_tau(tau, rule, game.prior)
