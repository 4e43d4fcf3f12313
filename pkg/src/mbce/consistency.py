"""Deciding whether a prior/action-marginal pair is reachable in equilibrium.

Two independent routes answer the same question. The characterization route
works in belief space: it screens the named direction families first (state
conditions and action-pair conditions, both instances of a single family of
support-function inequalities indexed by directions), then decides membership
of the prior in the marginal-weighted mixture of the belief polytopes by an
exact feasibility program over their vertices. The named families are
necessary but not sufficient once beliefs have three or more degrees of
freedom: a pair can satisfy every state and action-pair inequality yet fail
along a direction outside both families, so the vertex program is what
actually closes the decision. When it fails, a separating direction with
strictly negative ``strassen_residual`` certifies the verdict.

The oracle route feeds the full joint system (obedience plus both marginals)
to the exact LP, never touching the polytope machinery. The two routes must
agree exactly; the test suite holds them to that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyPolytope, UnsupportableAction
from .game import ActionMarginal, BaseGame, Outcome, validate_game, validate_marginal
from .linprog import (
    EQUAL,
    GREATER_EQUAL,
    LESS_EQUAL,
    OPTIMAL,
    Constraint,
    lp_feasible,
    lp_solve,
)
from .polytope import (
    BeliefPolytope,
    Direction,
    dot,
    enumerate_vertices,
    is_empty,
    maximize_direction,
    negate,
    opt_belief_polytope,
    unit_direction,
    utility_difference_direction,
)

ZERO = Fraction(0)

STATE_CONDITION = "state-condition"
ACTION_PAIR_CONDITION = "action-pair-condition"
UNSUPPORTABLE_ACTION = "unsupportable-action"
STRASSEN_DIRECTION = "strassen-direction"


@dataclass(frozen=True)
class ViolationCertificate:
    """Why a marginal pair is unreachable.

    For the three direction-backed kinds, ``direction`` plugged into
    ``strassen_residual`` reproduces ``residual`` exactly; the
    strassen-direction kind covers violations outside the two named families.
    An unsupportable action (positive mass, optimal nowhere) has no finite
    residual; both optional fields stay None.
    """

    kind: str
    state: int | None = None
    pair: tuple[int, int] | None = None
    action: int | None = None
    residual: Fraction | None = None
    direction: Direction | None = None


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Decision plus exactly one certificate branch: a witness outcome when
    consistent, a violation certificate when not."""

    consistent: bool
    witness: Outcome | None = None
    violation: ViolationCertificate | None = None


def _supported(marginal: ActionMarginal) -> list[int]:
    return [a for a, q in enumerate(marginal.probs) if q > 0]


def _polytopes_for(
    game: BaseGame, actions: list[int]
) -> dict[int, BeliefPolytope]:
    return {a: opt_belief_polytope(game, a) for a in actions}


def _max_over(poly: BeliefPolytope, c: Direction, action: int, debug: bool) -> Fraction:
    try:
        value, _ = maximize_direction(poly, c)
    except EmptyPolytope:
        raise UnsupportableAction(action) from None
    if debug:
        vertex_value = max(dot(c, v) for v in enumerate_vertices(poly))
        assert vertex_value == value, "LP and vertex scan disagree"
    return value


def strassen_residual(
    game: BaseGame,
    marginal: ActionMarginal,
    c: Direction,
    polytopes: dict[int, BeliefPolytope] | None = None,
    debug: bool = False,
) -> Fraction:
    """Support-function slack along direction c.

    Aggregates, over supported actions, the maximum of ``c . mu`` on each
    action's belief polytope, minus ``c . prior``. Nonnegative for every c
    exactly when some belief system with the right conditional optimality
    averages back to the prior.
    """
    supported = _supported(marginal)
    polys = polytopes if polytopes is not None else _polytopes_for(game, supported)
    lhs = ZERO
    for a in supported:
        lhs += marginal.probs[a] * _max_over(polys[a], c, a, debug)
    return lhs - dot(c, game.prior)


def state_condition_residual(
    game: BaseGame,
    marginal: ActionMarginal,
    state: int,
    polytopes: dict[int, BeliefPolytope] | None = None,
    debug: bool = False,
) -> Fraction:
    """Prior mass of the state minus the mass the marginal forces onto it.

    Each supported action must carry at least ``min mu(state)`` over its
    belief polytope; the total cannot exceed the prior. Equals
    ``strassen_residual`` at minus the state's unit direction.
    """
    return strassen_residual(
        game, marginal, negate(unit_direction(game.n_states, state)), polytopes, debug
    )


def action_pair_residual(
    game: BaseGame,
    marginal: ActionMarginal,
    a_first: int,
    a_second: int,
    polytopes: dict[int, BeliefPolytope] | None = None,
    debug: bool = False,
) -> Fraction:
    """Aggregated best payoff-difference spread minus the prior's spread.

    The direction is the per-state payoff difference of a_first over
    a_second; equals ``strassen_residual`` at that direction.
    """
    return strassen_residual(
        game,
        marginal,
        utility_difference_direction(game, a_first, a_second),
        polytopes,
        debug,
    )


def oracle_feasibility(
    game: BaseGame, marginal: ActionMarginal
) -> tuple[bool, Outcome | None]:
    """Brute-force route: exact feasibility of the joint outcome system.

    Variables are the |A| x |Theta| joint probabilities, constrained by every
    obedience inequality and by both marginal families (the total-mass row is
    implied). Independent of the polytope machinery by design: the two routes
    cross-validate each other.
    """
    n_a, n_s = game.n_actions, game.n_states
    n_vars = n_a * n_s

    def var(a: int, t: int) -> int:
        return a * n_s + t

    constraints: list[Constraint] = []
    for a in range(n_a):
        for alt in range(n_a):
            if alt == a:
                continue
            coeffs = [ZERO] * n_vars
            for t in range(n_s):
                coeffs[var(a, t)] = game.utility[a][t] - game.utility[alt][t]
            constraints.append(Constraint(tuple(coeffs), GREATER_EQUAL, ZERO))
    for t in range(n_s):
        coeffs = [ZERO] * n_vars
        for a in range(n_a):
            coeffs[var(a, t)] = Fraction(1)
        constraints.append(Constraint(tuple(coeffs), EQUAL, game.prior[t]))
    for a in range(n_a):
        coeffs = [ZERO] * n_vars
        for t in range(n_s):
            coeffs[var(a, t)] = Fraction(1)
        constraints.append(Constraint(tuple(coeffs), EQUAL, marginal.probs[a]))

    feasible, x = lp_feasible(n_vars, constraints, nonneg=True)
    if not feasible:
        return False, None
    probs = tuple(tuple(x[var(a, t)] for t in range(n_s)) for a in range(n_a))
    return True, Outcome(probs=probs)


def belief_decomposition(
    game: BaseGame,
    marginal: ActionMarginal,
    polytopes: dict[int, BeliefPolytope] | None = None,
) -> Outcome | None:
    """Split the prior into one belief per supported action, or report None.

    Searches for nonnegative weights over the vertices of every supported
    action's belief polytope that give each action exactly its marginal mass
    and mix back to the prior. Feasibility of that program is consistency
    itself: each action's weighted vertex bundle becomes its row of a joint
    outcome, obedient because the polytope is, with both marginals landing by
    construction. Unsupported actions get zero rows.
    """
    supported = _supported(marginal)
    polys = polytopes if polytopes is not None else _polytopes_for(game, supported)
    vertices = {a: enumerate_vertices(polys[a]) for a in supported}
    offsets: dict[int, int] = {}
    n_vars = 0
    for a in supported:
        if not vertices[a]:
            return None
        offsets[a] = n_vars
        n_vars += len(vertices[a])

    constraints: list[Constraint] = []
    for a in supported:
        coeffs = [ZERO] * n_vars
        for j in range(len(vertices[a])):
            coeffs[offsets[a] + j] = Fraction(1)
        constraints.append(Constraint(tuple(coeffs), EQUAL, marginal.probs[a]))
    for t in range(game.n_states):
        coeffs = [ZERO] * n_vars
        for a in supported:
            for j, v in enumerate(vertices[a]):
                coeffs[offsets[a] + j] = v[t]
        constraints.append(Constraint(tuple(coeffs), EQUAL, game.prior[t]))

    feasible, x = lp_feasible(n_vars, constraints, nonneg=True)
    if not feasible:
        return None
    rows = []
    for a in range(game.n_actions):
        if a in offsets:
            row = [ZERO] * game.n_states
            for j, v in enumerate(vertices[a]):
                weight = x[offsets[a] + j]
                for t in range(game.n_states):
                    row[t] += weight * v[t]
            rows.append(tuple(row))
        else:
            rows.append((ZERO,) * game.n_states)
    return Outcome(probs=tuple(rows))


def separating_direction(
    game: BaseGame,
    marginal: ActionMarginal,
    polytopes: dict[int, BeliefPolytope] | None = None,
) -> Direction | None:
    """Direction with negative ``strassen_residual``, or None if none exists.

    Minimizes the residual over the unit box: one epigraph variable per
    supported action dominates that polytope's support function at every
    vertex, so at the optimum the objective equals the residual of the chosen
    direction. Residuals scale linearly in the direction, so a nonnegative
    minimum over the box rules out separation at any scale.
    """
    supported = _supported(marginal)
    polys = polytopes if polytopes is not None else _polytopes_for(game, supported)
    n_s = game.n_states
    n_vars = n_s + len(supported)  # direction coordinates, then epigraph values
    one = Fraction(1)

    constraints: list[Constraint] = []
    for k, a in enumerate(supported):
        vertices = enumerate_vertices(polys[a])
        if not vertices:
            raise UnsupportableAction(a)
        for v in vertices:
            coeffs = [ZERO] * n_vars
            for t in range(n_s):
                coeffs[t] = -v[t]
            coeffs[n_s + k] = one
            constraints.append(Constraint(tuple(coeffs), GREATER_EQUAL, ZERO))
    for t in range(n_s):
        box = [ZERO] * n_vars
        box[t] = one
        constraints.append(Constraint(tuple(box), LESS_EQUAL, one))
        box = [ZERO] * n_vars
        box[t] = -one
        constraints.append(Constraint(tuple(box), LESS_EQUAL, one))

    objective = [-p for p in game.prior] + [marginal.probs[a] for a in supported]
    result = lp_solve(n_vars, constraints, objective, nonneg=False)
    assert result.status == OPTIMAL, "box-bounded program with zero feasible"
    if result.value >= 0:
        return None
    return tuple(result.x[t] for t in range(n_s))


def check_bce_consistent(
    game: BaseGame, marginal: ActionMarginal, debug: bool = False
) -> ConsistencyVerdict:
    """Decide reachability of the marginal pair and certify the answer.

    Search order is fixed for reproducibility: supported actions are first
    screened for empty belief polytopes (in action order), then state
    conditions in state order, then ordered action pairs lexicographically;
    the first violation becomes the certificate. Pairs that survive every
    named condition are settled by the vertex decomposition program; the rare
    failures there (possible from three belief dimensions up) are certified
    by a separating direction. On success the witness outcome comes from the
    oracle LP, cross-checking the two routes on every accept.
    """
    validate_game(game)
    validate_marginal(marginal, game.n_actions)
    supported = _supported(marginal)
    polys = _polytopes_for(game, supported)

    for a in supported:
        if is_empty(polys[a]):
            return ConsistencyVerdict(
                consistent=False,
                violation=ViolationCertificate(kind=UNSUPPORTABLE_ACTION, action=a),
            )

    for t in range(game.n_states):
        residual = state_condition_residual(game, marginal, t, polys, debug)
        if residual < 0:
            return ConsistencyVerdict(
                consistent=False,
                violation=ViolationCertificate(
                    kind=STATE_CONDITION,
                    state=t,
                    residual=residual,
                    direction=negate(unit_direction(game.n_states, t)),
                ),
            )

    for a_first in range(game.n_actions):
        for a_second in range(game.n_actions):
            if a_first == a_second:
                continue
            residual = action_pair_residual(game, marginal, a_first, a_second, polys, debug)
            if residual < 0:
                return ConsistencyVerdict(
                    consistent=False,
                    violation=ViolationCertificate(
                        kind=ACTION_PAIR_CONDITION,
                        pair=(a_first, a_second),
                        residual=residual,
                        direction=utility_difference_direction(game, a_first, a_second),
                    ),
                )

    if belief_decomposition(game, marginal, polys) is None:
        direction = separating_direction(game, marginal, polys)
        if direction is None:  # decomposition infeasible yet nothing separates
            raise AssertionError(
                "belief decomposition and direction search disagree; "
                "this is a bug, not an input problem"
            )
        residual = strassen_residual(game, marginal, direction, polys, debug)
        assert residual < 0, "separating direction must have negative residual"
        return ConsistencyVerdict(
            consistent=False,
            violation=ViolationCertificate(
                kind=STRASSEN_DIRECTION, residual=residual, direction=direction
            ),
        )

    feasible, witness = oracle_feasibility(game, marginal)
    if not feasible:  # the two routes are equivalent on paper
        raise AssertionError(
            "belief route accepted a marginal the oracle rejects; "
            "this is a bug, not an input problem"
        )
    return ConsistencyVerdict(consistent=True, witness=witness)
