"""Multi-agent reductions built on the single-agent checker.

Two settings collapse to repeated single-agent questions.  First-order games
(every player's payoff depends on their own action and the state only) admit
public-signal coordination exactly when one fictitious agent who earns the sum
of all payoffs and picks a whole action profile can be steered to the target
profile distribution.  Ring networks (player 1 reacts to the state, player
i >= 2 reacts to player i-1's action) decompose stage by stage: each link is
a single-agent problem whose "state" is the upstream player's action and whose
prior is the upstream marginal.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .consistency import ConsistencyVerdict, ViolationCertificate, check_bce_consistent
from .errors import DimensionMismatch, ProductTooLarge, StageMarginalMismatch
from .game import (
    ActionMarginal,
    BaseGame,
    Outcome,
    action_marginal_of,
    check_obedience,
    make_game,
    make_marginal,
    state_marginal_of,
    validate_game,
    validate_marginal,
)

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_PROFILES_ENV = "MBCE_MAX_PROFILES"
DEFAULT_MAX_PROFILES = 4096


@dataclass(frozen=True)
class PlayerSpec:
    """One player's own-action payoff table, utility[action][state]."""

    actions: tuple[str, ...]
    utility: tuple[tuple[Fraction, ...], ...]

    @property
    def n_actions(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class FirstOrderGame:
    """Common state and prior; payoffs never depend on other players' actions."""

    states: tuple[str, ...]
    prior: tuple[Fraction, ...]
    players: tuple[PlayerSpec, ...]

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def n_states(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class RingGame:
    """Chain of stages: stage 0 maps states to A_1, stage i maps A_i to A_{i+1}.

    utilities[0][a][t] pays player 1 for action a in state t; for i >= 1,
    utilities[i][a][s] pays player i+1 for action a when player i played s.
    """

    states: tuple[str, ...]
    prior: tuple[Fraction, ...]
    actions: tuple[tuple[str, ...], ...]
    utilities: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @property
    def n_players(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class MarginalProfile:
    """One target action distribution per player."""

    marginals: tuple[ActionMarginal, ...]


@dataclass(frozen=True)
class RingOutcome:
    """Joint distribution over action profiles and states.

    Profiles are indexed in lexicographic order with the last player varying
    fastest, matching itertools.product over the per-player ranges.
    """

    shape: tuple[int, ...]
    n_states: int
    probs: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class RingVerdict:
    """Outcome of the stage-by-stage ring check.

    failing_stage counts from 0 (player 1's stage).  On failure, ``violation``
    indexes into the failing stage game as built by ring_stage_game (stages
    past the first are restricted to the support of the upstream marginal, so
    state indices refer to that restriction).
    """

    consistent: bool
    failing_stage: int | None = None
    violation: ViolationCertificate | None = None
    stage_witnesses: tuple[Outcome, ...] | None = None


def make_first_order(states, prior, players) -> FirstOrderGame:
    """Build and validate; players is a sequence of (labels, utility rows)."""
    specs = []
    for labels, rows in players:
        # Per-player slice must itself be a valid single-agent game.
        game = make_game(states, labels, rows, prior)
        validate_game(game)
        specs.append(PlayerSpec(game.actions, game.utility))
    if not specs:
        raise DimensionMismatch("a first-order game needs at least one player")
    first = make_game(states, specs[0].actions, specs[0].utility, prior)
    return FirstOrderGame(first.states, first.prior, tuple(specs))


def make_ring(states, prior, stages) -> RingGame:
    """Build and validate; stages is a sequence of (labels, utility rows).

    Stage 0 rows run over the declared states; stage i >= 1 rows run over the
    actions of stage i-1.  Utility rows are indexed by own action.
    """
    if not stages:
        raise DimensionMismatch("a ring needs at least one player")
    base = make_game(states, stages[0][0], stages[0][1], prior)
    validate_game(base)
    actions = [base.actions]
    utilities = [base.utility]
    for labels, rows in stages[1:]:
        upstream = actions[-1]
        uniform = [Fraction(1, len(upstream))] * len(upstream)
        stage = make_game(upstream, labels, rows, uniform)
        validate_game(stage)
        actions.append(stage.actions)
        utilities.append(stage.utility)
    return RingGame(base.states, base.prior, tuple(actions), tuple(utilities))


def make_profile(ring_or_game, vectors) -> MarginalProfile:
    """Validate one marginal per player against the action-space widths."""
    if isinstance(ring_or_game, RingGame):
        widths = [len(a) for a in ring_or_game.actions]
    else:
        widths = [p.n_actions for p in ring_or_game.players]
    if len(vectors) != len(widths):
        raise DimensionMismatch(
            f"expected {len(widths)} marginals, got {len(vectors)}"
        )
    marginals = []
    for width, vec in zip(widths, vectors):
        marginal = vec if isinstance(vec, ActionMarginal) else make_marginal(vec)
        validate_marginal(marginal, width)
        marginals.append(marginal)
    return MarginalProfile(tuple(marginals))


def player_game(fo: FirstOrderGame, i: int) -> BaseGame:
    """Single-agent game seen by player i in isolation."""
    spec = fo.players[i]
    return BaseGame(fo.states, spec.actions, spec.utility, fo.prior)


def action_profiles(fo: FirstOrderGame) -> tuple[tuple[int, ...], ...]:
    """All index profiles in the order the auxiliary game enumerates them."""
    return tuple(product(*(range(p.n_actions) for p in fo.players)))


def _profile_cap(max_profiles: int | None) -> int:
    if max_profiles is not None:
        return max_profiles
    return int(os.environ.get(MAX_PROFILES_ENV, DEFAULT_MAX_PROFILES))


def auxiliary_single_agent(
    fo: FirstOrderGame, max_profiles: int | None = None
) -> BaseGame:
    """Collapse all players into one agent choosing a whole profile.

    The agent earns the sum of the individual payoffs, so a profile is optimal
    at a belief exactly when every coordinate is optimal for its owner.  State
    space and prior carry over unchanged.
    """
    count = 1
    for spec in fo.players:
        count *= spec.n_actions
    cap = _profile_cap(max_profiles)
    if count > cap:
        raise ProductTooLarge(
            f"{count} action profiles exceed the cap of {cap};"
            f" raise {MAX_PROFILES_ENV} to override"
        )
    labels = []
    utility = []
    for profile in action_profiles(fo):
        labels.append(",".join(fo.players[i].actions[a] for i, a in enumerate(profile)))
        utility.append(
            tuple(
                sum((fo.players[i].utility[a][t] for i, a in enumerate(profile)), ZERO)
                for t in range(fo.n_states)
            )
        )
    game = BaseGame(fo.states, tuple(labels), tuple(utility), fo.prior)
    validate_game(game)
    return game


def check_public_bce(
    fo: FirstOrderGame,
    marginal: ActionMarginal,
    max_profiles: int | None = None,
    debug: bool = False,
) -> ConsistencyVerdict:
    """Can public signals alone steer play to this profile distribution?

    The marginal is indexed by profiles in action_profiles order.  The witness
    outcome lives on (profiles x states); decoding it back into per-player
    play is mechanical because optimal profiles factor coordinate-wise.
    """
    aux = auxiliary_single_agent(fo, max_profiles)
    validate_marginal(marginal, aux.n_actions)
    return check_bce_consistent(aux, marginal, debug=debug)


def ring_stage_game(ring: RingGame, profile: MarginalProfile, i: int) -> BaseGame:
    """Single-agent game checked at stage i.

    Stage 0 is player 1's game against the state.  For i >= 1 the state space
    is the support of the upstream marginal (zero-mass upstream actions carry
    no obedience content) and the prior is that marginal restricted to it.
    """
    if i == 0:
        return BaseGame(ring.states, ring.actions[0], ring.utilities[0], ring.prior)
    upstream = profile.marginals[i - 1].probs
    support = [s for s, q in enumerate(upstream) if q > ZERO]
    states = tuple(ring.actions[i - 1][s] for s in support)
    utility = tuple(
        tuple(row[s] for s in support) for row in ring.utilities[i]
    )
    prior = tuple(upstream[s] for s in support)
    return BaseGame(states, ring.actions[i], utility, prior)


def _stage_support(ring: RingGame, profile: MarginalProfile, i: int) -> list[int]:
    if i == 0:
        return list(range(len(ring.states)))
    return [s for s, q in enumerate(profile.marginals[i - 1].probs) if q > ZERO]


def _embed_witness(witness: Outcome, support: Sequence[int], width: int) -> Outcome:
    """Re-express a restricted-stage witness over the full upstream space."""
    rows = []
    for row in witness.probs:
        full = [ZERO] * width
        for k, s in enumerate(support):
            full[s] = row[k]
        rows.append(tuple(full))
    return Outcome(tuple(rows))


def check_ring(
    ring: RingGame, profile: MarginalProfile, debug: bool = False
) -> RingVerdict:
    """Run every stage check in order; stop at the first failure.

    A consistent verdict carries one witness per stage, re-embedded over the
    full upstream action space (zero columns for unused upstream actions).
    """
    if len(profile.marginals) != ring.n_players:
        raise DimensionMismatch(
            f"profile has {len(profile.marginals)} marginals for"
            f" {ring.n_players} players"
        )
    witnesses = []
    for i in range(ring.n_players):
        stage = ring_stage_game(ring, profile, i)
        validate_marginal(profile.marginals[i], stage.n_actions)
        verdict = check_bce_consistent(stage, profile.marginals[i], debug=debug)
        if not verdict.consistent:
            return RingVerdict(False, failing_stage=i, violation=verdict.violation)
        width = len(ring.states) if i == 0 else len(ring.actions[i - 1])
        witnesses.append(
            _embed_witness(verdict.witness, _stage_support(ring, profile, i), width)
        )
    return RingVerdict(True, stage_witnesses=tuple(witnesses))


def construct_ring_outcome(stage_witnesses: Sequence[Outcome]) -> RingOutcome:
    """Chain stage joints into one joint over (profiles x states).

    Entry (a_1..a_N, t) multiplies the stage-0 mass at (a_1, t) by each
    downstream conditional mass of a_{i+1} given a_i.  Conditionals on an
    upstream action of mass zero are taken uniform, which keeps the result a
    distribution without affecting any marginal.  Adjacent witnesses must
    agree on the marginal they share.
    """
    if not stage_witnesses:
        raise DimensionMismatch("need at least one stage witness")
    first = stage_witnesses[0]
    shape = tuple(len(w.probs) for w in stage_witnesses)
    n_states = len(first.probs[0])
    upstream_marginal = action_marginal_of(first)
    conditionals = []
    for witness in stage_witnesses[1:]:
        shared = state_marginal_of(witness)
        if shared != upstream_marginal:
            raise StageMarginalMismatch(
                "stage witness conditions on a marginal its predecessor does not produce"
            )
        n_here = len(witness.probs)
        cond = []
        for a in range(n_here):
            row = []
            for s, mass in enumerate(shared):
                if mass == ZERO:
                    row.append(Fraction(1, n_here))
                else:
                    row.append(witness.probs[a][s] / mass)
            cond.append(tuple(row))
        conditionals.append(tuple(cond))
        upstream_marginal = action_marginal_of(witness)

    rows = []
    for prof in product(*(range(n) for n in shape)):
        row = []
        for t in range(n_states):
            mass = first.probs[prof[0]][t]
            for i, cond in enumerate(conditionals):
                mass *= cond[prof[i + 1]][prof[i]]
            row.append(mass)
        rows.append(tuple(row))
    return RingOutcome(shape, n_states, tuple(rows))


def ring_profiles(shape: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Profile index tuples in the RingOutcome row order."""
    return tuple(product(*(range(n) for n in shape)))


def ring_pair_marginal(outcome: RingOutcome, i: int) -> Outcome:
    """Marginal the stage-i player best-responds to.

    i == 0 gives the (A_1 x states) joint; i >= 1 gives (A_{i+1} x A_i) with
    the upstream action in the state slot.
    """
    if i == 0:
        rows = [[ZERO] * outcome.n_states for _ in range(outcome.shape[0])]
        for prof, row in zip(ring_profiles(outcome.shape), outcome.probs):
            for t, mass in enumerate(row):
                rows[prof[0]][t] += mass
    else:
        rows = [[ZERO] * outcome.shape[i - 1] for _ in range(outcome.shape[i])]
        for prof, row in zip(ring_profiles(outcome.shape), outcome.probs):
            total = sum(row, ZERO)
            rows[prof[i]][prof[i - 1]] += total
    return Outcome(tuple(tuple(row) for row in rows))


def ring_player_marginal(outcome: RingOutcome, i: int) -> tuple[Fraction, ...]:
    """Distribution of player i+1's action under the joint outcome."""
    totals = [ZERO] * outcome.shape[i]
    for prof, row in zip(ring_profiles(outcome.shape), outcome.probs):
        totals[prof[i]] += sum(row, ZERO)
    return tuple(totals)


def _obedience_game(ring: RingGame, i: int) -> BaseGame:
    # Obedience never reads the prior; any full-support one will do.
    if i == 0:
        return BaseGame(ring.states, ring.actions[0], ring.utilities[0], ring.prior)
    upstream = ring.actions[i - 1]
    uniform = tuple([Fraction(1, len(upstream))] * len(upstream))
    return BaseGame(upstream, ring.actions[i], ring.utilities[i], uniform)


def check_ring_obedience(outcome: RingOutcome, ring: RingGame) -> bool:
    """Each player must be obedient against their own pair marginal.

    Player 1's incentives read the (A_1 x states) marginal; player i+1's read
    the (A_{i+1} x A_i) marginal.  Nothing else about the joint matters.
    """
    if outcome.shape != tuple(len(a) for a in ring.actions):
        raise DimensionMismatch("outcome shape does not match the ring's action spaces")
    if outcome.n_states != len(ring.states):
        raise DimensionMismatch("outcome state count does not match the ring")
    for i in range(ring.n_players):
        pair = ring_pair_marginal(outcome, i)
        if not check_obedience(pair, _obedience_game(ring, i)).obedient:
            return False
    return True
