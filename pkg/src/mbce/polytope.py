"""Belief polytopes: the sets of beliefs at which a given action is optimal.

For action a, the polytope collects every belief mu over states with
sum_t mu(t) * (u(a,t) - u(alt,t)) >= 0 against all alternatives. These sets
live inside the probability simplex (x >= 0, sum x = 1, always enforced on
top of the stored halfspaces), may be empty, and are routinely degenerate at
tie beliefs. Optimization over them runs through the exact simplex; vertex
enumeration is a deliberately independent second code path used to
cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionMismatch, EmptyPolytope
from .game import BaseGame
from .linprog import (
    EQUAL,
    INFEASIBLE,
    LESS_EQUAL,
    OPTIMAL,
    Constraint,
    lp_feasible,
    lp_solve,
)

Belief = tuple[Fraction, ...]
Direction = tuple[Fraction, ...]
VertexSet = tuple[Belief, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def dot(c: Direction, x) -> Fraction:
    return sum((ci * xi for ci, xi in zip(c, x)), ZERO)


def negate(c: Direction) -> Direction:
    return tuple(-ci for ci in c)


def unit_direction(dim: int, t: int) -> Direction:
    return tuple(ONE if i == t else ZERO for i in range(dim))


def utility_difference_direction(game: BaseGame, a_first: int, a_second: int) -> Direction:
    """Per-state payoff difference of a_first over a_second."""
    return tuple(
        game.utility[a_first][t] - game.utility[a_second][t] for t in range(game.n_states)
    )


@dataclass(frozen=True)
class BeliefPolytope:
    """H-representation: ``normal . x <= offset`` rows, plus the implicit
    simplex constraints x >= 0 and sum(x) = 1. May be empty."""

    dim: int
    halfspaces: tuple[tuple[Direction, Fraction], ...]

    def contains(self, point) -> bool:
        if len(point) != self.dim:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates in a {self.dim}-state polytope"
            )
        if any(q < 0 for q in point) or sum(point) != ONE:
            return False
        return all(dot(normal, point) <= offset for normal, offset in self.halfspaces)


def opt_belief_polytope(game: BaseGame, action: int) -> BeliefPolytope:
    """Beliefs at which ``action`` is a best response: one halfspace per
    alternative, stating that the payoff difference direction beats it."""
    halfspaces = []
    for alt in range(game.n_actions):
        if alt == action:
            continue
        # u(action) - u(alt) >= 0 rewritten as (u(alt) - u(action)) . x <= 0
        halfspaces.append((utility_difference_direction(game, alt, action), ZERO))
    return BeliefPolytope(dim=game.n_states, halfspaces=tuple(halfspaces))


def _polytope_constraints(poly: BeliefPolytope) -> list[Constraint]:
    cons = [Constraint(tuple([ONE] * poly.dim), EQUAL, ONE)]
    for normal, offset in poly.halfspaces:
        cons.append(Constraint(normal, LESS_EQUAL, offset))
    return cons


def is_empty(poly: BeliefPolytope) -> bool:
    feasible, _ = lp_feasible(poly.dim, _polytope_constraints(poly), nonneg=True)
    return not feasible


def maximize_direction(poly: BeliefPolytope, c: Direction) -> tuple[Fraction, Belief]:
    """Exact maximum of ``c . x`` over the polytope, with an attaining vertex."""
    if len(c) != poly.dim:
        raise DimensionMismatch(f"direction has {len(c)} coordinates for dim {poly.dim}")
    res = lp_solve(poly.dim, _polytope_constraints(poly), c, maximize=True, nonneg=True)
    if res.status == INFEASIBLE:
        raise EmptyPolytope("cannot optimize over an empty belief polytope")
    assert res.status == OPTIMAL  # the simplex is compact, so never unbounded
    return res.value, res.x


def minimize_direction(poly: BeliefPolytope, c: Direction) -> tuple[Fraction, Belief]:
    value, witness = maximize_direction(poly, negate(c))
    return -value, witness


def _solve_square(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination; None when the system is singular."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return None
        a[col], a[pivot_row] = a[pivot_row], a[col]
        piv = a[col][col]
        a[col] = [v / piv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [a[r][j] - f * a[col][j] for j in range(n + 1)]
    return [a[r][n] for r in range(n)]


def enumerate_vertices(poly: BeliefPolytope) -> VertexSet:
    """All vertices, by brute force over tight-constraint subsets.

    Every vertex of a polytope inside the simplex solves sum(x)=1 together
    with dim-1 of the inequality rows made tight (nonnegativity rows count).
    Singular subsets are skipped; solutions are kept only when they satisfy
    the full system. Exhaustive and exact; intended for desk-scale state
    spaces, not high dimensions.
    """
    n = poly.dim
    ineqs: list[Direction] = [negate(unit_direction(n, t)) for t in range(n)]
    offsets: list[Fraction] = [ZERO] * n
    for normal, offset in poly.halfspaces:
        ineqs.append(normal)
        offsets.append(offset)

    seen: set[Belief] = set()
    ones = [ONE] * n
    for subset in combinations(range(len(ineqs)), n - 1):
        matrix = [ones] + [list(ineqs[i]) for i in subset]
        rhs = [ONE] + [offsets[i] for i in subset]
        x = _solve_square(matrix, rhs)
        if x is None:
            continue
        point = tuple(x)
        if point not in seen and poly.contains(point):
            seen.add(point)
    return tuple(sorted(seen))
