"""Best-response checks, deviation witnesses, dynamics and grid search.

A profile is an equilibrium when no player can raise the value of their own
goal formula by changing only their own mixed strategy. Deviations range over
a simplex; this module only ever inspects finitely many of them, so it can
always *refute* (with a witness) but can *certify* only when the goal is
affine in the deviating player's distribution. That holds for a goal that is
a single modal atom ``E[phi_j]``, and trivially for a goal with no atoms.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import CapExceeded
from .expectation import (
    MixedStrategy,
    Profile,
    deviation_payoffs,
    goal_value,
    goal_values,
    mix,
)
from .game import MAX_COMBINATIONS, Game, strategy_count
from .logic import ModalAtom

#: refuse to enumerate more grid deviations for one player than this
MAX_COMPOSITIONS = 10**6


@dataclass(frozen=True)
class DeviationWitness:
    player: int
    new_strategy: MixedStrategy
    old_value: Fraction
    new_value: Fraction

    @property
    def improvement(self) -> Fraction:
        return self.new_value - self.old_value


@dataclass(frozen=True)
class Equilibrium:
    certificate: str = "exact"  # or "solver-checked"


@dataclass(frozen=True)
class NotEquilibrium:
    witness: DeviationWitness


@dataclass(frozen=True)
class Unknown:
    grid_denominator: int
    max_observed_improvement: Fraction = Fraction(0)


Verdict = Union[Equilibrium, NotEquilibrium, Unknown]


@dataclass(frozen=True)
class EquilibriumReport:
    players: tuple[Verdict, ...]
    overall: Verdict


def is_certifiable(goal) -> bool:
    """True when the goal is affine in every player's own distribution."""
    return isinstance(goal, ModalAtom) or not goal.atoms()


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer vectors of length ``parts`` summing to ``total``.

    Ordered descending lexicographically, so the point mass on the first
    strategy comes first and ``total == 1`` yields the point masses in order.
    """
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


def composition_count(total: int, parts: int) -> int:
    return math.comb(total + parts - 1, parts - 1)


def _best_deviation(g: Game, i: int, p: Profile, candidates, cap: int):
    """First candidate weight map with maximal goal value, with that value."""
    rows = deviation_payoffs(g, i, p, cap)
    best_value, best_weights = None, None
    for weights in candidates:
        value = goal_value(g, i, mix(rows, weights))
        if best_value is None or value > best_value:
            best_value, best_weights = value, weights
    return best_value, best_weights


def _pure_candidates(size):
    return ({s: Fraction(1)} for s in range(size))


def _grid_candidates(size, denominator, cap):
    count = composition_count(denominator, size)
    if count > cap:
        raise CapExceeded(f"grid deviations (denominator {denominator})", count, cap)
    for c in compositions(denominator, size):
        yield {s: Fraction(w, denominator) for s, w in enumerate(c) if w}


def _witness(g, i, p, best_value, best_weights):
    old = goal_values(g, p)[i]
    if best_value is None or best_value <= old:
        return None
    return DeviationWitness(i, MixedStrategy.of(i, best_weights), old, best_value)


def pure_deviation_refute(g: Game, i: int, p: Profile,
                          cap: int = MAX_COMBINATIONS) -> Optional[DeviationWitness]:
    """Best strictly improving pure deviation of player ``i``, if any."""
    best = _best_deviation(g, i, p, _pure_candidates(strategy_count(g, i)), cap)
    return _witness(g, i, p, *best)


def grid_refute(g: Game, i: int, p: Profile, denominator: int,
                cap: int = MAX_COMPOSITIONS) -> Optional[DeviationWitness]:
    """Best strictly improving deviation with probabilities in multiples of 1/denominator.

    The grid contains every pure strategy, so anything
    :func:`pure_deviation_refute` finds is matched or beaten here.
    """
    if denominator < 1:
        raise ValueError("grid denominator must be positive")
    size = strategy_count(g, i)
    best = _best_deviation(g, i, p, _grid_candidates(size, denominator, cap), MAX_COMBINATIONS)
    return _witness(g, i, p, *best)


def grid_improvement(g: Game, i: int, p: Profile, denominator: int,
                     cap: int = MAX_COMPOSITIONS) -> Fraction:
    """How much player ``i`` gains from the best grid deviation (0 if none)."""
    w = grid_refute(g, i, p, denominator, cap)
    return w.improvement if w is not None else Fraction(0)


def verify_equilibrium(g: Game, p: Profile, denominator: int = 1) -> EquilibriumReport:
    """Classify ``p`` for every player and overall.

    Per player: a pure or grid witness gives :class:`NotEquilibrium`;
    otherwise an affine goal is certified :class:`Equilibrium`, and any other
    goal stays :class:`Unknown` at this grid resolution.
    """
    verdicts = []
    for i in range(g.n):
        witness = pure_deviation_refute(g, i, p)
        certifiable = is_certifiable(g.goals[i])
        if witness is None and not certifiable and denominator > 1:
            witness = grid_refute(g, i, p, denominator)
        if witness is not None:
            verdicts.append(NotEquilibrium(witness))
        elif certifiable:
            verdicts.append(Equilibrium("exact"))
        else:
            verdicts.append(Unknown(denominator, Fraction(0)))

    refuted = [v for v in verdicts if isinstance(v, NotEquilibrium)]
    if refuted:
        overall: Verdict = refuted[0]
    elif all(isinstance(v, Equilibrium) for v in verdicts):
        overall = Equilibrium("exact")
    else:
        overall = Unknown(denominator, Fraction(0))
    return EquilibriumReport(tuple(verdicts), overall)


# --------------------------------------------------------------------------
# dynamics


@dataclass(frozen=True)
class DynamicsStep:
    profile: Profile
    values: tuple[Fraction, ...]
    mover: Optional[int] = None  # None for the starting profile


@dataclass
class DynamicsTrace:
    steps: list[DynamicsStep] = field(default_factory=list)
    status: str = "max-iters"  # "fixed-point" | "cycle" | "max-iters"
    period: Optional[int] = None
    turns: int = 0


def best_response_dynamics(g: Game, start: Profile, max_iters: int = 100,
                           denominator: int = 1) -> DynamicsTrace:
    """Round-robin best-response updates on the probability grid.

    Each iteration is one player's turn, in declaration order. The player
    switches to their best grid deviation only if it strictly improves their
    goal; ties keep the first candidate in grid order. The run stops when
    every player passes in a row (fixed point), when a (profile, next mover)
    state repeats (cycle; ``period`` counts profile changes), or after
    ``max_iters`` turns.
    """
    trace = DynamicsTrace([DynamicsStep(start, goal_values(g, start))])
    current = start
    seen = {(current, 0): 0}
    passes = 0
    for turn in range(max_iters):
        i = turn % g.n
        witness = grid_refute(g, i, current, denominator)
        trace.turns = turn + 1
        if witness is None:
            passes += 1
        else:
            passes = 0
            current = current.replace(i, witness.new_strategy)
            trace.steps.append(DynamicsStep(current, goal_values(g, current), i))
        if passes >= g.n:
            trace.status = "fixed-point"
            return trace
        state = (current, (turn + 1) % g.n)
        changes = len(trace.steps) - 1
        if state in seen and changes > seen[state]:
            trace.status = "cycle"
            trace.period = changes - seen[state]
            return trace
        seen.setdefault(state, changes)
    return trace


# --------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchResult:
    """Outcome of :func:`search_equilibrium`.

    ``certified`` is True only when ``profile`` passed
    :func:`verify_equilibrium` with an exact certificate. Otherwise
    ``profile`` is the grid profile with the smallest ``epsilon`` (largest
    grid-deviation gain over players); that is neither a proof that an
    equilibrium exists nor that none does.
    """

    profile: Profile
    certified: bool
    epsilon: Fraction
    denominator: int
    examined: int


def grid_profiles(g: Game, denominator: int, cap: int = MAX_COMPOSITIONS) -> Iterator[Profile]:
    blocks = []
    for i in range(g.n):
        blocks.append([MixedStrategy.of(i, w) for w in _grid_candidates(strategy_count(g, i), denominator, cap)])
    total = math.prod(len(b) for b in blocks)
    if total > cap:
        raise CapExceeded("grid profiles", total, cap)
    return (Profile(combo) for combo in itertools.product(*blocks))


def search_equilibrium(g: Game, denominator: int, cap: int = MAX_COMPOSITIONS) -> SearchResult:
    """Scan every grid profile for a certified equilibrium."""
    best: Optional[tuple[Fraction, Profile]] = None
    examined = 0
    for p in grid_profiles(g, denominator, cap):
        examined += 1
        epsilon = max(grid_improvement(g, i, p, denominator, cap) for i in range(g.n))
        if epsilon == 0 and isinstance(verify_equilibrium(g, p, denominator).overall, Equilibrium):
            return SearchResult(p, True, epsilon, denominator, examined)
        if best is None or epsilon < best[0]:
            best = (epsilon, p)
    assert best is not None
    return SearchResult(best[1], False, best[0], denominator, examined)

