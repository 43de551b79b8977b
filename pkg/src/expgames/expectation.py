"""Mixed strategies, profiles, expected payoffs and goal values.

A :class:`Profile` together with its :class:`~expgames.game.Game` is a model
of the expectation logic: goal formulas get one truth value per profile.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded
from .game import MAX_COMBINATIONS, Game, payoff_vector, strategy_count
from .logic import as_rational, eval_modal_closed, format_rational


@dataclass(frozen=True)
class MixedStrategy:
    """A sparse distribution over one player's pure strategies.

    ``probs`` holds ``(strategy index, probability)`` pairs sorted by index;
    unlisted strategies have probability 0. Use :meth:`of` to build one.
    """

    owner: int
    probs: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, owner: int, probs: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]) -> "MixedStrategy":
        items = probs.items() if isinstance(probs, Mapping) else probs
        merged: dict[int, Fraction] = {}
        for index, p in items:
            merged[int(index)] = merged.get(int(index), Fraction(0)) + as_rational(p)
        return cls(owner, tuple(sorted((j, p) for j, p in merged.items() if p != 0)))

    def prob(self, index: int) -> Fraction:
        for j, p in self.probs:
            if j == index:
                return p
        return Fraction(0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.probs)

    @property
    def is_point_mass(self) -> bool:
        return len(self.probs) == 1 and self.probs[0][1] == 1

    def __str__(self):
        return " + ".join(f"{format_rational(p)}*s{j}" for j, p in self.probs) or "0"


def point_mass(owner: int, index: int) -> MixedStrategy:
    return MixedStrategy(owner, ((index, Fraction(1)),))


def uniform(g: Game, owner: int) -> MixedStrategy:
    size = strategy_count(g, owner)
    return MixedStrategy.of(owner, {j: Fraction(1, size) for j in range(size)})


@dataclass(frozen=True)
class Profile:
    """One mixed strategy per player, in player order."""

    strategies: tuple[MixedStrategy, ...]

    def __getitem__(self, i: int) -> MixedStrategy:
        return self.strategies[i]

    def __len__(self):
        return len(self.strategies)

    def __iter__(self):
        return iter(self.strategies)

    def replace(self, i: int, strategy: MixedStrategy) -> "Profile":
        return Profile(self.strategies[:i] + (strategy,) + self.strategies[i + 1:])


def profile(*strategies: MixedStrategy) -> Profile:
    return Profile(tuple(strategies))


def pure_profile(*indices: int) -> Profile:
    return Profile(tuple(point_mass(i, j) for i, j in enumerate(indices)))


def validate_profile(g: Game, p: Profile) -> list[str]:
    """Messages for every malformed distribution; empty means valid."""
    if len(p) != g.n:
        return [f"profile has {len(p)} mixed strategies for {g.n} players"]
    problems = []
    for i, (name, ms) in enumerate(zip(g.players, p)):
        if ms.owner != i:
            problems.append(f"{name} slot holds a strategy owned by player #{ms.owner + 1}")
        size = strategy_count(g, i)
        for j, prob in ms.probs:
            if not 0 <= j < size:
                problems.append(f"{name} strategy index {j} out of range 0..{size - 1}")
            if prob < 0:
                problems.append(f"{name} negative probability {format_rational(prob)}")
        total = sum((prob for _, prob in ms.probs), Fraction(0))
        if total != 1:
            problems.append(f"{name} probabilities sum to {format_rational(total)}")
    return problems


def expected_payoffs(g: Game, p: Profile, cap: int = MAX_COMBINATIONS) -> tuple[Fraction, ...]:
    """``E[phi_i]`` for every player at once.

    Sums only over the product of the supports, which is exact because
    every other term carries a zero weight.
    """
    blocks = [ms.probs for ms in p]
    count = math.prod(len(b) for b in blocks)
    if count > cap:
        raise CapExceeded("support combinations", count, cap)
    totals = [Fraction(0)] * g.n
    for entries in itertools.product(*blocks):
        weight = Fraction(1)
        for _, prob in entries:
            weight *= prob
        row = payoff_vector(g, tuple(j for j, _ in entries))
        for i in range(g.n):
            totals[i] += weight * row[i]
    return tuple(totals)


def expected_payoff(g: Game, i: int, p: Profile, cap: int = MAX_COMBINATIONS) -> Fraction:
    return expected_payoffs(g, p, cap)[i]


def deviation_payoffs(g: Game, i: int, p: Profile,
                      cap: int = MAX_COMBINATIONS) -> list[tuple[Fraction, ...]]:
    """Expected payoff vectors when player ``i`` switches to each pure strategy.

    Entry ``s`` is ``expected_payoffs(g, p.replace(i, point_mass(i, s)))``.
    Because expectations are affine in ``p[i]``, the vector for any mixed
    deviation ``w`` is ``sum_s w[s] * entry[s]``.
    """
    others = [ms.probs for j, ms in enumerate(p) if j != i]
    size = strategy_count(g, i)
    count = size * math.prod(len(b) for b in others)
    if count > cap:
        raise CapExceeded("deviation combinations", count, cap)
    rows = []
    for s in range(size):
        totals = [Fraction(0)] * g.n
        for entries in itertools.product(*others):
            weight = Fraction(1)
            for _, prob in entries:
                weight *= prob
            combo = [j for j, _ in entries]
            combo.insert(i, s)
            row = payoff_vector(g, tuple(combo))
            for t in range(g.n):
                totals[t] += weight * row[t]
        rows.append(tuple(totals))
    return rows


def mix(rows: Sequence[tuple[Fraction, ...]], weights: Mapping[int, Fraction]) -> tuple[Fraction, ...]:
    """Convex combination of payoff vectors (see :func:`deviation_payoffs`)."""
    width = len(rows[0])
    out = [Fraction(0)] * width
    for s, w in weights.items():
        if w:
            for t in range(width):
                out[t] += w * rows[s][t]
    return tuple(out)


def goal_value(g: Game, i: int, expectations: Sequence[Fraction]) -> Fraction:
    """Value of player ``i``'s goal given every player's expected payoff."""
    return eval_modal_closed(g.goals[i], dict(enumerate(expectations)))


def eval_goal(g: Game, i: int, p: Profile) -> Fraction:
    """Truth value of player ``i``'s goal formula in the model given by ``p``."""
    return goal_value(g, i, expected_payoffs(g, p))


def goal_values(g: Game, p: Profile) -> tuple[Fraction, ...]:
    expectations = expected_payoffs(g, p)
    return tuple(goal_value(g, i, expectations) for i in range(g.n))
