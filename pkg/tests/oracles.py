"""Reference computations that share no code path with the library's fast paths.

The expected-payoff oracle walks every strategy combination, builds the
valuation by hand and multiplies probabilities per term; the library sums
over supports with memoised payoff rows.
"""
import itertools
from fractions import Fraction

from expgames.logic import eval_formula


def naive_expected_payoff(game, i, profile):
    k = game.k.k
    per_player = []
    for block in game.controls:
        per_player.append(list(itertools.product(range(k + 1), repeat=len(block))))
    total = Fraction(0)
    for combo in itertools.product(*(range(len(s)) for s in per_player)):
        weight = Fraction(1)
        for j, s in enumerate(combo):
            weight *= profile[j].prob(s)
        valuation = {}
        for j, s in enumerate(combo):
            for v, level in zip(game.controls[j], per_player[j][s]):
                valuation[v] = Fraction(level, k)
        total += weight * eval_formula(game.payoffs[i], valuation, game.k)
    return total


def grid_points(size, denominator):
    """Distributions over range(size) with probabilities in multiples of 1/denominator."""
    for counts in itertools.product(range(denominator + 1), repeat=size):
        if sum(counts) == denominator:
            yield {s: Fraction(c, denominator) for s, c in enumerate(counts) if c}


def brute_best_value(game, i, profile, denominator):
    """Highest goal value player i reaches by any grid deviation, substituting into the profile."""
    from expgames.expectation import MixedStrategy, eval_goal
    from expgames.game import strategy_count

    best = None
    for w in grid_points(strategy_count(game, i), denominator):
        v = eval_goal(game, i, profile.replace(i, MixedStrategy.of(i, w)))
        best = v if best is None or v > best else best
    return best


def witness_reverifies(game, profile, witness):
    from expgames.expectation import eval_goal, validate_profile

    i = witness.player
    deviated = profile.replace(i, witness.new_strategy)
    return (validate_profile(game, deviated) == []
            and witness.new_strategy.owner == i
            and eval_goal(game, i, profile) == witness.old_value
            and eval_goal(game, i, deviated) == witness.new_value
            and witness.new_value > witness.old_value)
