"""
Games, mixed strategies and expected payoffs
============================================

A game hands each player a block of variables. A pure strategy fixes
those variables on L_k; a mixed strategy is a distribution over pure
strategies, and the expected payoff of a formula is its average under
the product distribution.
"""
from fractions import Fraction
from pathlib import Path

from expgames import expected_payoff, parse_game_file, parse_profile_file, validate_game
from expgames.expectation import MixedStrategy, eval_goal, profile, uniform
from expgames.game import enumerate_strategies, game_type

DATA = Path(__file__).parent / "data"
game = parse_game_file((DATA / "effort.exg").read_text())
print("type:", game_type(game), "valid:", validate_game(game) == [])

# P1 controls two three-valued variables, so it has nine pure strategies.
for j, s in enumerate(enumerate_strategies(game, 0)):
    print(f"  s{j}: " + ", ".join(f"{v}={x}" for v, x in s.assignment))

# Everybody mixes uniformly.
everyone = profile(*(uniform(game, i) for i in range(game.n)))
for i, name in enumerate(game.players):
    print(f"E[{name}] = {expected_payoff(game, i, everyone)}")

# Goals combine the expectations with the product logic connectives.
for i, name in enumerate(game.players):
    print(f"goal of {name}: {game.goals[i]}  ->  {eval_goal(game, i, everyone)}")

# Expectations are affine in each player's own distribution.
lam = Fraction(1, 3)
high = MixedStrategy.of(1, {2: Fraction(1)})
mixed = MixedStrategy.of(1, {s: lam * everyone[1].prob(s) + (1 - lam) * high.prob(s) for s in range(3)})
lhs = expected_payoff(game, 0, everyone.replace(1, mixed))
rhs = lam * expected_payoff(game, 0, everyone) + (1 - lam) * expected_payoff(game, 0, everyone.replace(1, high))
print(f"\nmixing P2 with weight {lam}: {lhs} == {rhs}")

# Profiles can be read from text as well.
two = parse_game_file((DATA / "example2.exg").read_text())
print("\nuniform_point.prof:", parse_profile_file((DATA / "uniform_point.prof").read_text(), two))
