"""
A game without equilibrium
==========================

P1 wants the two expected payoffs to agree, P2 wants them apart. Whatever
the profile, somebody can do better, so no equilibrium exists; on a
finite grid this shows up as a deviation witness everywhere and as
best-response dynamics that go round in circles.
"""
from pathlib import Path

from expgames import parse_game_file, verify_equilibrium
from expgames.equilibrium import best_response_dynamics, grid_profiles, search_equilibrium
from expgames.expectation import eval_goal, pure_profile
from expgames.parsing import format_strategy_compact

DATA = Path(__file__).parent / "data"
game = parse_game_file((DATA / "example2.exg").read_text())

# Every profile with probabilities in quarters is refuted.
for p in grid_profiles(game, 4):
    w = verify_equilibrium(game, p, 4).overall.witness
    deviated = p.replace(w.player, w.new_strategy)
    assert eval_goal(game, w.player, deviated) == w.new_value > w.old_value
    print(f"{format_strategy_compact(game, p[0]):>22} {format_strategy_compact(game, p[1]):>22}"
          f"   {game.players[w.player]} -> {format_strategy_compact(game, w.new_strategy)}"
          f" ({w.old_value} to {w.new_value})")

# The smallest grid gain is still positive.
best = search_equilibrium(game, 4)
print("\nbest grid profile leaves a gain of", best.epsilon)

# Dynamics cycle through the four pure profiles.
trace = best_response_dynamics(game, pure_profile(0, 0))
print("\ndynamics:", trace.status, "with period", trace.period)
for step in trace.steps:
    print("  ", [format_strategy_compact(game, ms) for ms in step.profile], step.values)
