"""
Equilibria when every goal is an expectation
============================================

If each player's goal is just E[phi_i], goals are linear in the deviating
player's distribution, so checking pure deviations is enough to certify
a best response. Such games always have an equilibrium.
"""
import random
from pathlib import Path

from expgames import parse_game_file, search_equilibrium, verify_equilibrium
from expgames.equilibrium import best_response_dynamics
from expgames.expectation import pure_profile
from expgames.game import make_game
from expgames.parsing import format_profile, format_strategy_compact, parse_formula

DATA = Path(__file__).parent / "data"
game = parse_game_file((DATA / "example1.exg").read_text())

print("(1, 1):", verify_equilibrium(game, pure_profile(1, 1)).overall)
w = verify_equilibrium(game, pure_profile(0, 1)).overall.witness
print(f"(0, 1): {game.players[w.player]} gains by playing {format_strategy_compact(game, w.new_strategy)},"
      f" from {w.old_value} to {w.new_value}")

# Best-response dynamics climbs to the top.
trace = best_response_dynamics(game, pure_profile(0, 0))
print("\ndynamics:", trace.status, "after", trace.turns, "turns, ending at")
print(format_profile(game, trace.steps[-1].profile))

# Random two-player games with one variable each and atomic goals.
rng = random.Random(0)
ops = ["&", "(+)", "->", "<->", "(-)", "/\\", "\\/"]
for _ in range(5):
    phi = {name: parse_formula(f"{rng.choice(['p1', '~p1'])} {rng.choice(ops)} {rng.choice(['p2', '~p2'])}")
           for name in ("P1", "P2")}
    g = make_game(1, {"P1": ["p1"], "P2": ["p2"]}, phi)
    result = search_equilibrium(g, 4)
    print(f"\n{phi['P1']}  |  {phi['P2']}")
    print(f"certified={result.certified} after {result.examined} profiles:")
    print(format_profile(g, result.profile), end="")
