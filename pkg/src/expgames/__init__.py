"""Expectation games: Łukasiewicz games whose goals are ŁΠ½ formulas over expected payoffs.

Submodules:

``logic``        formula trees, exact evaluation, tautology checks
``game``         players, controlled variables, pure strategies, payoffs
``expectation``  mixed strategies, profiles, expected payoffs, goal values
``equilibrium``  deviation witnesses, verification, dynamics, grid search
``rcf``          SMT-LIB2 encodings of verification and existence questions
``parsing``      text formats for formulas, games and profiles
``cli``          the ``expgames`` command
"""
from .equilibrium import (
    DeviationWitness,
    Equilibrium,
    NotEquilibrium,
    Unknown,
    best_response_dynamics,
    grid_refute,
    pure_deviation_refute,
    search_equilibrium,
    verify_equilibrium,
)
from .errors import CapExceeded, EvaluationError, ParseError, SolverError
from .expectation import (
    MixedStrategy,
    Profile,
    eval_goal,
    expected_payoff,
    point_mass,
    profile,
    pure_profile,
    uniform,
    validate_profile,
)
from .game import Game, GameType, enumerate_strategies, game_type, make_game, payoff, same_class, validate_game
from .logic import LkScale, eval_formula, eval_modal_closed, expand_derived, is_tautology
from .parsing import parse_formula, parse_game_file, parse_modal_formula, parse_profile_file

__version__ = "0.1.0"

__all__ = [
    "best_response_dynamics",
    "CapExceeded",
    "DeviationWitness",
    "enumerate_strategies",
    "Equilibrium",
    "eval_formula",
    "eval_goal",
    "eval_modal_closed",
    "EvaluationError",
    "expand_derived",
    "expected_payoff",
    "Game",
    "game_type",
    "GameType",
    "grid_refute",
    "is_tautology",
    "LkScale",
    "make_game",
    "MixedStrategy",
    "NotEquilibrium",
    "parse_formula",
    "parse_game_file",
    "parse_modal_formula",
    "parse_profile_file",
    "ParseError",
    "payoff",
    "point_mass",
    "Profile",
    "profile",
    "pure_deviation_refute",
    "pure_profile",
    "same_class",
    "search_equilibrium",
    "SolverError",
    "uniform",
    "Unknown",
    "validate_game",
    "validate_profile",
    "verify_equilibrium",
]
