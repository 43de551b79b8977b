"""Łukasiewicz games: players, controlled variables, pure strategies, payoffs."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import CapExceeded, EvaluationError
from .logic import (
    PRODUCT_NODES,
    Const,
    Formula,
    LkScale,
    ModalAtom,
    Var,
    eval_formula,
)

#: refuse to enumerate a single player's strategy set larger than this
MAX_STRATEGIES = 10**6
#: refuse to enumerate more strategy combinations than this
MAX_COMBINATIONS = 10**7


@dataclass(frozen=True)
class GameType:
    """The triple <n, m, delta>: player count, variable count, block sizes."""

    n: int
    m: int
    delta: tuple[int, ...]


@dataclass(frozen=True)
class Strategy:
    """A pure strategy: an L_k value for every variable the owner controls."""

    owner: int
    assignment: tuple[tuple[str, Fraction], ...]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.assignment)


StrategyCombination = tuple[Strategy, ...]


@dataclass(frozen=True)
class Game:
    """An expectation game over a Łukasiewicz game on L_k with constants.

    ``controls[i]`` lists the variables of player ``players[i]`` and
    ``payoffs[i]`` / ``goals[i]`` are that player's payoff formula and goal
    formula. Nothing is checked at construction; call :func:`validate_game`.
    """

    k: LkScale
    players: tuple[str, ...]
    variables: tuple[str, ...]
    controls: tuple[tuple[str, ...], ...]
    payoffs: tuple[Formula, ...]
    goals: tuple[Formula, ...]

    @property
    def n(self) -> int:
        return len(self.players)

    def player_index(self, name: str) -> int:
        try:
            return self.players.index(name)
        except ValueError:
            raise KeyError(f"unknown player {name}") from None

    def _cache(self) -> dict:
        cache = self.__dict__.get("_memo")
        if cache is None:
            cache = {"payoffs": {}}
            object.__setattr__(self, "_memo", cache)
        return cache


def make_game(k, controls: Mapping[str, Sequence[str]], payoffs: Mapping[str, Formula],
              goals: Optional[Mapping[str, Formula]] = None) -> Game:
    """Assemble a :class:`Game` from per-player mappings.

    Players and variables are ordered by ``controls``. Missing goals default
    to ``E[own payoff]``, i.e. plain expected-payoff maximisation.
    """
    players = tuple(controls)
    goals = dict(goals or {})
    return Game(
        k=k if isinstance(k, LkScale) else LkScale(k),
        players=players,
        variables=tuple(v for name in players for v in controls[name]),
        controls=tuple(tuple(controls[name]) for name in players),
        payoffs=tuple(payoffs[name] for name in players),
        goals=tuple(goals.get(name, ModalAtom(i)) for i, name in enumerate(players)),
    )


def validate_game(g: Game) -> list[str]:
    """Every violated structural invariant, as messages; empty means valid."""
    problems = []
    if not g.players:
        problems.append("no players")
    for name, count in Counter(g.players).items():
        if count > 1:
            problems.append(f"duplicate player {name}")
    for name, count in Counter(g.variables).items():
        if count > 1:
            problems.append(f"duplicate variable {name}")
    for what, seq in (("control sets", g.controls), ("payoffs", g.payoffs), ("goals", g.goals)):
        if len(seq) != len(g.players):
            problems.append(f"{len(seq)} {what} for {len(g.players)} players")
    if problems:
        return problems

    known = set(g.variables)
    owner: dict[str, str] = {}
    for name, block in zip(g.players, g.controls):
        if not block:
            problems.append(f"empty control set {name}")
        for v in block:
            if v not in known:
                problems.append(f"unknown controlled variable {v} (player {name})")
            elif v in owner:
                problems.append(f"variable {v} controlled by both {owner[v]} and {name}")
            else:
                owner[v] = name
    for v in g.variables:
        if v not in owner:
            problems.append(f"uncontrolled variable {v}")

    for name, phi in zip(g.players, g.payoffs):
        for node in phi.walk():
            if isinstance(node, Var) and node.name not in known:
                problems.append(f"unknown variable {node.name} (payoff {name})")
            elif isinstance(node, Const) and node.value not in g.k:
                problems.append(f"constant {node.value} not in L_{g.k.k} (payoff {name})")
            elif isinstance(node, ModalAtom):
                problems.append(f"modal atom in payoff {name}")
            elif isinstance(node, PRODUCT_NODES):
                problems.append(f"{type(node).__name__} not allowed in payoff {name}")

    for name, goal in zip(g.players, g.goals):
        for node in goal.walk():
            if isinstance(node, ModalAtom) and not 0 <= node.player < g.n:
                problems.append(f"modal atom refers to player #{node.player + 1} (goal {name})")
            elif isinstance(node, Var):
                problems.append(f"bare variable {node.name} outside a modal atom (goal {name})")
            elif isinstance(node, Const) and not 0 <= node.value <= 1:
                problems.append(f"constant {node.value} outside [0, 1] (goal {name})")
    # dedupe while keeping order: one bad variable may appear many times
    return list(dict.fromkeys(problems))


def game_type(g: Game) -> GameType:
    return GameType(n=g.n, m=len(g.variables), delta=tuple(len(b) for b in g.controls))


def same_class(t1: GameType, t2: GameType) -> bool:
    """Whether two game types differ only by a permutation of players."""
    return t1.n == t2.n and t1.m == t2.m and Counter(t1.delta) == Counter(t2.delta)


# --------------------------------------------------------------------------
# strategies


def strategy_count(g: Game, i: int) -> int:
    return len(g.k) ** len(g.controls[i])


def combination_count(g: Game) -> int:
    return math.prod(strategy_count(g, i) for i in range(g.n))


def strategy_values(g: Game, i: int, cap: int = MAX_STRATEGIES) -> tuple[tuple[Fraction, ...], ...]:
    """Value tuples of player ``i``'s pure strategies, in lexicographic order."""
    size = strategy_count(g, i)
    if size > cap:
        raise CapExceeded(f"strategies of {g.players[i]}", size, cap)
    cache = g._cache()
    key = ("values", i)
    if key not in cache:
        cache[key] = tuple(itertools.product(g.k.values, repeat=len(g.controls[i])))
    return cache[key]


def enumerate_strategies(g: Game, i: int, cap: int = MAX_STRATEGIES) -> list[Strategy]:
    """All pure strategies of player ``i``.

    Lexicographic order: the first controlled variable is most significant
    and values ascend from 0 to 1, so index ``j`` is ``j`` written in base
    ``k+1``.
    """
    block = g.controls[i]
    return [Strategy(i, tuple(zip(block, values))) for values in strategy_values(g, i, cap)]


def strategy_index(g: Game, i: int, assignment: Mapping[str, Fraction]) -> int:
    """Inverse of :func:`enumerate_strategies` for a single assignment."""
    block = g.controls[i]
    if set(assignment) != set(block):
        raise ValueError(f"assignment must cover exactly {', '.join(block)}")
    index = 0
    for v in block:
        value = Fraction(assignment[v])
        if value not in g.k:
            raise EvaluationError(f"{v} = {value} is not in L_{g.k.k}")
        index = index * len(g.k) + int(value * g.k.k)
    return index


def combination_valuation(g: Game, combo: Sequence[int]) -> dict[str, Fraction]:
    valuation = {}
    for i, j in enumerate(combo):
        valuation.update(zip(g.controls[i], strategy_values(g, i)[j]))
    return valuation


def payoff(g: Game, i: int, s: StrategyCombination) -> Fraction:
    """Player ``i``'s payoff under a pure strategy combination."""
    valuation = {}
    for strategy in s:
        valuation.update(strategy.assignment)
    return eval_formula(g.payoffs[i], valuation, g.k)


def payoff_vector(g: Game, combo: tuple[int, ...]) -> tuple[Fraction, ...]:
    """All players' payoffs at the combination given by strategy indices (memoised)."""
    table = g._cache()["payoffs"]
    row = table.get(combo)
    if row is None:
        valuation = combination_valuation(g, combo)
        row = tuple(eval_formula(phi, valuation, g.k) for phi in g.payoffs)
        table[combo] = row
    return row


def all_combinations(g: Game, cap: int = MAX_COMBINATIONS):
    size = combination_count(g)
    if size > cap:
        raise CapExceeded("strategy combinations", size, cap)
    return itertools.product(*(range(strategy_count(g, i)) for i in range(g.n)))
