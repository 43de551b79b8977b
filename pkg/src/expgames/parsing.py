"""Text formats: formulas, game files, profile files.

Formula syntax (loosest to tightest, all binary operators right-associative)::

    ->      implication               ->.   truncated division (goals only)
    <->     biconditional             \\/    max-disjunction
    /\\      min-conjunction           (+)   strong disjunction   (-)  ominus
    &       strong conjunction        *     product (goals only)
    ~x      negation                  D(x)  Delta (goals only)
    d(a, b) distance                  c{3/4} constant
    E[P1]   expected payoff of player P1 (goals only)

Game file::

    k: 1
    player P1 controls p1
    player P2 controls p2
    payoff P1: p1
    payoff P2: p2
    goal P1: ~d(E[P1], E[P2])
    goal P2: d(E[P1], E[P2])

Profile file, one entry per line (omitted strategies have probability 0)::

    P1  p1=0   1/2
    P1  p1=1   1/2
    P2  p2=1   1

Everything after ``#`` on a line is a comment. Parsers raise
:class:`~expgames.errors.ParseError` carrying :class:`Diagnostic` objects
whose byte spans index into the parsed text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParseError
from .expectation import MixedStrategy, Profile, validate_profile
from .game import Game, Strategy, enumerate_strategies, strategy_index, validate_game
from .logic import (
    BINARY_SYNTAX,
    Const,
    Delta,
    Distance,
    Formula,
    LkScale,
    ModalAtom,
    Neg,
    Var,
    format_formula,
    format_rational,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    start: int
    end: int
    message: str

    def render(self, source: str, filename: str = "<input>") -> str:
        line = source.count("\n", 0, self.start) + 1
        line_start = source.rfind("\n", 0, self.start) + 1
        line_end = source.find("\n", self.start)
        if line_end == -1:
            line_end = len(source)
        col = self.start - line_start + 1
        width = max(1, min(self.end, line_end) - self.start)
        text = source[line_start:line_end]
        return (f"{filename}:{line}:{col}: {self.severity}: {self.message}\n"
                f"    {text}\n    {' ' * (col - 1)}{'^' * width}")


def _error(start, end, message):
    return Diagnostic("error", start, end, message)


# --------------------------------------------------------------------------
# formulas

_OPERATORS = {tok: (cls, prec) for cls, (tok, prec) in BINARY_SYNTAX.items()}
_MODAL_ONLY = {"*", "->."}
_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<const>c\{(?P<value>[^}]*)\})
  | (?P<op>->\.|<->|->|\\/|/\\|\(\+\)|\(-\)|&|\*|~)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],])
""", re.VERBOSE)
_RATIONAL_RE = re.compile(r"\s*\d+\s*(/\s*\d+\s*)?")


@dataclass(frozen=True)
class _Token:
    kind: str  # const, op, ident, punct, eof
    text: str
    start: int
    end: int


def _tokenize(text: str, offset: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError([_error(offset + pos, offset + pos + 1,
                                     f"unexpected character {text[pos]!r}")])
        kind = next(name for name in ("ws", "const", "op", "ident", "punct") if m.group(name) is not None)
        if kind != "ws":
            tokens.append(_Token(kind, m.group(0), offset + m.start(), offset + m.end()))
        pos = m.end()
    tokens.append(_Token("eof", "", offset + len(text), offset + len(text)))
    return tokens


class _FormulaParser:
    def __init__(self, text: str, offset: int, players: Optional[Sequence[str]]):
        self.tokens = _tokenize(text, offset)
        self.pos = 0
        self.players = list(players) if players is not None else None
        self.modal = players is not None
        self.errors: list[Diagnostic] = []

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def peek(self, n=1) -> _Token:
        return self.tokens[min(self.pos + n, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tok
        self.pos += 1
        return tok

    def fail(self, tok: _Token, message: str):
        end = tok.end if tok.kind == "eof" else max(tok.end, tok.start + 1)
        raise ParseError(self.errors + [_error(tok.start, end, message)])

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            self.fail(self.tok, f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Formula:
        node = self.expr(0)
        if self.tok.kind != "eof":
            self.fail(self.tok, f"unexpected {self.tok.text!r}")
        if self.errors:
            raise ParseError(self.errors)
        return node

    def expr(self, min_prec: int) -> Formula:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in _OPERATORS:
            cls, prec = _OPERATORS[self.tok.text]
            if prec < min_prec:
                break
            op = self.advance()
            if op.text in _MODAL_ONLY and not self.modal:
                self.errors.append(_error(op.start, op.end,
                                          f"operator {op.text!r} is only allowed in goal formulas"))
            right = self.expr(prec)  # same level again: right-associative
            left = cls(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "op" and tok.text == "~":
            self.advance()
            return Neg(self.unary())
        if tok.kind == "ident" and tok.text == "D" and self.peek().text == "(":
            if not self.modal:
                self.errors.append(_error(tok.start, tok.end, "D(...) is only allowed in goal formulas"))
            self.advance()
            self.expect("(")
            arg = self.expr(0)
            self.expect(")")
            return Delta(arg)
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            node = self.expr(0)
            self.expect(")")
            return node
        if tok.kind == "const":
            self.advance()
            body = tok.text[2:-1]
            try:
                value = _parse_rational(body)
            except (ValueError, ZeroDivisionError):
                self.fail(tok, f"malformed constant {tok.text!r}; expected c{{a/b}}")
            if value > 1:
                self.errors.append(_error(tok.start, tok.end, f"constant {body.strip()} exceeds 1"))
            return Const(value)
        if tok.kind == "ident":
            if tok.text == "d" and self.peek().text == "(":
                self.advance()
                self.expect("(")
                left = self.expr(0)
                self.expect(",")
                right = self.expr(0)
                self.expect(")")
                return Distance(left, right)
            if tok.text == "E" and self.peek().text == "[":
                return self.modal_atom()
            self.advance()
            if self.modal:
                self.errors.append(_error(tok.start, tok.end,
                                          f"variable {tok.text} outside a modal atom; write E[player]"))
            return Var(tok.text)
        found = tok.text or "end of input"
        self.fail(tok, f"expected a formula, found {found!r}")

    def modal_atom(self) -> Formula:
        start = self.advance()
        if not self.modal:
            self.errors.append(_error(start.start, start.end, "modal atom E[...] in a payoff formula"))
        self.expect("[")
        tok = self.tok
        if tok.kind == "ident" and tok.text == "E" and self.peek().text == "[":
            self.fail(tok, "nested modality: E[...] cannot occur inside E[...]")
        if tok.kind != "ident":
            self.fail(tok, "expected a player name inside E[...]")
        self.advance()
        self.expect("]")
        index = 0
        if self.players is not None:
            if tok.text in self.players:
                index = self.players.index(tok.text)
            else:
                self.errors.append(_error(tok.start, tok.end, f"unknown player {tok.text}"))
        return ModalAtom(index)


def parse_formula(text: str, *, offset: int = 0) -> Formula:
    """Parse a payoff formula (Łukasiewicz connectives, variables, constants)."""
    return _FormulaParser(text, offset, None).parse()


def parse_modal_formula(text: str, players: Sequence[str], *, offset: int = 0) -> Formula:
    """Parse a goal formula whose atoms are ``E[name]`` for names in ``players``."""
    return _FormulaParser(text, offset, players).parse()


# --------------------------------------------------------------------------
# game files

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_K_RE = re.compile(r"k\s*:\s*(?P<k>\S+)\s*$")
_PLAYER_RE = re.compile(rf"player\s+(?P<name>{_NAME})\s+controls(?P<vars>.*)$")
_PAYOFF_RE = re.compile(rf"(?P<kw>payoff|goal)\s+(?P<name>{_NAME})\s*:(?P<body>.*)$")


def _lines(text: str):
    """(offset, stripped content) of non-blank lines with comments removed."""
    pos = 0
    for raw in text.splitlines(keepends=True):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            yield pos + len(body) - len(stripped), stripped
        pos += len(raw)


def parse_game_file(text: str) -> Game:
    """Parse the line-oriented game format into a validated :class:`Game`."""
    errors: list[Diagnostic] = []
    k_value, k_span = None, None
    players: list[str] = []
    player_spans: dict[str, tuple[int, int]] = {}
    controls: dict[str, list[str]] = {}
    owner: dict[str, str] = {}
    formulas: dict[str, dict[str, tuple[int, str, tuple[int, int]]]] = {"payoff": {}, "goal": {}}

    for offset, line in _lines(text):
        span = (offset, offset + len(line))
        if m := _K_RE.match(line):
            if k_value is not None:
                errors.append(_error(*span, "duplicate k declaration"))
                continue
            k_span = span
            try:
                k_value = int(m.group("k"))
                LkScale(k_value)
            except ValueError:
                errors.append(_error(offset + m.start("k"), offset + m.end("k"),
                                     f"k must be a positive integer, got {m.group('k')!r}"))
                k_value = 0
        elif m := _PLAYER_RE.match(line):
            name = m.group("name")
            if name in controls:
                errors.append(_error(*span, f"duplicate declaration of player {name}"))
                continue
            players.append(name)
            player_spans[name] = span
            controls[name] = []
            vars_offset = offset + m.start("vars")
            for vm in re.finditer(r"[^\s,]+", m.group("vars")):
                v = vm.group(0)
                vspan = (vars_offset + vm.start(), vars_offset + vm.end())
                if not re.fullmatch(_NAME, v):
                    errors.append(_error(*vspan, f"invalid variable name {v!r}"))
                elif v in owner:
                    errors.append(_error(*vspan, f"variable {v} already controlled by {owner[v]}"))
                else:
                    owner[v] = name
                    controls[name].append(v)
            if not m.group("vars").strip():
                errors.append(_error(*span, f"empty control set {name}"))
        elif m := _PAYOFF_RE.match(line):
            kw, name = m.group("kw"), m.group("name")
            if name in formulas[kw]:
                errors.append(_error(*span, f"duplicate {kw} for {name}"))
                continue
            formulas[kw][name] = (offset + m.start("body"), m.group("body"), span)
        else:
            errors.append(_error(*span, "expected 'k:', 'player ... controls ...', 'payoff NAME:' "
                                        "or 'goal NAME:'"))

    if k_value is None:
        errors.append(_error(0, 0, "missing 'k:' declaration"))
    if not players:
        errors.append(_error(0, 0, "no players declared"))

    parsed: dict[str, dict[str, Formula]] = {"payoff": {}, "goal": {}}
    for kw in ("payoff", "goal"):
        for name, (body_offset, body, span) in formulas[kw].items():
            if name not in controls:
                errors.append(_error(*span, f"{kw} for undeclared player {name}"))
                continue
            try:
                if kw == "payoff":
                    f = parse_formula(body, offset=body_offset)
                else:
                    f = parse_modal_formula(body, players, offset=body_offset)
            except ParseError as exc:
                errors.extend(exc.diagnostics)
                continue
            parsed[kw][name] = f
            if kw == "payoff":
                for v in f.variables():
                    if v not in owner:
                        at = body.find(v)
                        errors.append(_error(body_offset + max(at, 0),
                                             body_offset + max(at, 0) + len(v),
                                             f"unknown variable {v}"))
            if kw == "payoff" and k_value:
                scale = LkScale(k_value)
                for node in f.walk():
                    if isinstance(node, Const) and node.value not in scale:
                        errors.append(_error(*span, f"constant {format_rational(node.value)} "
                                                    f"is not in L_{k_value}"))
    for name in players:
        for kw in ("payoff", "goal"):
            if name not in formulas[kw]:
                errors.append(_error(*player_spans[name], f"missing {kw} for {name}"))
    if errors:
        raise ParseError(sorted(errors, key=lambda d: d.start))

    game = Game(
        k=LkScale(k_value),
        players=tuple(players),
        variables=tuple(v for name in players for v in controls[name]),
        controls=tuple(tuple(controls[name]) for name in players),
        payoffs=tuple(parsed["payoff"][name] for name in players),
        goals=tuple(parsed["goal"][name] for name in players),
    )
    leftover = validate_game(game)
    if leftover:
        raise ParseError([_error(*(k_span or (0, 0)), msg) for msg in leftover])
    return game


def format_game(g: Game) -> str:
    """Inverse of :func:`parse_game_file` (canonical layout)."""
    lines = [f"k: {g.k.k}"]
    lines += [f"player {name} controls {', '.join(block)}" for name, block in zip(g.players, g.controls)]
    lines += [f"payoff {name}: {format_formula(phi)}" for name, phi in zip(g.players, g.payoffs)]
    lines += [f"goal {name}: {format_formula(goal, g.players)}" for name, goal in zip(g.players, g.goals)]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# profiles and pure combinations


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.fullmatch(text):
        raise ValueError(text)
    return Fraction(text.replace(" ", ""))


def _parse_assignment(text: str, offset: int, errors: list[Diagnostic]) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    pos = 0
    for part in text.split(","):
        start = offset + pos
        pos += len(part) + 1
        name, eq, value = part.partition("=")
        span = (start, start + len(part))
        if not eq:
            errors.append(_error(*span, f"expected var=value, found {part.strip()!r}"))
            continue
        try:
            val = _parse_rational(value.strip())
        except (ValueError, ZeroDivisionError):
            errors.append(_error(*span, f"malformed value {value.strip()!r}"))
            continue
        if name.strip() in out:
            errors.append(_error(*span, f"{name.strip()} assigned twice"))
        out[name.strip()] = val
    return out


def parse_profile_file(text: str, game: Game) -> Profile:
    """Parse a profile file against ``game`` and validate the distributions."""
    errors: list[Diagnostic] = []
    entries: dict[int, dict[int, Fraction]] = {i: {} for i in range(game.n)}
    first_span: dict[int, tuple[int, int]] = {}
    for offset, line in _lines(text):
        span = (offset, offset + len(line))
        fields = list(re.finditer(r"\S+", line))
        if len(fields) != 3:
            errors.append(_error(*span, "expected 'PLAYER var=value,... probability'"))
            continue
        player, assignment, prob = fields
        if player.group(0) not in game.players:
            errors.append(_error(offset + player.start(), offset + player.end(),
                                 f"unknown player {player.group(0)}"))
            continue
        i = game.players.index(player.group(0))
        first_span.setdefault(i, span)
        values = _parse_assignment(assignment.group(0), offset + assignment.start(), errors)
        aspan = (offset + assignment.start(), offset + assignment.end())
        try:
            index = strategy_index(game, i, values)
        except ValueError as exc:
            errors.append(_error(*aspan, str(exc)))
            continue
        try:
            p = _parse_rational(prob.group(0))
        except (ValueError, ZeroDivisionError):
            errors.append(_error(offset + prob.start(), offset + prob.end(),
                                 f"malformed probability {prob.group(0)!r}"))
            continue
        if index in entries[i]:
            errors.append(_error(*span, f"duplicate entry for {player.group(0)}"))
        entries[i][index] = p
    if errors:
        raise ParseError(errors)
    prof = Profile(tuple(MixedStrategy.of(i, entries[i]) for i in range(game.n)))
    problems = validate_profile(game, prof)
    if problems:
        diagnostics = []
        for msg in problems:
            owner = next((i for i, n in enumerate(game.players) if msg.startswith(n + " ")), None)
            diagnostics.append(_error(*first_span.get(owner, (0, 0)), msg))
        raise ParseError(diagnostics)
    return prof


def format_mixed_strategy(game: Game, ms: MixedStrategy) -> list[str]:
    strategies = enumerate_strategies(game, ms.owner)
    name = game.players[ms.owner]
    return [f"{name}  {_format_assignment(strategies[j])}  {format_rational(p)}" for j, p in ms.probs]


def _format_assignment(s: Strategy) -> str:
    return ",".join(f"{v}={format_rational(val)}" for v, val in s.assignment)


def format_profile(game: Game, p: Profile) -> str:
    """Inverse of :func:`parse_profile_file`."""
    lines = []
    for ms in p:
        lines.extend(format_mixed_strategy(game, ms))
    return "\n".join(lines) + "\n"


def format_strategy_compact(game: Game, ms: MixedStrategy) -> str:
    """One-line rendering, e.g. ``p1=0:1/2|p1=1:1/2``."""
    strategies = enumerate_strategies(game, ms.owner)
    return "|".join(f"{_format_assignment(strategies[j])}:{format_rational(p)}" for j, p in ms.probs)


def parse_combination(text: str, game: Game) -> tuple[Strategy, ...]:
    """``p1=1,p2=0`` -> one pure strategy per player."""
    errors: list[Diagnostic] = []
    values = _parse_assignment(text, 0, errors)
    if errors:
        raise ParseError(errors)
    missing = [v for v in game.variables if v not in values]
    extra = [v for v in values if v not in game.variables]
    if missing or extra:
        msg = "; ".join(filter(None, [missing and f"missing {', '.join(missing)}",
                                      extra and f"unknown {', '.join(extra)}"]))
        raise ParseError([_error(0, len(text), msg)])
    bad = [v for v in game.variables if values[v] not in game.k]
    if bad:
        raise ParseError([_error(0, len(text), f"value of {bad[0]} is not in L_{game.k.k}")])
    return tuple(Strategy(i, tuple((v, values[v]) for v in block)) for i, block in enumerate(game.controls))
