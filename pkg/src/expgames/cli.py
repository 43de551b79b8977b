"""Command-line interface.

Exit codes: 0 success / equilibrium / tautology, 1 refutation / non-tautology
/ cycle, 2 unknown, 64 usage error, 65 malformed input, 66 unreadable file,
70 enumeration cap or solver failure.

``--report FILE`` writes a machine-readable summary of ``key=value`` lines::

    verdict=not-equilibrium        # equilibrium | not-equilibrium | unknown
    certificate=exact              # only for equilibrium
    epsilon=1/2                    # largest observed grid gain
    player=P1                      # then per-player lines until the next player=
    player_verdict=not-equilibrium
    witness=p1=1:1                 # assignment:probability entries joined by |
    old_value=1/2
    new_value=1
"""
from __future__ import annotations

import argparse
import subprocess
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .equilibrium import (
    Equilibrium,
    NotEquilibrium,
    Unknown,
    best_response_dynamics,
    search_equilibrium,
    verify_equilibrium,
)
from .errors import CapExceeded, ParseError, SolverError
from .expectation import Profile, expected_payoffs, goal_values, point_mass
from .game import game_type, payoff
from .logic import LkScale, eval_formula, find_countermodel, format_rational
from .parsing import (
    format_profile,
    format_strategy_compact,
    parse_combination,
    parse_formula,
    parse_game_file,
    parse_profile_file,
)
from .rcf import compile_existence_sentence, compile_verification_query, run_solver

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATAERR, EXIT_NOINPUT, EXIT_SOFTWARE = 64, 65, 66, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _InputError(Exception):
    def __init__(self, code, text):
        super().__init__(text)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(EXIT_NOINPUT, f"cannot read {path}: {exc.strerror}") from None


def _parse(path, parser, *args):
    text = _read(path)
    try:
        return parser(text, *args)
    except ParseError as exc:
        rendered = "\n".join(d.render(text, path) for d in exc.diagnostics)
        raise _InputError(EXIT_DATAERR, rendered) from None


def _load_game(path):
    return _parse(path, parse_game_file)


def _load_profile(path, game):
    return _parse(path, parse_profile_file, game)


def _r(x: Fraction) -> str:
    return format_rational(x)


def _verdict_name(v) -> str:
    return {Equilibrium: "equilibrium", NotEquilibrium: "not-equilibrium", Unknown: "unknown"}[type(v)]


def _verdict_code(v) -> int:
    return {Equilibrium: EXIT_OK, NotEquilibrium: EXIT_REFUTED, Unknown: EXIT_UNKNOWN}[type(v)]


def _describe(game, v) -> str:
    if isinstance(v, Equilibrium):
        return f"best response ({v.certificate} certificate)"
    if isinstance(v, NotEquilibrium):
        w = v.witness
        return (f"refuted: deviating to {format_strategy_compact(game, w.new_strategy)} "
                f"raises the goal from {_r(w.old_value)} to {_r(w.new_value)}")
    return f"unknown: no improvement on the 1/{v.grid_denominator} grid, goal not certifiable"


def _report_lines(game, report, epsilon: Optional[Fraction] = None) -> list[str]:
    lines = [f"verdict={_verdict_name(report.overall)}"]
    if isinstance(report.overall, Equilibrium):
        lines.append(f"certificate={report.overall.certificate}")
    if epsilon is not None:
        lines.append(f"epsilon={_r(epsilon)}")
    for name, v in zip(game.players, report.players):
        lines += [f"player={name}", f"player_verdict={_verdict_name(v)}"]
        if isinstance(v, NotEquilibrium):
            w = v.witness
            lines += [f"witness={format_strategy_compact(game, w.new_strategy)}",
                      f"old_value={_r(w.old_value)}", f"new_value={_r(w.new_value)}"]
        elif isinstance(v, Unknown):
            lines.append(f"grid_denominator={v.grid_denominator}")
    return lines


def _write_report(path, lines):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args, out):
    game = _load_game(args.game)
    t = game_type(game)
    print(f"ok: {t.n} players, {t.m} variables, k={game.k.k}, "
          f"type <{t.n}, {t.m}, ({', '.join(map(str, t.delta))})>", file=out)
    return EXIT_OK


def cmd_eval(args, out):
    game = _load_game(args.game)
    try:
        combo = parse_combination(args.combination, game)
    except ParseError as exc:
        raise _InputError(EXIT_DATAERR, "\n".join(d.render(args.combination, "--combination")
                                                  for d in exc.diagnostics)) from None
    for i, name in enumerate(game.players):
        print(f"{name}\t{_r(payoff(game, i, combo))}", file=out)
    return EXIT_OK


def cmd_expect(args, out):
    game = _load_game(args.game)
    prof = _load_profile(args.profile, game)
    for name, value in zip(game.players, expected_payoffs(game, prof)):
        print(f"E[{name}]\t{_r(value)}", file=out)
    return EXIT_OK


def cmd_goals(args, out):
    game = _load_game(args.game)
    prof = _load_profile(args.profile, game)
    for name, value in zip(game.players, goal_values(game, prof)):
        print(f"{name}\t{_r(value)}", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    game = _load_game(args.game)
    prof = _load_profile(args.profile, game)
    report = verify_equilibrium(game, prof, args.grid)
    for name, v in zip(game.players, report.players):
        print(f"{name}: {_describe(game, v)}", file=out)
    print(f"overall: {_verdict_name(report.overall)}", file=out)
    _write_report(args.report, _report_lines(game, report))
    return _verdict_code(report.overall)


def _start_profile(game, path) -> Profile:
    if path:
        return _load_profile(path, game)
    return Profile(tuple(point_mass(i, 0) for i in range(game.n)))


def cmd_dynamics(args, out):
    game = _load_game(args.game)
    start = _start_profile(game, args.start)
    trace = best_response_dynamics(game, start, args.max_iters, args.grid)
    for n, step in enumerate(trace.steps):
        who = "start" if step.mover is None else f"{game.players[step.mover]} moves"
        values = ", ".join(f"{name}={_r(v)}" for name, v in zip(game.players, step.values))
        strategies = "  ".join(format_strategy_compact(game, ms) for ms in step.profile)
        print(f"[{n}] {who}: {strategies}  goals: {values}", file=out)
    status = trace.status if trace.period is None else f"{trace.status} (period {trace.period})"
    print(f"status: {status} after {trace.turns} turns", file=out)
    lines = [f"status={trace.status}", f"turns={trace.turns}", f"steps={len(trace.steps) - 1}"]
    if trace.period is not None:
        lines.append(f"period={trace.period}")
    _write_report(args.report, lines)
    return {"fixed-point": EXIT_OK, "cycle": EXIT_REFUTED}.get(trace.status, EXIT_UNKNOWN)


def cmd_search(args, out):
    game = _load_game(args.game)
    result = search_equilibrium(game, args.grid)
    if result.certified:
        print(f"certified equilibrium found after {result.examined} grid profiles:", file=out)
    else:
        print(f"no certified equilibrium among {result.examined} profiles on the 1/{args.grid} grid; "
              f"smallest epsilon {_r(result.epsilon)} at:", file=out)
        print("(an epsilon candidate is evidence, not a proof, either way)", file=out)
    print(format_profile(game, result.profile), end="", file=out)
    report = verify_equilibrium(game, result.profile, args.grid)
    _write_report(args.report, _report_lines(game, report, result.epsilon))
    return EXIT_OK if result.certified else EXIT_UNKNOWN


def cmd_compile(args, out):
    game = _load_game(args.game)
    if args.existence:
        script = compile_existence_sentence(game)
    else:
        if not args.player:
            raise UsageError("--verify requires --player")
        prof = _load_profile(args.verify, game)
        if args.player not in game.players:
            raise _InputError(EXIT_DATAERR, f"unknown player {args.player}")
        script = compile_verification_query(game, prof, game.players.index(args.player))
    text = script.to_text()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if not args.solver:
        return EXIT_OK
    try:
        answer = run_solver(script, args.solver)
    except (OSError, subprocess.SubprocessError, SolverError) as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_SOFTWARE
    print(f"solver: {answer}", file=sys.stderr)
    if answer == "unknown":
        return EXIT_UNKNOWN
    if args.existence:
        return EXIT_OK if answer == "sat" else EXIT_REFUTED
    return EXIT_REFUTED if answer == "sat" else EXIT_OK


def cmd_taut(args, out):
    try:
        formula = parse_formula(args.formula)
    except ParseError as exc:
        raise _InputError(EXIT_DATAERR, "\n".join(d.render(args.formula, "<formula>")
                                                  for d in exc.diagnostics)) from None
    try:
        scale = LkScale(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    counter = find_countermodel(formula, scale)
    if counter is None:
        print(f"tautology over L_{args.k}", file=out)
        return EXIT_OK
    assignment = ", ".join(f"{v}={_r(x)}" for v, x in counter.items())
    print(f"not a tautology over L_{args.k}: {assignment or '(no variables)'} "
          f"gives {_r(eval_formula(formula, counter, scale))}", file=out)
    return EXIT_REFUTED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="expgames", description="Analyse expectation games over Łukasiewicz logic.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="validate a game file")
    p.add_argument("game")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="payoffs of a pure strategy combination")
    p.add_argument("game")
    p.add_argument("--combination", required=True, metavar="ASSIGNMENTS",
                   help="every variable, e.g. p1=1,p2=1/2")
    p.set_defaults(func=cmd_eval)

    for name, func, text in (("expect", cmd_expect, "expected payoffs E[phi_i]"),
                             ("goals", cmd_goals, "goal values of every player")):
        p = sub.add_parser(name, help=text)
        p.add_argument("game")
        p.add_argument("profile")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="check whether a profile is an equilibrium")
    p.add_argument("game")
    p.add_argument("profile")
    p.add_argument("--grid", type=int, default=1, metavar="D",
                   help="also try mixed deviations in multiples of 1/D (default: %(default)s)")
    p.add_argument("--report", metavar="FILE", help="write a key=value summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dynamics", help="round-robin best-response dynamics")
    p.add_argument("game")
    p.add_argument("--start", metavar="PROFILE", help="start profile (default: first pure strategies)")
    p.add_argument("--max-iters", type=int, default=100, metavar="N")
    p.add_argument("--grid", type=int, default=1, metavar="D")
    p.add_argument("--report", metavar="FILE")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("search", help="scan grid profiles for a certified equilibrium")
    p.add_argument("game")
    p.add_argument("--grid", type=int, required=True, metavar="D")
    p.add_argument("--report", metavar="FILE")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("compile", help="emit an SMT-LIB2 query")
    p.add_argument("game")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--existence", action="store_true", help="does any equilibrium exist?")
    mode.add_argument("--verify", metavar="PROFILE", help="can --player improve on PROFILE?")
    p.add_argument("--player", metavar="NAME")
    p.add_argument("--solver", metavar="CMD",
                   help="run this solver command ({file} is replaced by the script path)")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("taut", help="tautology check over L_k")
    p.add_argument("formula")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_taut)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "grid", 1) < 1:
            raise UsageError("--grid must be a positive integer")
        return args.func(args, out)
    except UsageError as exc:
        print(f"expgames: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except CapExceeded as exc:
        print(f"expgames: {exc}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
