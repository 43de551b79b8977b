"""Compile equilibrium questions into real-arithmetic sentences (SMT-LIB2).

Two queries are produced:

* :func:`compile_verification_query` -- quantifier-free, one block of
  deviation variables for a single player with every other probability fixed
  to a rational. ``sat`` means the player has a strictly improving deviation.
* :func:`compile_existence_sentence` -- ``exists x forall y``: some profile
  ``x`` from which no player's deviation ``y_i`` raises their goal. ``sat``
  means an equilibrium exists.

Nothing here decides either sentence. :func:`run_solver` hands a script to
an external solver and returns its answer verbatim.
"""
from __future__ import annotations

import itertools
import math
import os
import re
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .errors import CapExceeded, SolverError
from .expectation import Profile, deviation_payoffs, eval_goal
from .game import MAX_COMBINATIONS, Game, payoff_vector, strategy_count
from .logic import (
    BINARY_TRUTH,
    Binary,
    Const,
    Delta,
    Distance,
    Formula,
    Iff,
    Implies,
    MaxOr,
    MinAnd,
    ModalAtom,
    Neg,
    Ominus,
    Product,
    StrongAnd,
    StrongOr,
    TruncDiv,
)

ZERO, ONE = Fraction(0), Fraction(1)

# --------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class RVar(Term):
    name: str


@dataclass(frozen=True)
class RConst(Term):
    value: Fraction


@dataclass(frozen=True)
class RAdd(Term):
    args: tuple[Term, ...]


@dataclass(frozen=True)
class RMul(Term):
    args: tuple[Term, ...]


@dataclass(frozen=True)
class RSub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class RIte(Term):
    cond: "BoolTerm"
    then: Term
    other: Term


class BoolTerm:
    __slots__ = ()


@dataclass(frozen=True)
class BConst(BoolTerm):
    value: bool


@dataclass(frozen=True)
class Cmp(BoolTerm):
    op: str  # one of <= < >= > =
    left: Term
    right: Term


@dataclass(frozen=True)
class BAnd(BoolTerm):
    args: tuple[BoolTerm, ...]


@dataclass(frozen=True)
class BOr(BoolTerm):
    args: tuple[BoolTerm, ...]


@dataclass(frozen=True)
class BImplies(BoolTerm):
    premise: BoolTerm
    conclusion: BoolTerm


@dataclass(frozen=True)
class Forall(BoolTerm):
    bound: tuple[str, ...]
    body: BoolTerm


RealTerm = Term

_CMP = {
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "=": lambda a, b: a == b,
}


def const(value) -> RConst:
    return RConst(Fraction(value))


def add(*args: Term) -> Term:
    total = ZERO
    rest = []
    for a in args:
        if isinstance(a, RAdd):
            for b in a.args:
                if isinstance(b, RConst):
                    total += b.value
                else:
                    rest.append(b)
        elif isinstance(a, RConst):
            total += a.value
        else:
            rest.append(a)
    if total != 0 or not rest:
        rest.append(RConst(total))
    return rest[0] if len(rest) == 1 else RAdd(tuple(rest))


def mul(*args: Term) -> Term:
    coeff = ONE
    rest = []
    for a in args:
        if isinstance(a, RConst):
            coeff *= a.value
        elif isinstance(a, RMul):
            rest.extend(a.args)
        else:
            rest.append(a)
    if coeff == 0:
        return RConst(ZERO)
    if coeff != 1 or not rest:
        rest.insert(0, RConst(coeff))
    return rest[0] if len(rest) == 1 else RMul(tuple(rest))


def sub(a: Term, b: Term) -> Term:
    if isinstance(a, RConst) and isinstance(b, RConst):
        return RConst(a.value - b.value)
    if isinstance(b, RConst) and b.value == 0:
        return a
    return RSub(a, b)


def cmp(op: str, a: Term, b: Term) -> BoolTerm:
    if isinstance(a, RConst) and isinstance(b, RConst):
        return BConst(_CMP[op](a.value, b.value))
    return Cmp(op, a, b)


def ite(cond: BoolTerm, then: Term, other: Term) -> Term:
    if isinstance(cond, BConst):
        return then if cond.value else other
    if then == other:
        return then
    return RIte(cond, then, other)


def conj(*args: BoolTerm) -> BoolTerm:
    flat = []
    for a in args:
        if isinstance(a, BConst):
            if not a.value:
                return a
            continue
        flat.extend(a.args if isinstance(a, BAnd) else (a,))
    if not flat:
        return BConst(True)
    return flat[0] if len(flat) == 1 else BAnd(tuple(flat))


def disj(*args: BoolTerm) -> BoolTerm:
    flat = []
    for a in args:
        if isinstance(a, BConst):
            if a.value:
                return a
            continue
        flat.extend(a.args if isinstance(a, BOr) else (a,))
    if not flat:
        return BConst(False)
    return flat[0] if len(flat) == 1 else BOr(tuple(flat))


def implies(premise: BoolTerm, conclusion: BoolTerm) -> BoolTerm:
    if isinstance(premise, BConst):
        return conclusion if premise.value else BConst(True)
    if isinstance(conclusion, BConst) and conclusion.value:
        return conclusion
    return BImplies(premise, conclusion)


def term_variables(term) -> list[str]:
    """Free variable names in first-occurrence order."""
    seen: dict[str, None] = {}

    def visit(t, bound):
        if isinstance(t, RVar):
            if t.name not in bound:
                seen.setdefault(t.name)
        elif isinstance(t, (RAdd, RMul, BAnd, BOr)):
            for a in t.args:
                visit(a, bound)
        elif isinstance(t, (RSub, Cmp)):
            visit(t.left, bound)
            visit(t.right, bound)
        elif isinstance(t, RIte):
            visit(t.cond, bound)
            visit(t.then, bound)
            visit(t.other, bound)
        elif isinstance(t, BImplies):
            visit(t.premise, bound)
            visit(t.conclusion, bound)
        elif isinstance(t, Forall):
            visit(t.body, bound | set(t.bound))

    visit(term, frozenset())
    return list(seen)


def contains_ite(term) -> bool:
    if isinstance(term, RIte):
        return True
    if isinstance(term, (RAdd, RMul)):
        return any(contains_ite(a) for a in term.args)
    if isinstance(term, RSub):
        return contains_ite(term.left) or contains_ite(term.right)
    return False


# --------------------------------------------------------------------------
# evaluation under an assignment


def evaluate_term(term, env: Mapping[str, Fraction]):
    """Exact value of a real or Boolean term; ``env`` must bind every free variable."""
    if isinstance(term, RConst):
        return term.value
    if isinstance(term, RVar):
        return env[term.name]
    if isinstance(term, RAdd):
        return sum((evaluate_term(a, env) for a in term.args), ZERO)
    if isinstance(term, RMul):
        out = ONE
        for a in term.args:
            out *= evaluate_term(a, env)
        return out
    if isinstance(term, RSub):
        return evaluate_term(term.left, env) - evaluate_term(term.right, env)
    if isinstance(term, RIte):
        return evaluate_term(term.then if evaluate_term(term.cond, env) else term.other, env)
    if isinstance(term, BConst):
        return term.value
    if isinstance(term, Cmp):
        return _CMP[term.op](evaluate_term(term.left, env), evaluate_term(term.right, env))
    if isinstance(term, BAnd):
        return all(evaluate_term(a, env) for a in term.args)
    if isinstance(term, BOr):
        return any(evaluate_term(a, env) for a in term.args)
    if isinstance(term, BImplies):
        return (not evaluate_term(term.premise, env)) or evaluate_term(term.conclusion, env)
    raise TypeError(f"cannot evaluate {type(term).__name__} under an assignment")


# --------------------------------------------------------------------------
# encoding


def _symbol_part(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", text)


def prob_var(g: Game, i: int, s: int, prefix: str = "x") -> RVar:
    """Variable for the probability that player ``i`` plays pure strategy ``s``."""
    return RVar(f"{prefix}_{_symbol_part(g.players[i])}_{s}")


def block_vars(g: Game, i: int, prefix: str = "x") -> list[RVar]:
    return [prob_var(g, i, s, prefix) for s in range(strategy_count(g, i))]


def simplex(variables: Sequence[Term]) -> BoolTerm:
    return conj(*(cmp(">=", v, const(0)) for v in variables), cmp("=", add(*variables), const(1)))


def expectation_polynomial(g: Game, i: int, prob: Callable[[int, int], Term],
                           cap: int = MAX_COMBINATIONS) -> Term:
    """``sum_s (prod_j prob(j, s_j)) * payoff_i(s)`` with zero terms dropped.

    Players none of whose variables occur in ``phi_i`` are summed out (their
    probabilities add up to one on the simplex), and if every combination
    pays the same ``c`` the sum collapses to ``c``.
    """
    used = set(g.payoffs[i].variables())
    relevant = [j for j in range(g.n) if used & set(g.controls[j])]
    sizes = [strategy_count(g, j) for j in relevant]
    count = math.prod(sizes)
    if count > cap:
        raise CapExceeded("strategy combinations", count, cap)
    terms = []
    values = set()
    for partial in itertools.product(*(range(n) for n in sizes)):
        combo = [0] * g.n
        for j, s in zip(relevant, partial):
            combo[j] = s
        c = payoff_vector(g, tuple(combo))[i]
        values.add(c)
        if c:
            terms.append(mul(RConst(c), *(prob(j, s) for j, s in zip(relevant, partial))))
    if len(values) == 1:
        return RConst(values.pop())
    return add(*terms)


def encode_expectation(g: Game, i: int, cap: int = MAX_COMBINATIONS) -> Term:
    """Player ``i``'s expected payoff as a polynomial in the ``x`` variables."""
    return expectation_polynomial(g, i, lambda j, s: prob_var(g, j, s), cap)


@dataclass
class EncodedGoal:
    """A goal as a real term plus what its fresh division variables must satisfy.

    ``divisions`` maps each fresh variable ``q`` to ``(a, b)`` for the
    truncated division ``a ->. b`` it stands for; ``side`` holds the
    matching constraints ``a <= b or (q*a = b and 0 <= q <= 1)``.
    """

    term: Term
    side: list[BoolTerm] = field(default_factory=list)
    divisions: dict[str, tuple[Term, Term]] = field(default_factory=dict)

    def solve_divisions(self, env: Mapping[str, Fraction]) -> dict[str, Fraction]:
        """Extend ``env`` with the value each division variable must take."""
        out = dict(env)
        for name, (a, b) in self.divisions.items():
            av, bv = evaluate_term(a, out), evaluate_term(b, out)
            out[name] = bv / av if av > bv else ZERO
        return out

    def evaluate(self, env: Mapping[str, Fraction]) -> Fraction:
        return evaluate_term(self.term, self.solve_divisions(env))


class _Fresh:
    def __init__(self, prefix):
        self.prefix = prefix
        self.count = 0

    def __call__(self):
        name = f"{self.prefix}_{self.count}"
        self.count += 1
        return RVar(name)


def translate_goal(goal: Formula, atoms: Mapping[int, Term], fresh: Callable[[], RVar]) -> EncodedGoal:
    """Structural translation of a ŁΠ½ formula over expectation terms."""
    enc = EncodedGoal(RConst(ZERO))

    def tr(f) -> Term:
        t = type(f)
        if t is ModalAtom:
            return atoms[f.player]
        if t is Const:
            return RConst(f.value)
        if t is Neg:
            return sub(const(1), tr(f.arg))
        if t is Delta:
            a = tr(f.arg)
            return ite(cmp(">=", a, const(1)), const(1), const(0))
        if not isinstance(f, Binary):
            raise TypeError(f"cannot encode {t.__name__} in a goal")
        a, b = tr(f.left), tr(f.right)
        if isinstance(a, RConst) and isinstance(b, RConst):
            return RConst(BINARY_TRUTH[t](a.value, b.value))
        if t is StrongOr:
            s = add(a, b)
            return ite(cmp("<=", s, const(1)), s, const(1))
        if t is StrongAnd:
            s = sub(add(a, b), const(1))
            return ite(cmp(">=", s, const(0)), s, const(0))
        if t is Implies:
            s = add(sub(const(1), a), b)
            return ite(cmp("<=", s, const(1)), s, const(1))
        if t is Ominus:
            s = sub(a, b)
            return ite(cmp(">=", s, const(0)), s, const(0))
        if t is MinAnd:
            return ite(cmp("<=", a, b), a, b)
        if t is MaxOr:
            return ite(cmp(">=", a, b), a, b)
        if t is Distance:
            return ite(cmp(">=", a, b), sub(a, b), sub(b, a))
        if t is Iff:
            return sub(const(1), ite(cmp(">=", a, b), sub(a, b), sub(b, a)))
        if t is Product:
            return mul(a, b)
        if t is TruncDiv:
            q = fresh()
            enc.divisions[q.name] = (a, b)
            enc.side.append(disj(cmp("<=", a, b), conj(cmp("=", mul(q, a), b),
                                                      cmp(">=", q, const(0)),
                                                      cmp("<=", q, const(1)))))
            return ite(cmp("<=", a, b), const(1), q)
        raise TypeError(f"cannot encode {t.__name__} in a goal")

    enc.term = tr(goal)
    return enc


def encode_goal(g: Game, i: int, cap: int = MAX_COMBINATIONS) -> EncodedGoal:
    """Player ``i``'s goal as a piecewise-polynomial term in the ``x`` variables."""
    atoms = {j: encode_expectation(g, j, cap) for j in g.goals[i].atoms()}
    return translate_goal(g.goals[i], atoms, _Fresh(f"q_{_symbol_part(g.players[i])}"))


# --------------------------------------------------------------------------
# scripts


def format_real(value: Fraction) -> str:
    value = Fraction(value)
    body = f"{abs(value.numerator)}.0" if value.denominator == 1 else \
        f"(/ {abs(value.numerator)} {value.denominator})"
    return f"(- {body})" if value < 0 else body


def to_smtlib(term) -> str:
    if isinstance(term, RConst):
        return format_real(term.value)
    if isinstance(term, RVar):
        return term.name
    if isinstance(term, RAdd):
        return "(+ " + " ".join(map(to_smtlib, term.args)) + ")"
    if isinstance(term, RMul):
        return "(* " + " ".join(map(to_smtlib, term.args)) + ")"
    if isinstance(term, RSub):
        return f"(- {to_smtlib(term.left)} {to_smtlib(term.right)})"
    if isinstance(term, RIte):
        return f"(ite {to_smtlib(term.cond)} {to_smtlib(term.then)} {to_smtlib(term.other)})"
    if isinstance(term, BConst):
        return "true" if term.value else "false"
    if isinstance(term, Cmp):
        return f"({term.op} {to_smtlib(term.left)} {to_smtlib(term.right)})"
    if isinstance(term, BAnd):
        return "(and " + " ".join(map(to_smtlib, term.args)) + ")"
    if isinstance(term, BOr):
        return "(or " + " ".join(map(to_smtlib, term.args)) + ")"
    if isinstance(term, BImplies):
        return f"(=> {to_smtlib(term.premise)} {to_smtlib(term.conclusion)})"
    if isinstance(term, Forall):
        bound = " ".join(f"({v} Real)" for v in term.bound)
        return f"(forall ({bound}) {to_smtlib(term.body)})"
    raise TypeError(f"cannot print {type(term).__name__}")


@dataclass
class SmtScript:
    """An SMT-LIB2 script: logic, real constants, assertions, ``(check-sat)``."""

    logic: str
    declarations: list[str] = field(default_factory=list)
    assertions: list[BoolTerm] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    #: fresh truncated-division variables of free (declared) terms, see EncodedGoal
    divisions: dict[str, tuple[Term, Term]] = field(default_factory=dict)

    def declare(self, *names: str):
        for name in names:
            if name not in self.declarations:
                self.declarations.append(name)

    def to_text(self) -> str:
        lines = [f"; {c}" for c in self.comments]
        lines.append(f"(set-logic {self.logic})")
        lines.extend(f"(declare-const {name} Real)" for name in self.declarations)
        lines.extend(f"(assert {to_smtlib(a)})" for a in self.assertions)
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"

    def holds(self, env: Mapping[str, Fraction]) -> bool:
        """Whether every assertion is true under ``env`` (no quantifiers allowed).

        Division variables missing from ``env`` are solved from their
        defining quotient first.
        """
        full = dict(env)
        for name, (a, b) in self.divisions.items():
            if name not in full:
                av, bv = evaluate_term(a, full), evaluate_term(b, full)
                full[name] = bv / av if av > bv else ZERO
        return all(evaluate_term(a, full) for a in self.assertions)

    def __str__(self):
        return self.to_text()


def compile_verification_query(g: Game, p: Profile, i: int) -> SmtScript:
    """Existential query: can player ``i`` strictly improve on ``p``?

    The other players' probabilities are substituted as rationals, so each
    expectation is affine in player ``i``'s deviation variables ``y``.
    """
    rows = deviation_payoffs(g, i, p)
    y = block_vars(g, i, "y")
    atoms = {}
    for j in g.goals[i].atoms():
        column = {row[j] for row in rows}
        if len(column) == 1:  # unaffected by the deviation
            atoms[j] = RConst(column.pop())
        else:
            atoms[j] = add(*(mul(RConst(row[j]), v) for v, row in zip(y, rows)))
    enc = translate_goal(g.goals[i], atoms, _Fresh(f"q_{_symbol_part(g.players[i])}"))
    baseline = eval_goal(g, i, p)

    script = SmtScript("QF_NRA", comments=[
        f"can {g.players[i]} strictly improve its goal by deviating?",
        "sat: yes, the profile is not an equilibrium; unsat: best response",
        f"baseline goal value {baseline}",
    ])
    script.declare(*(v.name for v in y), *enc.divisions)
    script.assertions.append(simplex(y))
    script.assertions.extend(enc.side)
    script.assertions.append(cmp(">", enc.term, RConst(baseline)))
    script.divisions.update(enc.divisions)
    return script


def deviation_assignment(g: Game, i: int, strategy) -> dict[str, Fraction]:
    """Values of player ``i``'s ``y`` variables for a mixed strategy."""
    return {v.name: strategy.prob(s) for s, v in enumerate(block_vars(g, i, "y"))}


def compile_existence_sentence(g: Game, cap: int = MAX_COMBINATIONS) -> SmtScript:
    """``exists x forall y``: some profile is a best response for every player."""
    script = SmtScript("NRA", comments=[
        "does the game admit an equilibrium?",
        "sat: yes; unsat: no equilibrium exists",
    ])
    x = [block_vars(g, i) for i in range(g.n)]
    for block in x:
        script.declare(*(v.name for v in block))
        script.assertions.append(simplex(block))

    for i, name in enumerate(g.players):
        tag = _symbol_part(name)
        atoms_x = {j: encode_expectation(g, j, cap) for j in g.goals[i].atoms()}
        at_x = translate_goal(g.goals[i], atoms_x, _Fresh(f"q_{tag}"))
        script.declare(*at_x.divisions)
        script.divisions.update(at_x.divisions)
        script.assertions.extend(at_x.side)

        y = block_vars(g, i, "y")

        def prob(j, s, i=i, y=y):
            return y[s] if j == i else x[j][s]

        atoms_y = {j: expectation_polynomial(g, j, prob, cap) for j in g.goals[i].atoms()}
        at_y = translate_goal(g.goals[i], atoms_y, _Fresh(f"r_{tag}"))
        body = implies(conj(simplex(y), *at_y.side), cmp("<=", at_y.term, at_x.term))
        if isinstance(body, BConst):
            if not body.value:
                script.assertions.append(body)
            continue
        script.assertions.append(Forall(tuple(v.name for v in y) + tuple(at_y.divisions), body))
    return script


# --------------------------------------------------------------------------
# solver bridge

SOLVER_ENV = "EXPGAMES_SOLVER"


def default_solver_command() -> Optional[list[str]]:
    """Solver command from ``$EXPGAMES_SOLVER``, else ``z3`` if on PATH, else None."""
    configured = os.environ.get(SOLVER_ENV)
    if configured:
        return shlex.split(configured)
    if shutil.which("z3"):
        return ["z3", "{file}"]
    return None


def run_solver(script: Union[SmtScript, str], command: Union[str, Sequence[str]],
               timeout: float = 300) -> str:
    """Run an external solver on ``script``; return ``sat``, ``unsat`` or ``unknown``.

    ``command`` is an argument list or shell-style string; a ``{file}``
    placeholder receives the script path, otherwise the path is appended.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    text = script.to_text() if isinstance(script, SmtScript) else script
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as fh:
        fh.write(text)
        path = fh.name
    try:
        if any("{file}" in a for a in argv):
            argv = [a.replace("{file}", path) for a in argv]
        else:
            argv.append(path)
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    finally:
        os.unlink(path)
    first = proc.stdout.strip().splitlines()[:1]
    answer = first[0].strip() if first else ""
    if answer not in ("sat", "unsat", "unknown"):
        detail = (proc.stdout + proc.stderr).strip().splitlines()[:3]
        raise SolverError(f"{argv[0]} exited {proc.returncode}: {' | '.join(detail) or 'no output'}")
    return answer
