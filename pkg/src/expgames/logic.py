"""Formula trees for finite-valued Łukasiewicz logic with constants and for ŁΠ½.

One node hierarchy serves both levels. Payoff formulas use :class:`Var`,
:class:`Const` and the Łukasiewicz connectives; goal formulas replace
variables by :class:`ModalAtom` and may also use :class:`Product`,
:class:`TruncDiv` and :class:`Delta`.

All truth values are :class:`fractions.Fraction`; nothing here touches floats.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Optional

from .errors import CapExceeded, EvaluationError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

#: default limit on the number of valuations a tautology check may enumerate
MAX_VALUATIONS = 10**7


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions; floats are rejected."""
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; use a Fraction or 'a/b' string")
    if isinstance(value, bool):
        raise TypeError("booleans are not truth values here")
    return Fraction(value)


@dataclass(frozen=True)
class LkScale:
    """The truth-value set L_k = {0, 1/k, ..., 1}."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"scale parameter must be a positive integer, got {self.k!r}")

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(j, self.k) for j in range(self.k + 1))

    def __contains__(self, value) -> bool:
        v = Fraction(value)
        return 0 <= v <= 1 and (v * self.k).denominator == 1

    def __len__(self):
        return self.k + 1


def _scale(scale) -> LkScale:
    return scale if isinstance(scale, LkScale) else LkScale(scale)


# --------------------------------------------------------------------------
# AST


class Formula:
    """Base class of every formula node."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def walk(self) -> Iterator["Formula"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))

    def variables(self) -> list[str]:
        """Variable names in first-occurrence order."""
        seen: dict[str, None] = {}
        for node in self.walk():
            if isinstance(node, Var):
                seen.setdefault(node.name)
        return list(seen)

    def atoms(self) -> list[int]:
        """Player indices of modal atoms in first-occurrence order."""
        seen: dict[int, None] = {}
        for node in self.walk():
            if isinstance(node, ModalAtom):
                seen.setdefault(node.player)
        return list(seen)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))


@dataclass(frozen=True)
class ModalAtom(Formula):
    """``E[phi_i]``: the expected value of player ``player``'s payoff (0-based)."""

    player: int


@dataclass(frozen=True)
class Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


class Neg(Unary):
    pass


class Delta(Unary):
    pass


class Implies(Binary):
    pass


class StrongAnd(Binary):
    pass


class StrongOr(Binary):
    pass


class Ominus(Binary):
    pass


class MinAnd(Binary):
    pass


class MaxOr(Binary):
    pass


class Iff(Binary):
    pass


class Distance(Binary):
    pass


class Product(Binary):
    pass


class TruncDiv(Binary):
    pass


FALSUM = Const(ZERO)
HALF = Const(Fraction(1, 2))

#: connectives only meaningful at the ŁΠ½ (goal) level
PRODUCT_NODES = (Product, TruncDiv, Delta)


def _truncdiv(a, b):
    return ONE if a <= b else b / a


UNARY_TRUTH: dict[type, Callable[[Fraction], Fraction]] = {
    Neg: lambda a: 1 - a,
    Delta: lambda a: ONE if a == 1 else ZERO,
}

BINARY_TRUTH: dict[type, Callable[[Fraction, Fraction], Fraction]] = {
    Implies: lambda a, b: min(ONE, 1 - a + b),
    StrongAnd: lambda a, b: max(ZERO, a + b - 1),
    StrongOr: lambda a, b: min(ONE, a + b),
    Ominus: lambda a, b: max(ZERO, a - b),
    MinAnd: min,
    MaxOr: max,
    Iff: lambda a, b: 1 - abs(a - b),
    Distance: lambda a, b: abs(a - b),
    Product: lambda a, b: a * b,
    TruncDiv: _truncdiv,
}


# --------------------------------------------------------------------------
# evaluation


def _evaluate(f: Formula, var: Callable[[str], Fraction], atom: Callable[[int], Fraction],
              const: Callable[[Fraction], Fraction]) -> Fraction:
    t = type(f)
    if t is Var:
        return var(f.name)
    if t is Const:
        return const(f.value)
    if t is ModalAtom:
        return atom(f.player)
    fn = BINARY_TRUTH.get(t)
    if fn is not None:
        return fn(_evaluate(f.left, var, atom, const), _evaluate(f.right, var, atom, const))
    fn = UNARY_TRUTH.get(t)
    if fn is not None:
        return fn(_evaluate(f.arg, var, atom, const))
    raise TypeError(f"not a formula node: {f!r}")


def _unit_lookup(table: Mapping, what: str):
    def lookup(key):
        try:
            value = table[key]
        except KeyError:
            raise EvaluationError(f"unbound {what} {key}") from None
        value = as_rational(value)
        if not 0 <= value <= 1:
            raise EvaluationError(f"{what} {key} has value {value} outside [0, 1]")
        return value

    return lookup


def _unit_const(c):
    if not 0 <= c <= 1:
        raise EvaluationError(f"constant {c} outside [0, 1]")
    return c


def _no_atoms(player):
    raise EvaluationError(f"modal atom E[{player}] in a non-modal formula")


def _no_vars(name):
    raise EvaluationError(f"propositional variable {name} in a closed modal formula")


def eval_formula(f: Formula, valuation: Mapping[str, Fraction], scale) -> Fraction:
    """Truth value of a payoff formula under an L_k valuation.

    Raises EvaluationError on unbound variables, modal nodes, or any
    variable value or constant that is not in L_k.
    """
    scale = _scale(scale)

    def var(name):
        try:
            value = as_rational(valuation[name])
        except KeyError:
            raise EvaluationError(f"unbound variable {name}") from None
        if value not in scale:
            raise EvaluationError(f"variable {name} = {value} is not in L_{scale.k}")
        return value

    def const(c):
        if c not in scale:
            raise EvaluationError(f"constant {c} is not in L_{scale.k}")
        return c

    for node in f.walk():
        if isinstance(node, PRODUCT_NODES):
            raise EvaluationError(f"{type(node).__name__} is not a Łukasiewicz connective")
    result = _evaluate(f, var, _no_atoms, const)
    assert result in scale, (f, result)
    return result


def eval_modal_closed(f: Formula, atom_values: Mapping[int, Fraction]) -> Fraction:
    """ŁΠ½ value of a goal formula once every ``E[phi_i]`` has a value."""
    result = _evaluate(f, _no_vars, _unit_lookup(atom_values, "modal atom"), _unit_const)
    assert 0 <= result <= 1
    return result


def eval_unit(f: Formula, valuation: Mapping[str, Fraction]) -> Fraction:
    """Evaluate any non-modal ŁΠ½ formula with variables ranging over [0, 1]."""
    return _evaluate(f, _unit_lookup(valuation, "variable"), _no_atoms, _unit_const)


# --------------------------------------------------------------------------
# tautologies


def find_countermodel(f: Formula, scale, cap: int = MAX_VALUATIONS) -> Optional[dict[str, Fraction]]:
    """First L_k valuation (lexicographic) giving ``f`` a value below 1, or None."""
    scale = _scale(scale)
    names = f.variables()
    count = len(scale) ** len(names)
    if count > cap:
        raise CapExceeded("valuations", count, cap)
    for values in itertools.product(scale.values, repeat=len(names)):
        valuation = dict(zip(names, values))
        if eval_formula(f, valuation, scale) != 1:
            return valuation
    return None


def is_tautology(f: Formula, scale, cap: int = MAX_VALUATIONS) -> bool:
    return find_countermodel(f, scale, cap) is None


def unit_grid(max_denominator: int) -> list[Fraction]:
    """All rationals in [0, 1] with denominator at most ``max_denominator``, sorted."""
    return sorted({Fraction(a, b) for b in range(1, max_denominator + 1) for a in range(b + 1)})


def grid_countermodel(f: Formula, max_denominator: int,
                      cap: int = MAX_VALUATIONS) -> Optional[dict[str, Fraction]]:
    """Search a rational grid of [0, 1]^n for a valuation falsifying ``f``.

    This is sampling over the continuum, not a proof: ``None`` means only
    that no grid point falsifies the formula.
    """
    grid = unit_grid(max_denominator)
    names = f.variables()
    count = len(grid) ** len(names)
    if count > cap:
        raise CapExceeded("grid valuations", count, cap)
    for values in itertools.product(grid, repeat=len(names)):
        valuation = dict(zip(names, values))
        if eval_unit(f, valuation) != 1:
            return valuation
    return None


# --------------------------------------------------------------------------
# derived connectives


def neg(a):
    return Implies(a, FALSUM)


def unfold(f: Formula) -> Formula:
    """Replace the top connective by its definition; primitives are returned as is.

    Only one level is unfolded: the children of the result may still use
    derived connectives.
    """
    t = type(f)
    if t is Neg:
        return Implies(f.arg, FALSUM)
    if t is Delta:
        return TruncDiv(Neg(f.arg), FALSUM)
    if not isinstance(f, Binary) or t in (Implies, Product, TruncDiv):
        return f
    a, b = f.left, f.right
    if t is StrongAnd:
        return Neg(Implies(a, Neg(b)))
    if t is StrongOr:
        return Neg(StrongAnd(Neg(a), Neg(b)))
    if t is Ominus:
        return StrongAnd(a, Neg(b))
    if t is MinAnd:
        return StrongAnd(a, Implies(a, b))
    if t is MaxOr:
        return Implies(Implies(a, b), b)
    if t is Iff:
        return StrongAnd(Implies(a, b), Implies(b, a))
    if t is Distance:
        return Neg(Iff(a, b))
    raise TypeError(f"unknown connective {t.__name__}")


def _expand_unary(f):
    arg = expand_derived(f.arg)
    if type(f) is Neg:
        return Implies(arg, FALSUM)
    return TruncDiv(Implies(arg, FALSUM), FALSUM)


def expand_derived(f: Formula) -> Formula:
    """Rewrite ``f`` using only implication, falsum and other constants.

    Product and truncated division are kept (they are primitive in ŁΠ½);
    Delta becomes ``~phi ->. 0``, itself expanded.
    """
    if isinstance(f, Unary):
        return _expand_unary(f)
    if isinstance(f, Binary):
        node = type(f)(expand_derived(f.left), expand_derived(f.right))
        if type(f) in (Implies, Product, TruncDiv):
            return node
        return expand_derived(unfold(node))
    return f


# --------------------------------------------------------------------------
# printing

#: (surface token, precedence); larger binds tighter, all binaries right-assoc
BINARY_SYNTAX: dict[type, tuple[str, int]] = {
    Implies: ("->", 1),
    TruncDiv: ("->.", 2),
    Iff: ("<->", 3),
    MaxOr: ("\\/", 4),
    MinAnd: ("/\\", 5),
    StrongOr: ("(+)", 6),
    Ominus: ("(-)", 6),
    StrongAnd: ("&", 7),
    Product: ("*", 8),
}
UNARY_PRECEDENCE = 9


def format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_formula(f: Formula, player_names=None) -> str:
    """Render ``f`` in the ASCII surface syntax with minimal parentheses.

    Modal atoms print as ``E[name]`` using ``player_names`` (default
    ``P1, P2, ...``).
    """

    def atom_name(i):
        return player_names[i] if player_names is not None else f"P{i + 1}"

    def fmt(node, ctx):
        # ctx: minimum precedence at which this node may appear unparenthesized
        t = type(node)
        if t is Var:
            return node.name
        if t is Const:
            return "c{" + format_rational(node.value) + "}"
        if t is ModalAtom:
            return f"E[{atom_name(node.player)}]"
        if t is Distance:
            return f"d({fmt(node.left, 0)}, {fmt(node.right, 0)})"
        if t is Delta:
            return f"D({fmt(node.arg, 0)})"
        if t is Neg:
            return "~" + fmt(node.arg, UNARY_PRECEDENCE)
        token, prec = BINARY_SYNTAX[t]
        text = f"{fmt(node.left, prec + 1)} {token} {fmt(node.right, prec)}"
        return f"({text})" if prec < ctx else text

    return fmt(f, 0)
