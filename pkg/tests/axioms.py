"""Axiom schemas instantiated with propositional variables p, q, r."""
from functools import reduce

from expgames.logic import (
    HALF, Delta, Iff, Implies, Neg, Ominus, Product, StrongAnd, StrongOr, TruncDiv, Var,
)

p, q, r = Var("p"), Var("q"), Var("r")

L1 = Implies(p, Implies(q, p))
L2 = Implies(Implies(p, q), Implies(Implies(q, r), Implies(p, r)))
L3 = Implies(Implies(Neg(p), Neg(q)), Implies(q, p))
L4 = Implies(Implies(Implies(p, q), q), Implies(Implies(q, p), p))

LP1 = Iff(Ominus(Product(p, q), Product(p, r)), Product(p, Ominus(q, r)))
LP2 = Implies(Delta(Implies(p, q)), TruncDiv(p, q))
LP3 = Implies(Delta(TruncDiv(p, q)), Implies(p, q))
LP4 = Iff(HALF, Neg(HALF))


def multiple(n, f):
    """n f = f (+) ... (+) f."""
    return reduce(StrongOr, [f] * n)


def power(j, f):
    """f^j = f & ... & f."""
    return reduce(StrongAnd, [f] * j)


def L5(n, f=p):
    return Iff(multiple(n - 1, f), multiple(n, f))


def L6(n, j, f=p):
    return Iff(power(n, multiple(j, power(j - 1, f))), multiple(n, power(j, f)))


def finite_schema_indices(n):
    """The j in 2..n-2 that do not divide n-1."""
    return [j for j in range(2, n - 1) if (n - 1) % j]
