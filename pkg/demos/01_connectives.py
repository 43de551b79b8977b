"""
Łukasiewicz connectives on a finite scale
=========================================

Truth values live in L_k = {0, 1/k, ..., 1}. Every connective is a
piecewise-linear function on that scale and is computed exactly.
"""
from fractions import Fraction

from expgames.logic import (
    Distance, Implies, LkScale, StrongAnd, StrongOr, Var, eval_formula, expand_derived,
    find_countermodel, is_tautology,
)
from expgames.parsing import parse_formula

p, q = Var("p"), Var("q")

# The five-valued scale.
scale = LkScale(4)
print("L_4 =", [str(v) for v in scale.values])

# A table of strong conjunction, the Łukasiewicz t-norm max(0, a + b - 1).
print("\n  &  " + " ".join(f"{str(b):>4}" for b in scale.values))
for a in scale.values:
    row = [eval_formula(StrongAnd(p, q), {"p": a, "q": b}, scale) for b in scale.values]
    print(f"{str(a):>4} " + " ".join(f"{str(v):>4}" for v in row))

# Formulas can also be written in the ASCII syntax.
f = parse_formula("(p (+) q) -> d(p, q)")
print("\n", f, "at p=1/2, q=3/4:", eval_formula(f, {"p": Fraction(1, 2), "q": Fraction(3, 4)}, 4))

# Derived connectives reduce to implication and falsum.
print("\np (+) q expands to", expand_derived(StrongOr(p, q)))
print("d(p, q) expands to", expand_derived(Distance(p, q)))

# Tautologies are decided by enumerating every valuation.
print("\np -> (q -> p) is a tautology over L_2:", is_tautology(Implies(p, Implies(q, p)), 2))
idem = parse_formula("(p & p) <-> p")
print("(p & p) <-> p over L_2 fails at", find_countermodel(idem, 2))
