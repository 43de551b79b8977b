"""
Exporting equilibrium questions to an SMT solver
================================================

Two questions compile to real arithmetic: can one player improve on a
given profile (quantifier-free), and does any equilibrium exist (one
exists-forall alternation). With z3 on PATH, or a command in
EXPGAMES_SOLVER, the scripts are also solved.
"""
from pathlib import Path

from expgames import parse_game_file, parse_profile_file
from expgames.rcf import (
    compile_existence_sentence, compile_verification_query, default_solver_command, run_solver,
)

DATA = Path(__file__).parent / "data"
example1 = parse_game_file((DATA / "example1.exg").read_text())
example2 = parse_game_file((DATA / "example2.exg").read_text())
prof = parse_profile_file((DATA / "uniform_point.prof").read_text(), example2)

query = compile_verification_query(example2, prof, 0)
print(query.to_text())

sentence = compile_existence_sentence(example2)
print(sentence.to_text())

solver = default_solver_command()
if solver is None:
    print("no solver configured; set EXPGAMES_SOLVER to run the scripts")
else:
    print("can P1 improve on uniform/point?", run_solver(query, solver))
    print("equilibrium in example 1?", run_solver(compile_existence_sentence(example1), solver))
    print("equilibrium in example 2?", run_solver(sentence, solver))
