"""A minimal SMT-LIB2 reader used to check that emitted scripts are well formed."""
import re

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def read_sexprs(text):
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    stack, out = [[]], None
    for tok in _TOKEN.findall(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise ValueError("unbalanced )")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ValueError("unbalanced (")
    out = stack[0]
    return out


BUILTINS = {"+", "-", "*", "/", "ite", "and", "or", "=>", "not", "<=", ">=", "<", ">", "=",
            "true", "false", "forall", "exists", "Real"}


def undeclared_symbols(text):
    """Symbols used before being declared or bound, in order of first use."""
    declared, missing = set(), []

    def walk(expr, bound):
        if isinstance(expr, str):
            if expr in BUILTINS or re.fullmatch(r"\d+(\.\d+)?", expr):
                return
            if expr not in declared and expr not in bound and expr not in missing:
                missing.append(expr)
            return
        if expr and expr[0] == "forall":
            names = {b[0] for b in expr[1]}
            walk(expr[2], bound | names)
            return
        for e in expr:
            walk(e, bound)

    for cmd in read_sexprs(text):
        head = cmd[0]
        if head == "declare-const":
            declared.add(cmd[1])
        elif head == "assert":
            walk(cmd[1], frozenset())
    return missing
