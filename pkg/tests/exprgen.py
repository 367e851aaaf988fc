"""Random expression trees drawn from the curve grammar."""

import random

from galmann.expr import FUNCTIONS, BinOp, Call, Const, Neg, Num, Var

FUNCS = sorted(FUNCTIONS)


def random_tree(rng: random.Random, depth: int = 3, var: str = "t"):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.5:
            return Var(var)
        if r < 0.9:
            return Num(round(rng.uniform(0.1, 3.0), rng.choice([0, 1, 2])) or 1.0)
        return Const(rng.choice(["pi", "e"]))
    kind = rng.random()
    if kind < 0.1:
        return Neg(random_tree(rng, depth - 1, var))
    if kind < 0.45:
        return Call(rng.choice(FUNCS), random_tree(rng, depth - 1, var))
    op = rng.choice("+-*/^")
    left = random_tree(rng, depth - 1, var)
    if op == "^":
        return BinOp(op, left, Num(rng.choice([2.0, 3.0, 0.5, 1.5, -1.0])))
    return BinOp(op, left, random_tree(rng, depth - 1, var))


# (source, byte offset of the error)
MALFORMED = [
    ("sin(t", 5), ("", 0), ("t+", 2), ("*t", 0), ("(t", 2), ("t)", 1), ("t++t", 2),
    ("2 3", 2), ("sin t", 4), ("t^", 2), ("t**2", 2), ("--t", 1), ("()", 1),
    ("t $ 2", 2), ("cos()", 4), ("exp(t))", 6), ("t/", 2), ("1.2.3", 3),
    ("sqrt(t,2)", 6), ("t 2", 2), ("(t+1)(t-1)", 5), ("log(", 4), ("3e", 1),
    ("t^^2", 2), ("abs(t", 5), ("tan((t)", 7), ("   ", 0), ("t+*t", 2), ("t-", 2),
    ("t\u00a0+", 4),  # two-byte space: offsets count bytes
]
