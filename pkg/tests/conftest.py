"""Shared generators for the test suite: seeded random arithmetic
formulas with a prescribed set of free variables."""

from __future__ import annotations

import random

from omegacon import syntax as sx
from omegacon.syntax import Add, And, Eq, Mul, Not, Or, Succ, Var


def random_arith_term(rng: random.Random, vars: list[str], depth: int) -> sx.Term:
    k = rng.randrange(5 if depth > 0 else 2)
    if k == 0:
        return Var(rng.choice(vars))
    if k == 1:
        return sx.num_term(rng.randrange(3))
    if k == 2:
        return Add(random_arith_term(rng, vars, depth - 1), random_arith_term(rng, vars, depth - 1))
    if k == 3:
        return Mul(random_arith_term(rng, vars, depth - 1), random_arith_term(rng, vars, depth - 1))
    return Succ(random_arith_term(rng, vars, depth - 1))


def random_matrix(rng: random.Random, arity: int, depth: int = 2) -> sx.Formula:
    """A quantifier-free arithmetic formula with exactly ``arity``
    distinct free variables x0..x{arity-1} (missing ones are conjoined
    as trivial equations)."""
    vars = [f"x{i}" for i in range(arity)]

    def atom() -> sx.Formula:
        return Eq(random_arith_term(rng, vars, 1), random_arith_term(rng, vars, 1))

    def form(d: int) -> sx.Formula:
        if d == 0:
            return atom()
        k = rng.randrange(4)
        if k == 0:
            return Not(form(d - 1))
        if k == 1:
            return And(form(d - 1), form(d - 1))
        if k == 2:
            return Or(form(d - 1), form(d - 1))
        return atom()

    f = form(depth)
    for v in vars:
        if v not in sx.free_vars(f):
            f = And(f, Eq(Var(v), Var(v)))
    return f
