"""Builder for generalized omega-consistency statements over quantifier
arrays.

For an array Q of length n and a provability predicate Pr the open form
(one free variable ``y``, ranging over codes of formulas with n free
variables) is

    (Q x0...x{n-1}. Pr(subnum(y, x0, ..., x{n-1})))
        -> !Pr(dual-prefix-code(negc(subst(y, seqc(varcode_x0(), ...)))))

and the closed statement guards ``y`` by the n-free-variables predicate:

    forall y. (nvar(numeral n, y) -> open_form).

The code-level syntactic functions appear as object-level symbols:

* ``subnum(y, x0, ..)``   — substitute numerals of the x_i into code y;
* ``subst(y, s)``         — substitute the terms coded by sequence s;
* ``seqc(a, ..)``         — sequence code of its arguments;
* ``varcodex0()``         — code of the variable ``x0`` as a constant;
* ``negc(y)``             — code of the negation of the formula coded y;
* ``allcx0(y)/excx0(y)``  — code of the formula coded y universally or
                            existentially quantified in ``x0``;
* ``nvar(n, y)``          — y codes a formula with exactly n distinct
                            free variables;
* ``prov(y)/prf(y, p)``   — provability / proof predicate.

Their intended semantics is fixed by the ``coding`` module; here they are
uninterpreted symbols of the object signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import syntax as sx
from .syntax import (
    App,
    Forall,
    Formula,
    Imp,
    Not,
    Pred,
    QuantifierArray,
    Var,
)


@dataclass(frozen=True)
class ProvabilityContext:
    """The provability apparatus as object formulas.

    ``pr`` has exactly one distinct free variable (the code slot) and
    ``prf`` exactly two (code and proof slots)."""

    pr: Formula
    prf: Formula
    label: str = "toy"

    def __post_init__(self) -> None:
        if len(sx.free_vars(self.pr)) != 1:
            raise ValueError("pr must have exactly one free variable")
        if len(sx.free_vars(self.prf)) != 2:
            raise ValueError("prf must have exactly two free variables")

    def pr_of(self, t: sx.Term) -> Formula:
        (hole,) = sx.free_vars(self.pr)
        return sx.substitute(self.pr, hole, t)


DEFAULT_CONTEXT = ProvabilityContext(
    pr=Pred("prov", (Var("c"),)),
    prf=Pred("prf", (Var("c"), Var("p"))),
    label="toy",
)


@dataclass(frozen=True)
class OmegaConStatement:
    array: QuantifierArray
    open_form: Formula  # free variable y
    sentence: Formula  # closed


def _code_vars(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def build_open(q: QuantifierArray, ctx: ProvabilityContext = DEFAULT_CONTEXT) -> Formula:
    """Open form with free variable y; raises on the empty array."""
    n = len(q)
    if n == 0:
        raise ValueError("quantifier array must be nonempty")
    xs = _code_vars(n)
    y = Var("y")

    antecedent_matrix = ctx.pr_of(App("subnum", (y, *[Var(x) for x in xs])))
    antecedent = sx.prefix(q, xs, antecedent_matrix)

    seq = App("seqc", tuple(App(f"varcode{x}", ()) for x in xs))
    code: sx.Term = App("negc", (App("subst", (y, seq)),))
    for x, kind in zip(reversed(xs), reversed(list(sx.dual(q)))):
        fn = "allc" if kind == sx.FORALL else "exc"
        code = App(f"{fn}{x}", (code,))
    consequent = Not(ctx.pr_of(code))

    return Imp(antecedent, consequent)


def build_sentence(
    q: QuantifierArray, ctx: ProvabilityContext = DEFAULT_CONTEXT
) -> OmegaConStatement:
    """The closed statement: the open form relativized to codes of
    formulas with |q| free variables."""
    open_form = build_open(q, ctx)
    guard = Pred("nvar", (sx.num_term(len(q)), Var("y")))
    sentence = Forall("y", Imp(guard, open_form))
    return OmegaConStatement(array=q, open_form=open_form, sentence=sentence)
