"""Quantifier-array rewrites on witness formulas, each returning the
rewritten formula together with the first-order proof obligations that
justify the corresponding equivalence of omega-consistency statements.

Obligations are closed first-order goals (usually biconditional chains)
over explicit background axioms; the ``prover`` module discharges them.
Each carries a short claim id used in verification reports:

* T4 / T5 — padding the array at the front / back with dummy variables;
* P8 / P9 — merging two leading like quantifiers through pairing;
* P10 / P12 — absorbing an existential position into the formula;
* P11 — fixing the first variable by a numeral;
* P5 — the base array, an identity step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import syntax as sx
from .syntax import (
    And,
    Exists,
    Forall,
    Formula,
    Iff,
    Not,
    Or,
    Pair,
    Proj,
    QuantifierArray,
    Var,
)


@dataclass(frozen=True)
class Obligation:
    goal: Formula
    background: tuple[tuple[str, Formula], ...]
    source: str  # claim id carried into reports

    def __post_init__(self) -> None:
        if sx.free_vars(self.goal):
            raise ValueError("obligation goal must be a sentence")
        for name, f in self.background:
            if sx.free_vars(f):
                raise ValueError(f"background axiom {name!r} must be a sentence")


@dataclass(frozen=True)
class TransformResult:
    output: Formula
    obligations: tuple[Obligation, ...]
    witness_map: str


def _neg(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def _all_universal(n: int) -> QuantifierArray:
    return QuantifierArray.from_spec("A" * n)


def _dual_prefix(q: QuantifierArray, vars: list[str], f: Formula) -> Formula:
    return sx.prefix(sx.dual(q), vars, f)


PAIRING_BACKGROUND: tuple[tuple[str, Formula], ...] = (
    ("pairing-proj0", sx.parse("forall a. forall b. p0(<a, b>) = a")),
    ("pairing-proj1", sx.parse("forall a. forall b. p1(<a, b>) = b")),
    ("pairing-surjective", sx.parse("forall a. a = <p0(a), p1(a)>")),
)


def _conj(fs: list[Formula]) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def _disj(fs: list[Formula]) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def _chain(*links: Formula) -> Formula:
    """A & B for the two biconditionals of a three-formula chain."""
    out = Iff(links[0], links[1])
    for a, b in zip(links[1:], links[2:]):
        out = And(out, Iff(a, b))
    return out


def pad_prefix(
    y: Formula, extra: QuantifierArray, source: QuantifierArray | None = None
) -> TransformResult:
    """Extend the array at the front with |extra| dummy positions.

    The rewritten formula conjoins trivially-true equations on fresh
    dummy variables; the obligation is the biconditional chain between
    the dual-prefixed negation of the padded formula, its disjunctive
    unfolding, and the dual-prefixed negation of the original."""
    fv = sx.free_vars(y)
    if source is None:
        source = _all_universal(len(fv))
    if len(source) != len(fv):
        raise ValueError("source array length must match the free variables of y")
    if not len(extra):
        return TransformResult(y, (), "identity: no padding requested")
    dummies = sx.fresh_pool("v", len(extra), sx.all_var_names(y))
    dummy_eqs = [sx.Eq(Var(v), Var(v)) for v in dummies]
    output = And(y, _conj(dummy_eqs))

    def close(f: Formula) -> Formula:
        return _dual_prefix(extra, dummies, _dual_prefix(source, fv, f))

    padded_neg = close(_neg(output))
    unfolded = close(_disj([_neg(y)] + [_neg(e) for e in dummy_eqs]))
    original_neg = _dual_prefix(source, fv, _neg(y))
    goal = _chain(padded_neg, unfolded, original_neg)
    ob = Obligation(goal=goal, background=(), source="T4")
    return TransformResult(
        output,
        (ob,),
        "instance evidence re-indexed by (dummy values, original arguments); "
        "dummy coordinates are arbitrary",
    )


def pad_suffix(
    y: Formula, extra: QuantifierArray, source: QuantifierArray | None = None
) -> TransformResult:
    """As pad_prefix, with the dummy positions quantified innermost."""
    fv = sx.free_vars(y)
    if source is None:
        source = _all_universal(len(fv))
    if len(source) != len(fv):
        raise ValueError("source array length must match the free variables of y")
    if not len(extra):
        return TransformResult(y, (), "identity: no padding requested")
    dummies = sx.fresh_pool("v", len(extra), sx.all_var_names(y))
    dummy_eqs = [sx.Eq(Var(v), Var(v)) for v in dummies]
    output = And(y, _conj(dummy_eqs))

    def close(f: Formula) -> Formula:
        return _dual_prefix(source, fv, _dual_prefix(extra, dummies, f))

    padded_neg = close(_neg(output))
    unfolded = close(_disj([_neg(y)] + [_neg(e) for e in dummy_eqs]))
    original_neg = _dual_prefix(source, fv, _neg(y))
    goal = _chain(padded_neg, unfolded, original_neg)
    ob = Obligation(goal=goal, background=(), source="T5")
    return TransformResult(
        output,
        (ob,),
        "instance evidence re-indexed by (original arguments, dummy values); "
        "dummy coordinates are arbitrary",
    )


def pair_leading(y: Formula, kind: str) -> TransformResult:
    """Merge the two leading array positions through the pairing
    function: the first two free variables become the two projections of
    one fresh variable.  ``kind`` is 'universal' or 'existential' and
    selects the quantifier on the merged position in the obligation."""
    if kind not in ("universal", "existential"):
        raise ValueError("kind must be 'universal' or 'existential'")
    fv = sx.free_vars(y)
    if len(fv) < 2:
        raise ValueError("pairing needs at least two distinct free variables")
    x0, x1, *rest = fv
    taken = sx.all_var_names(y)
    v = "v" if "v" not in taken else sx.fresh_pool("v", 1, taken)[0]
    output = sx.substitute_many(y, {x0: Proj(0, Var(v)), x1: Proj(1, Var(v))})

    def rest_close(f: Formula) -> Formula:
        return sx.prefix(_all_universal(len(rest)), rest, f)

    if kind == "universal":
        lhs = Forall(v, rest_close(_neg(output)))
        rhs = Forall(x0, Forall(x1, rest_close(_neg(y))))
        source = "P8"
    else:
        lhs = Exists(v, rest_close(_neg(output)))
        rhs = Exists(x0, Exists(x1, rest_close(_neg(y))))
        source = "P9"
    ob = Obligation(goal=Iff(lhs, rhs), background=PAIRING_BACKGROUND, source=source)
    return TransformResult(
        output,
        (ob,),
        "instance evidence at (a, b, rest) maps to evidence at "
        "(pair-code of a and b, rest)",
    )


def absorb_inner_exists(y: Formula) -> TransformResult:
    """Absorb a trailing existential position of a two-variable formula
    into the formula itself, leaving one free variable."""
    fv = sx.free_vars(y)
    if len(fv) != 2:
        raise ValueError("absorbing the inner existential needs exactly two free variables")
    x0, x1 = fv
    output = Exists(x1, y)
    lhs = Exists(x0, _neg(Exists(x1, y)))
    rhs = Exists(x0, Forall(x1, _neg(y)))
    ob = Obligation(goal=Iff(lhs, rhs), background=(), source="P10")
    return TransformResult(
        output,
        (ob,),
        "the recorded existential value becomes the in-formula witness; "
        "evidence keeps only the first coordinate",
    )


def fix_first_by_numeral(y: Formula, n: int) -> TransformResult:
    """Substitute the numeral of n for the first free variable."""
    fv = sx.free_vars(y)
    if not fv:
        raise ValueError("cannot fix a variable of a closed formula")
    output = sx.substitute(y, fv[0], sx.num_term(n))
    return TransformResult(
        output,
        (),
        "instance evidence at (n, rest) transfers to evidence at rest; "
        "the dual proof specializes its leading quantifier to the numeral",
    )


def absorb_trailing_exists(y: Formula) -> TransformResult:
    """Absorb a trailing existential position of a multi-variable
    formula; by the argument-order convention the absorbed variable is
    the first one occurring in y."""
    fv = sx.free_vars(y)
    if len(fv) < 2:
        raise ValueError("absorbing needs at least two distinct free variables")
    z, *rest = fv
    output = Exists(z, y)

    def rest_close(f: Formula) -> Formula:
        return sx.prefix(_all_universal(len(rest)), rest, f)

    lhs = rest_close(_neg(Exists(z, y)))
    rhs = rest_close(Forall(z, _neg(y)))
    ob = Obligation(goal=Iff(lhs, rhs), background=(), source="P12")
    return TransformResult(
        output,
        (ob,),
        "the recorded existential value for the absorbed position becomes "
        "the in-formula witness",
    )


# ---------------------------------------------------------------------------
# decomposition of the headline equivalence chain


@dataclass(frozen=True)
class ChainStep:
    claim: str  # claim id for the report
    transform: str  # transform operation name, or 'identity'
    source_array: QuantifierArray
    target_array: QuantifierArray
    description: str


def _arr(spec: str) -> QuantifierArray:
    return QuantifierArray.from_spec(spec)


def main_chain(n: int, m: int) -> list[ChainStep]:
    """Decompose the equivalences between the base statement, the
    (n+1)-fold universal array, its m-fold existential extension, and
    the exists/forall/exists^n array, into individual transform steps."""
    if n < 0 or m < 0:
        raise ValueError("chain parameters must be naturals")
    steps: list[ChainStep] = []
    if n == 0 and m == 0:
        steps.append(
            ChainStep(
                "P5",
                "identity",
                _arr("A"),
                _arr("A"),
                "the singleton universal array is the base statement itself",
            )
        )
    # edge 1: A^{n+1} down to A, merging leading universals pairwise
    for k in range(n, 0, -1):
        steps.append(
            ChainStep(
                "P8",
                "pair_leading_universal",
                _arr("A" * (k + 1)),
                _arr("A" * k),
                "merge the two leading universal positions through pairing",
            )
        )
    # edge 2: A^{n+1} E^m down to A^{n+1}, absorbing trailing existentials
    for j in range(m, 0, -1):
        prefix_spec = "A" * (n + 1)
        claim = "P10" if (n == 0 and j == 1) else "P12"
        transform = "absorb_inner_exists" if claim == "P10" else "absorb_trailing_exists"
        steps.append(
            ChainStep(
                claim,
                transform,
                _arr(prefix_spec + "E" * j),
                _arr(prefix_spec + "E" * (j - 1)),
                "absorb the last existential position into the formula",
            )
        )
    # edge 3: E A E^n down to A, absorbing the existential tail and then
    # fixing the leading existential by a numeral
    for i in range(n, 0, -1):
        steps.append(
            ChainStep(
                "P12",
                "absorb_trailing_exists",
                _arr("EA" + "E" * i),
                _arr("EA" + "E" * (i - 1)),
                "absorb the last existential position into the formula",
            )
        )
    steps.append(
        ChainStep(
            "P11",
            "fix_first_by_numeral",
            _arr("EA"),
            _arr("A"),
            "fix the leading existential position by a numeral",
        )
    )
    return steps
