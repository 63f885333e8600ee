"""A concrete finitely axiomatized arithmetic fragment with checkable
proofs, realizing the provability apparatus by bounded search.

The theory is a Robinson-style core (successor, recursive addition and
multiplication) plus surjective-pairing axioms, optionally extended by a
finite table identifying numerals with pair terms so that pairing can be
computed on concrete numbers.  On top of it the module provides

* ``prf``/``pr_search`` — the proof relation and its bounded search;
* constructive proof transformers (modus ponens, existential
  introduction, universal elimination, ex-falso) used by the
  instance-level closure-condition tests in ``check_conditions``;
* bounded witnesses of generalized omega-inconsistency: an evidence
  pattern of provable instances following a quantifier array, plus a
  proof of the dual-quantified negation; ``witness_check`` validates
  them and ``transfer_witness`` reshapes them along array rewrites;
* the two-way bridge between accepted single-existential witnesses and
  proofs of falsum.

Everything is bounded: a witness certifies instances up to a finite
range, and searches never assert unprovability.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from . import coding, prover as pv, syntax as sx, transforms as tf
from .coding import CodingError, GoedelCode, pair_nat, unpair_nat
from .prover import Limits, ProofNode, Proved, Refuted, Unknown, Verdict
from .syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Imp,
    Not,
    Pair,
    QuantifierArray,
    Var,
    FALSUM,
)


# ---------------------------------------------------------------------------
# the axiomatization


@dataclass(frozen=True)
class Axiomatization:
    """A finite list of axiom sentences under a name; the name is pure
    bookkeeping for reports and witness files."""

    name: str
    axioms: tuple[tuple[str, Formula], ...]

    def __post_init__(self) -> None:
        for label, f in self.axioms:
            if not sx.is_sentence(f):
                raise ValueError(f"axiom {label!r} is not a sentence")

    def formulas(self) -> list[Formula]:
        return [f for _, f in self.axioms]

    def extend(self, extra: list[tuple[str, Formula]], name: str | None = None) -> "Axiomatization":
        return Axiomatization(
            name=name or f"{self.name}+",
            axioms=self.axioms + tuple(extra),
        )


_EQUALITY_AXIOMS: tuple[tuple[str, str], ...] = (
    ("eq-refl", "forall a. a = a"),
    ("eq-sym", "forall a. forall b. (a = b -> b = a)"),
    ("eq-trans", "forall a. forall b. forall c. ((a = b & b = c) -> a = c)"),
    ("eq-succ-cong", "forall a. forall b. (a = b -> S(a) = S(b))"),
)

_CORE_AXIOMS: tuple[tuple[str, str], ...] = (
    ("succ-nonzero", "forall a. !(S(a) = 0)"),
    ("succ-inj", "forall a. forall b. (S(a) = S(b) -> a = b)"),
    ("add-zero", "forall a. (a + 0) = a"),
    ("add-succ", "forall a. forall b. (a + S(b)) = S((a + b))"),
    ("mul-zero", "forall a. (a * 0) = 0"),
    ("mul-succ", "forall a. forall b. (a * S(b)) = ((a * b) + a)"),
)


PAIR_TABLE_LIMIT = 8


def _parsed(pairs: tuple[tuple[str, str], ...]) -> tuple[tuple[str, Formula], ...]:
    return tuple((n, sx.parse(s)) for n, s in pairs)


def pair_table_axioms(limit: int = PAIR_TABLE_LIMIT) -> tuple[tuple[str, Formula], ...]:
    """Ground identities numeral(pair-code of a and b) = <a-bar, b-bar>
    for a, b up to the limit, so pairing is computable on numerals."""
    rows = []
    for a in range(limit + 1):
        for b in range(limit + 1):
            eq = Eq(sx.num_term(pair_nat(a, b)), Pair(sx.num_term(a), sx.num_term(b)))
            rows.append((f"pair-table-{a}-{b}", eq))
    return tuple(rows)


def default_theory() -> Axiomatization:
    return Axiomatization(
        name="toy",
        axioms=_parsed(_EQUALITY_AXIOMS) + _parsed(_CORE_AXIOMS) + tf.PAIRING_BACKGROUND,
    )


def table_theory(limit: int = PAIR_TABLE_LIMIT) -> Axiomatization:
    return Axiomatization(
        name="toy+pairs",
        axioms=default_theory().axioms + pair_table_axioms(limit),
    )


DEFAULT_THEORY = default_theory()


def _search_axioms(theory: Axiomatization, goal: Formula, lemmas: list[Formula] = []) -> list[Formula]:
    """Axioms actually handed to the search: pure equality axioms are
    dropped (the calculus closes modulo congruence already) and the
    pairing apparatus is included only when the goal mentions pairing —
    both prune useless universal formulas from the branch.  Proofs found
    over the subset remain valid over the full list."""
    relevant = [f for f in [goal] + lemmas]
    pairing = any(pv._mentions_pairing(f) for f in relevant)
    values: set[int] = set()
    for f in relevant:
        values |= _numeral_values(f)
    out: list[Formula] = []
    for label, f in theory.axioms:
        if label.startswith("eq-"):
            continue
        if isinstance(f, Exists):
            # top-level existential axioms (the omega-inconsistency
            # injectors of witness extensions) only spawn skolem junk in
            # the search; anything that needs one gets it as a lemma
            continue
        if label.startswith("pairing-") and not pairing:
            continue
        if label.startswith("pair-table-"):
            # only the table rows whose pair code occurs as a numeral in
            # the problem can matter; the rest just bloat the branch
            _, _, a, b = label.split("-")
            if not pairing or pair_nat(int(a), int(b)) not in values:
                continue
        out.append(f)
    return out


def _numeral_values(f: Formula) -> set[int]:
    """Values of all pure-numeral (S-tower) subterms of the formula."""
    out: set[int] = set()

    def walk_term(t: sx.Term) -> None:
        try:
            out.add(sx.term_value(t))
            return
        except ValueError:
            pass
        label, children = pv._decompose(t)
        for c in children:
            walk_term(c)

    def walk(g: Formula) -> None:
        if isinstance(g, Eq):
            walk_term(g.left)
            walk_term(g.right)
        elif isinstance(g, sx.Pred):
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, sx.Or, Imp, sx.Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return out


# ---------------------------------------------------------------------------
# bounded standard-model evaluation (the soundness oracle)


def eval_nat_term(t: sx.Term, env: dict[str, int] | None = None) -> int:
    """Value of a term in the standard model; pairing is the diagonal
    pair code and projections invert it.  Raises on uninterpreted
    function symbols."""
    env = env or {}
    if isinstance(t, sx.Zero):
        return 0
    if isinstance(t, sx.Succ):
        return eval_nat_term(t.arg, env) + 1
    if isinstance(t, sx.Add):
        return eval_nat_term(t.left, env) + eval_nat_term(t.right, env)
    if isinstance(t, sx.Mul):
        return eval_nat_term(t.left, env) * eval_nat_term(t.right, env)
    if isinstance(t, Pair):
        return pair_nat(eval_nat_term(t.left, env), eval_nat_term(t.right, env))
    if isinstance(t, sx.Proj):
        return unpair_nat(eval_nat_term(t.arg, env))[t.index]
    if isinstance(t, Var):
        if t.name in env:
            return env[t.name]
        raise ValueError(f"free variable {t.name!r}")
    raise ValueError("uninterpreted function symbol")


def bounded_eval(
    f: Formula, bound: int, env: dict[str, int] | None = None
) -> bool | None:
    """Three-valued truth over the standard model with quantifiers
    ranging over 0..bound: True and False verdicts are correct for full
    standard truth; None means the bound was not decisive (a universal
    all-true-so-far, an existential none-true-so-far) or the formula
    leaves the interpreted signature."""
    env = env or {}

    def ev(g: Formula, e: dict[str, int]) -> bool | None:
        if isinstance(g, Eq):
            try:
                return eval_nat_term(g.left, e) == eval_nat_term(g.right, e)
            except ValueError:
                return None
        if isinstance(g, sx.Pred):
            return None
        if isinstance(g, Not):
            v = ev(g.arg, e)
            return None if v is None else not v
        if isinstance(g, (And, sx.Or, Imp, sx.Iff)):
            a, b = ev(g.left, e), ev(g.right, e)
            if isinstance(g, And):
                if a is False or b is False:
                    return False
                return True if (a is True and b is True) else None
            if isinstance(g, sx.Or):
                if a is True or b is True:
                    return True
                return False if (a is False and b is False) else None
            if isinstance(g, Imp):
                if a is False or b is True:
                    return True
                return False if (a is True and b is False) else None
            if a is None or b is None:
                return None
            return a == b
        if isinstance(g, Forall):
            vals = [ev(g.body, {**e, g.var: d}) for d in range(bound + 1)]
            if any(v is False for v in vals):
                return False
            return None  # all instances so far true or undetermined
        if isinstance(g, Exists):
            vals = [ev(g.body, {**e, g.var: d}) for d in range(bound + 1)]
            if any(v is True for v in vals):
                return True
            return None
        raise TypeError(f"not a formula: {g!r}")

    return ev(f, env)


STD_EVAL_BOUND = 16


# ---------------------------------------------------------------------------
# proof relation and bounded provability search


def prf(code: GoedelCode | int, proof: ProofNode, theory: Axiomatization = DEFAULT_THEORY) -> bool:
    """True iff the proof object derives the decoded sentence from the
    axioms.  Raises on values that do not decode to a formula."""
    goal = coding.decode(code)
    if not isinstance(proof, ProofNode):
        return False
    return pv.check_proof(proof, goal, theory.formulas())


def pr_search(
    code: GoedelCode | int,
    limits: Limits = Limits(),
    theory: Axiomatization = DEFAULT_THEORY,
) -> Verdict:
    """Bounded realization of provability: Proved carries a checkable
    proof; everything else is Unknown — the search never asserts
    unprovability, even when a finite countermodel exists."""
    goal = coding.decode(code)
    if not sx.is_sentence(goal):
        return Unknown("open formula: provability search expects a sentence")
    # soundness fast path: a sentence determined false in the standard
    # model is unprovable, so skip the search (finite countermodels are
    # useless here -- the successor axioms admit no finite model)
    if bounded_eval(goal, STD_EVAL_BOUND) is False:
        return Unknown("false in the standard model")
    v = pv.prove(goal, _search_axioms(theory, goal), replace(limits, countermodels=False))
    if isinstance(v, Proved):
        return v
    if isinstance(v, Refuted):
        return Unknown("no proof within limits")
    return v


def prove_sentence(
    goal: Formula,
    theory: Axiomatization = DEFAULT_THEORY,
    limits: Limits = Limits(),
) -> ProofNode | None:
    """Direct search for a proof of a sentence from the axioms."""
    v = pv.prove(goal, _search_axioms(theory, goal), replace(limits, countermodels=False))
    return v.proof if isinstance(v, Proved) else None


def _derive(
    goal: Formula,
    lemmas: list[tuple[Formula, ProofNode]],
    theory: Axiomatization,
    limits: Limits,
) -> ProofNode | None:
    axs = _search_axioms(theory, goal, [f for f, _ in lemmas])
    return pv.derive_with_lemmas(goal, lemmas, axs, limits)


# ---------------------------------------------------------------------------
# constructive proof transformers (instance-level closure conditions)


def modus_ponens(
    imp: Formula,
    imp_proof: ProofNode,
    arg_proof: ProofNode,
    theory: Axiomatization = DEFAULT_THEORY,
    limits: Limits = Limits(),
) -> ProofNode | None:
    """From proofs of an implication and of its antecedent, a proof of
    the consequent."""
    if not isinstance(imp, Imp):
        raise ValueError("modus ponens needs an implication")
    return _derive(imp.right, [(imp, imp_proof), (imp.left, arg_proof)], theory, limits)


def ex_falso(
    goal: Formula,
    theory: Axiomatization = DEFAULT_THEORY,
    limits: Limits = Limits(),
) -> ProofNode | None:
    """A uniform proof of falsum -> goal, for any sentence goal."""
    v = pv.prove(Imp(FALSUM, goal), [], limits)
    return v.proof if isinstance(v, Proved) else None


def exists_intro(
    y: Formula,
    n: int,
    inst_proof: ProofNode,
    theory: Axiomatization = DEFAULT_THEORY,
    limits: Limits = Limits(),
) -> ProofNode | None:
    """From a proof of the numeral instance of a one-variable formula, a
    proof of its existential closure."""
    fv = sx.free_vars(y)
    if len(fv) != 1:
        raise ValueError("existential introduction needs one free variable")
    inst = sx.substitute(y, fv[0], sx.num_term(n))
    return _derive(Exists(fv[0], y), [(inst, inst_proof)], theory, limits)


def forall_elim(
    closed: Formula,
    all_proof: ProofNode,
    n: int,
    theory: Axiomatization = DEFAULT_THEORY,
    limits: Limits = Limits(),
) -> ProofNode | None:
    """From a proof of a universal sentence, a proof of its numeral
    instance."""
    if not isinstance(closed, Forall):
        raise ValueError("universal elimination needs a universal sentence")
    inst = sx.substitute(closed.body, closed.var, sx.num_term(n))
    return _derive(inst, [(closed, all_proof)], theory, limits)


@dataclass(frozen=True)
class ConditionReport:
    """Per-condition (passed, total) tallies of the instance-level
    closure tests for the provability predicate."""

    results: dict[str, tuple[int, int]]
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(p == t for p, t in self.results.values())


def _sample_true_facts(rng, count: int) -> list[Formula]:
    """Random ground sentences provable from the core: numeral sums and
    products with their values, and inequalities of distinct numerals."""
    out: list[Formula] = []
    for _ in range(count):
        kind = rng.randrange(3)
        a, b = rng.randrange(4), rng.randrange(4)
        if kind == 0:
            f = Eq(sx.Add(sx.num_term(a), sx.num_term(b)), sx.num_term(a + b))
        elif kind == 1:
            f = Eq(sx.Mul(sx.num_term(a), sx.num_term(b)), sx.num_term(a * b))
        else:
            if a == b:
                b = a + 1 + rng.randrange(3)
            f = Not(Eq(sx.num_term(a), sx.num_term(b)))
        out.append(f)
    return out


def _sample_sigma1(rng, count: int) -> list[Formula]:
    """Existentially quantified equations of closed-term evaluations."""
    out: list[Formula] = []
    for _ in range(count):
        a, b = rng.randrange(4), rng.randrange(4)
        t = sx.Add(sx.num_term(a), sx.num_term(b)) if rng.randrange(2) else sx.Mul(
            sx.num_term(a), sx.num_term(b)
        )
        out.append(Exists("x0", Eq(Var("x0"), t)))
    return out


def check_conditions(
    samples: int = 20,
    limits: Limits = Limits(),
    theory: Axiomatization = DEFAULT_THEORY,
    seed: int = 0,
) -> ConditionReport:
    """Instance-level tests of the provability closure conditions:

    * C1 — provable ground facts are found by pr_search, and the found
      proof satisfies prf;
    * C2 — proofs of an implication and its antecedent compose, by
      modus ponens at the proof-object level, to a proof of the
      consequent;
    * C3 — true sigma-1 sentences (existential closed-term equations)
      are provable;
    * C4 — every axiom has an accepted proof;
    * C6 — ex-falso proofs exist uniformly;
    * C7 — instance proofs lift to existential closures;
    * C8 — universal proofs specialize to every numeral instance.
    """
    import random

    rng = random.Random(seed)
    results: dict[str, tuple[int, int]] = {}
    failures: list[str] = []

    def record(cond: str, ok: bool, what: str) -> None:
        p, t = results.get(cond, (0, 0))
        results[cond] = (p + (1 if ok else 0), t + 1)
        if not ok:
            failures.append(f"{cond}: {what}")

    facts = _sample_true_facts(rng, samples)
    fact_proofs: list[tuple[Formula, ProofNode]] = []
    for f in facts:
        v = pr_search(coding.encode(f), limits, theory)
        ok = isinstance(v, Proved) and prf(coding.encode(f), v.proof, theory)
        record("C1", ok, sx.print_formula(f))
        if ok:
            fact_proofs.append((f, v.proof))

    for i in range(min(samples, len(fact_proofs))):
        phi, p_phi = fact_proofs[rng.randrange(len(fact_proofs))]
        psi, _ = fact_proofs[rng.randrange(len(fact_proofs))]
        imp = Imp(phi, psi)
        p_imp = prove_sentence(imp, theory, limits)
        composed = p_imp and modus_ponens(imp, p_imp, p_phi, theory, limits)
        ok = composed is not None and prf(coding.encode(psi), composed, theory)
        record("C2", ok, sx.print_formula(imp))

    for f in _sample_sigma1(rng, samples):
        v = pr_search(coding.encode(f), limits, theory)
        record("C3", isinstance(v, Proved), sx.print_formula(f))

    for label, ax in theory.axioms:
        p = prove_sentence(ax, theory, limits)
        ok = p is not None and prf(coding.encode(ax), p, theory)
        record("C4", ok, label)

    for f in facts[:samples]:
        p = ex_falso(f, theory, limits)
        ok = p is not None and pv.check_proof(p, Imp(FALSUM, f), [])
        record("C6", ok, sx.print_formula(f))

    for i in range(samples):
        n = rng.randrange(4)
        y = rng.choice(
            [
                sx.parse("(x0 + 0) = x0"),
                sx.parse("x0 = x0"),
                Eq(sx.Add(Var("x0"), sx.num_term(1)), sx.Succ(Var("x0"))),
            ]
        )
        inst = sx.substitute(y, "x0", sx.num_term(n))
        p = prove_sentence(inst, theory, limits)
        lifted = p and exists_intro(y, n, p, theory, limits)
        ok = lifted is not None and prf(coding.encode(Exists("x0", y)), lifted, theory)
        record("C7", ok, sx.print_formula(y))

    closed = sx.parse("forall x0. (x0 + 0) = x0")
    p_all = prove_sentence(closed, theory, limits)
    for i in range(samples):
        n = rng.randrange(8)
        inst = sx.substitute(closed.body, closed.var, sx.num_term(n))
        p = p_all and forall_elim(closed, p_all, n, theory, limits)
        ok = p is not None and prf(coding.encode(inst), p, theory)
        record("C8", ok, f"n={n}")

    return ConditionReport(results=results, failures=tuple(failures))


# ---------------------------------------------------------------------------
# bounded omega-inconsistency witnesses


@dataclass(frozen=True)
class Witness:
    """Bounded evidence that a formula violates the generalized
    omega-consistency statement for its array:

    * ``y`` has one free variable per array position, listed in ``vars``
      in array order;
    * ``evidence`` maps argument tuples to proofs of the corresponding
      numeral instances, following the array pattern — universal
      positions branch over the whole range 0..bound, existential
      positions need one recorded child;
    * ``dual_proof`` proves the dual-array closure of the negation.

    ``extra_axioms`` names the (usually inconsistency-introducing)
    axioms beyond the base theory against which the proofs check;
    ``with_pair_table`` selects the pairing-table extension as base."""

    y: Formula
    array: QuantifierArray
    vars: tuple[str, ...]
    bound: int
    evidence: dict[tuple[int, ...], ProofNode]
    dual_proof: ProofNode
    extra_axioms: tuple[tuple[str, Formula], ...] = ()
    with_pair_table: bool = False

    def theory(self) -> Axiomatization:
        base = table_theory() if self.with_pair_table else default_theory()
        return base.extend(list(self.extra_axioms), name=base.name + "+witness") if self.extra_axioms else base

    def instance(self, args: tuple[int, ...]) -> Formula:
        if len(args) != len(self.vars):
            raise ValueError("argument tuple does not match the array")
        return sx.substitute_many(
            self.y, {v: sx.num_term(k) for v, k in zip(self.vars, args)}
        )

    def dual_sentence(self) -> Formula:
        return sx.prefix(sx.dual(self.array), list(self.vars), pv.neg(self.y))


@dataclass(frozen=True)
class WitnessBounds:
    instance_range: int = 8
    limits: Limits = Limits()


def _pattern_ok(
    keys: set[tuple[int, ...]], array: QuantifierArray, bound: int, prefix: tuple[int, ...] = ()
) -> bool:
    """The evidence keys realize the array pattern: universal positions
    cover the whole range, existential positions have some recorded
    value whose subtree is again complete."""
    depth = len(prefix)
    if depth == len(array):
        return prefix in keys
    kinds = list(array)
    if kinds[depth] == sx.FORALL:
        return all(_pattern_ok(keys, array, bound, prefix + (n,)) for n in range(bound + 1))
    recorded = {k[depth] for k in keys if k[:depth] == prefix}
    return any(_pattern_ok(keys, array, bound, prefix + (n,)) for n in recorded)


def witness_check(w: Witness, bounds: WitnessBounds = WitnessBounds()) -> bool:
    """True iff the evidence pattern is complete over the instance range
    and every referenced proof (instances and dual) checks."""
    try:
        if len(w.vars) != len(w.array) or set(w.vars) != set(sx.free_vars(w.y)):
            return False
        theory = w.theory()
        axs = theory.formulas()
        n = min(w.bound, bounds.instance_range)
        if not _pattern_ok(set(w.evidence), w.array, n):
            return False
        needed = _needed_keys(set(w.evidence), w.array, n)
        for args in needed:
            if not pv.check_proof(w.evidence[args], w.instance(args), axs):
                return False
        return pv.check_proof(w.dual_proof, w.dual_sentence(), axs)
    except (ValueError, KeyError, TypeError):
        return False


def _needed_keys(
    keys: set[tuple[int, ...]], array: QuantifierArray, bound: int, prefix: tuple[int, ...] = ()
) -> list[tuple[int, ...]]:
    """A sufficient subset of evidence keys realizing the pattern (for
    existential positions, the first recorded value that completes)."""
    depth = len(prefix)
    if depth == len(array):
        return [prefix]
    kinds = list(array)
    if kinds[depth] == sx.FORALL:
        out: list[tuple[int, ...]] = []
        for n in range(bound + 1):
            out.extend(_needed_keys(keys, array, bound, prefix + (n,)))
        return out
    recorded = sorted({k[depth] for k in keys if k[:depth] == prefix})
    for n in recorded:
        if _pattern_ok(keys, array, bound, prefix + (n,)):
            return _needed_keys(keys, array, bound, prefix + (n,))
    return []


def seed_witness(
    y: Formula,
    array: QuantifierArray,
    bound: int = 3,
    limits: Limits = Limits(),
    with_pair_table: bool = False,
) -> Witness:
    """A genuine bounded witness for y: instances are proved from the
    base theory; the dual sentence is adjoined as an axiom (making the
    extension deliberately omega-inconsistent, which is the point of a
    witness)."""
    vars = tuple(sx.free_vars(y))
    if len(vars) != len(array):
        raise ValueError("array length must match the free variables of y")
    base = table_theory() if with_pair_table else default_theory()
    evidence: dict[tuple[int, ...], ProofNode] = {}

    def fill(prefix: tuple[int, ...]) -> bool:
        if len(prefix) == len(array):
            inst = sx.substitute_many(
                y, {v: sx.num_term(k) for v, k in zip(vars, prefix)}
            )
            if bounded_eval(inst, STD_EVAL_BOUND) is False:
                return False
            p = prove_sentence(inst, base, limits)
            if p is None:
                return False
            evidence[prefix] = p
            return True
        kinds = list(array)
        if kinds[len(prefix)] == sx.FORALL:
            return all([fill(prefix + (n,)) for n in range(bound + 1)])
        return any(fill(prefix + (n,)) for n in range(bound + 1))

    if not fill(()):
        raise ValueError("no provable evidence pattern for y at this bound")
    dual = sx.prefix(sx.dual(array), list(vars), pv.neg(y))
    dual_ax = ("omega-inc-dual", dual)
    dual_proof = pv.prove(dual, [dual], Limits(countermodels=False))
    assert isinstance(dual_proof, Proved)
    return Witness(
        y=y,
        array=array,
        vars=vars,
        bound=bound,
        evidence=evidence,
        dual_proof=dual_proof.proof,
        extra_axioms=(dual_ax,),
        with_pair_table=with_pair_table,
    )


# ---------------------------------------------------------------------------
# witness transfer along array rewrites


def _transfer_instances(
    w: Witness,
    rebuild,
    new_keys,
    theory: Axiomatization,
    limits: Limits,
) -> dict[tuple[int, ...], ProofNode]:
    out: dict[tuple[int, ...], ProofNode] = {}
    for new_key, src_key in new_keys:
        p = rebuild(new_key, src_key)
        if p is None:
            raise ValueError(f"could not rebuild instance proof at {new_key}")
        out[new_key] = p
    return out


def transfer_witness(w: Witness, step: str, **options) -> Witness:
    """Reshape a witness along an array rewrite.  Steps:

    * ``pad_prefix`` / ``pad_suffix`` (option ``extra``: array) — dummy
      positions take all values up to the bound (universal) or zero
      (existential); instance proofs gain trivially true conjuncts;
    * ``pair_leading_universal`` / ``pair_leading_existential`` — the
      two leading positions merge through the pairing code; requires the
      pairing-table base;
    * ``absorb_inner_exists`` / ``absorb_trailing_exists`` — the last
      position's recorded value becomes an in-formula existential
      witness;
    * ``fix_first_by_numeral`` — the leading existential position is
      frozen at its recorded value.
    """
    limits: Limits = options.get("limits", Limits())
    theory = w.theory()

    if step in ("pad_prefix", "pad_suffix"):
        extra: QuantifierArray = options["extra"]
        res = tf.pad_prefix(w.y, extra, w.array) if step == "pad_prefix" else tf.pad_suffix(
            w.y, extra, w.array
        )
        y2 = res.output
        dummies = tuple(v for v in sx.free_vars(y2) if v not in w.vars)
        if step == "pad_prefix":
            array2 = extra + w.array
            vars2 = dummies + w.vars
            split = lambda key: (key[: len(extra)], key[len(extra):])
        else:
            array2 = w.array + extra
            vars2 = w.vars + dummies
            split = lambda key: (key[len(w.vars):], key[: len(w.vars)])

        def dummy_tuples():
            kinds = list(extra)
            ranges = [
                range(w.bound + 1) if k == sx.FORALL else range(1) for k in kinds
            ]
            import itertools

            return list(itertools.product(*ranges))

        new_keys = []
        for src_key in w.evidence:
            for d in dummy_tuples():
                key = d + src_key if step == "pad_prefix" else src_key + d
                new_keys.append((key, src_key))

        def rebuild(new_key, src_key):
            inst2 = sx.substitute_many(
                y2, {v: sx.num_term(k) for v, k in zip(vars2, new_key)}
            )
            return _derive(inst2, [(w.instance(src_key), w.evidence[src_key])], theory, limits)

        evidence = _transfer_instances(w, rebuild, new_keys, theory, limits)
        dual2 = sx.prefix(sx.dual(array2), list(vars2), pv.neg(y2))
        dual_proof = _derive(dual2, [(w.dual_sentence(), w.dual_proof)], theory, limits)
        if dual_proof is None:
            raise ValueError("could not transfer the dual proof")
        return replace(
            w, y=y2, array=array2, vars=vars2, evidence=evidence, dual_proof=dual_proof
        )

    if step in ("pair_leading_universal", "pair_leading_existential"):
        kind = "universal" if step.endswith("universal") else "existential"
        kinds = list(w.array)
        want = sx.FORALL if kind == "universal" else sx.EXISTS
        if len(kinds) < 2 or kinds[0] != want or kinds[1] != want:
            raise ValueError("the two leading array positions do not match the step")
        if not w.with_pair_table:
            raise ValueError("pairing transfer needs the pairing-table base theory")
        res = tf.pair_leading(w.y, kind)
        y2 = res.output
        v = sx.free_vars(y2)[0]
        array2 = QuantifierArray((kinds[0],) + tuple(kinds[2:]))
        vars2 = (v,) + w.vars[2:]

        new_keys = []
        if kind == "universal":
            # every merged value up to the bound decodes to a recorded pair
            for m in range(w.bound + 1):
                a, b = unpair_nat(m)
                for src_key in w.evidence:
                    if src_key[0] == a and src_key[1] == b:
                        new_keys.append(((m,) + src_key[2:], src_key))
        else:
            for src_key in w.evidence:
                m = pair_nat(src_key[0], src_key[1])
                new_keys.append(((m,) + src_key[2:], src_key))

        def rebuild(new_key, src_key):
            inst2 = sx.substitute_many(
                y2, {u: sx.num_term(k) for u, k in zip(vars2, new_key)}
            )
            return _derive(inst2, [(w.instance(src_key), w.evidence[src_key])], theory, limits)

        evidence = _transfer_instances(w, rebuild, new_keys, theory, limits)
        dual2 = sx.prefix(sx.dual(array2), list(vars2), pv.neg(y2))
        dual_proof = _derive(dual2, [(w.dual_sentence(), w.dual_proof)], theory, limits)
        if dual_proof is None:
            raise ValueError("could not transfer the dual proof")
        return replace(
            w, y=y2, array=array2, vars=vars2, evidence=evidence, dual_proof=dual_proof
        )

    if step in ("absorb_inner_exists", "absorb_trailing_exists"):
        kinds = list(w.array)
        if not kinds or kinds[-1] != sx.EXISTS:
            raise ValueError("the last array position must be existential")
        z = w.vars[-1]
        y2 = Exists(z, w.y)
        array2 = QuantifierArray(tuple(kinds[:-1]))
        vars2 = w.vars[:-1]
        new_keys = []
        seen = set()
        for src_key in w.evidence:
            key = src_key[:-1]
            if key not in seen:
                seen.add(key)
                new_keys.append((key, src_key))

        def rebuild(new_key, src_key):
            inst2 = sx.substitute_many(
                y2, {u: sx.num_term(k) for u, k in zip(vars2, new_key)}
            )
            return _derive(inst2, [(w.instance(src_key), w.evidence[src_key])], theory, limits)

        evidence = _transfer_instances(w, rebuild, new_keys, theory, limits)
        dual2 = sx.prefix(sx.dual(array2), list(vars2), pv.neg(y2))
        dual_proof = _derive(dual2, [(w.dual_sentence(), w.dual_proof)], theory, limits)
        if dual_proof is None:
            raise ValueError("could not transfer the dual proof")
        return replace(
            w, y=y2, array=array2, vars=vars2, evidence=evidence, dual_proof=dual_proof
        )

    if step == "fix_first_by_numeral":
        kinds = list(w.array)
        if not kinds or kinds[0] != sx.EXISTS:
            raise ValueError("the leading array position must be existential")
        recorded = sorted({k[0] for k in w.evidence})
        n = next(
            (
                v
                for v in recorded
                if _pattern_ok(set(w.evidence), w.array, w.bound, (v,))
            ),
            None,
        )
        if n is None:
            raise ValueError("no recorded leading value completes the pattern")
        y2 = sx.substitute(w.y, w.vars[0], sx.num_term(n))
        array2 = QuantifierArray(tuple(kinds[1:]))
        vars2 = w.vars[1:]
        evidence = {
            k[1:]: p for k, p in w.evidence.items() if k[0] == n
        }
        dual2 = sx.prefix(sx.dual(array2), list(vars2), pv.neg(y2))
        dual_proof = _derive(
            dual2, [(w.dual_sentence(), w.dual_proof)], w.theory(), limits
        )
        if dual_proof is None:
            raise ValueError("could not transfer the dual proof")
        return replace(
            w, y=y2, array=array2, vars=vars2, evidence=evidence, dual_proof=dual_proof
        )

    raise ValueError(f"unknown transfer step: {step}")


# ---------------------------------------------------------------------------
# single-existential witnesses vs. proofs of falsum


def falsum_from_witness(w: Witness, limits: Limits = Limits()) -> ProofNode | None:
    """An accepted single-existential witness yields a proof of falsum:
    lift the recorded instance existentially and contradict the dual."""
    if list(w.array) != [sx.EXISTS]:
        raise ValueError("the pipeline needs a single-existential witness")
    key = next(iter(_needed_keys(set(w.evidence), w.array, w.bound)))
    lemmas = [
        (w.instance(key), w.evidence[key]),
        (w.dual_sentence(), w.dual_proof),
    ]
    return _derive(FALSUM, lemmas, w.theory(), limits)


def witness_from_falsum(
    falsum_proof: ProofNode,
    extra_axioms: tuple[tuple[str, Formula], ...] = (),
    limits: Limits = Limits(),
) -> Witness:
    """From a proof of falsum, a single-existential witness: the formula
    'x0 differs from itself' gets its instance from ex falso while the
    dual (everything equals itself) is honestly provable."""
    y = Not(Eq(Var("x0"), Var("x0")))
    theory = default_theory().extend(list(extra_axioms)) if extra_axioms else default_theory()
    inst = sx.substitute(y, "x0", sx.num_term(0))
    inst_proof = _derive(inst, [(FALSUM, falsum_proof)], theory, limits)
    dual = Forall("x0", Eq(Var("x0"), Var("x0")))
    dual_v = pv.prove(dual, [], replace(limits, countermodels=False))
    if inst_proof is None or not isinstance(dual_v, Proved):
        raise ValueError("could not assemble the witness")
    return Witness(
        y=y,
        array=QuantifierArray.from_spec("E"),
        vars=("x0",),
        bound=0,
        evidence={(0,): inst_proof},
        dual_proof=dual_v.proof,
        extra_axioms=extra_axioms,
    )


# ---------------------------------------------------------------------------
# witness files


def witness_to_json(w: Witness) -> str:
    doc = {
        "format": "omegacon-witness-v1",
        "y": sx.print_formula(w.y),
        "array": w.array.spec(),
        "vars": list(w.vars),
        "bound": w.bound,
        "evidence": [
            {"args": list(k), "proof": pv.serialize_proof(p)}
            for k, p in sorted(w.evidence.items())
        ],
        "dual_proof": pv.serialize_proof(w.dual_proof),
        "extra_axioms": [
            {"name": n, "formula": sx.print_formula(f)} for n, f in w.extra_axioms
        ],
        "with_pair_table": w.with_pair_table,
    }
    return json.dumps(doc, indent=2)


def witness_from_json(text: str) -> Witness:
    doc = json.loads(text)
    if doc.get("format") != "omegacon-witness-v1":
        raise ValueError("not a witness file")
    return Witness(
        y=sx.parse(doc["y"]),
        array=QuantifierArray.from_spec(doc["array"]),
        vars=tuple(doc["vars"]),
        bound=int(doc["bound"]),
        evidence={
            tuple(e["args"]): pv.parse_proof(e["proof"]) for e in doc["evidence"]
        },
        dual_proof=pv.parse_proof(doc["dual_proof"]),
        extra_axioms=tuple(
            (e["name"], sx.parse(e["formula"])) for e in doc["extra_axioms"]
        ),
        with_pair_table=bool(doc.get("with_pair_table", False)),
    )
