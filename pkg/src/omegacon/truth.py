"""Bounded standard-model truth oracle and its interaction with
provability.

``tr_eval`` is a three-valued evaluator on coded sentences: True and
False are sound for full standard truth, Unknown records that the
quantifier bound was not decisive.  On top of it:

* ``check_axioms`` tests, on sampled codes, the expected instance-level
  laws tying truth to provability (soundness), to quantifier
  instantiation (both biconditionals), to negation (strictness), and to
  formula-hood (the precondition guard);
* ``replay_lemma12`` materializes the link-by-link chain that pushes a
  truth claim through a quantifier prefix, confirming each link by
  bounded evaluation on determined cases;
* ``replay_theorem13`` executes the four operational moves by which a
  purported bounded omega-inconsistency witness would yield a
  contradiction, reporting which move blocks it — over a sound theory,
  one always does.

The oracle is partial by design: a total classical truth predicate is
not realizable at this scale, so all laws are tested on determined
instances only, with an optional override mode that closes True under
one block of universal quantifiers whose matrix is an identity decided
by term evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import coding, prover as pv, syntax as sx, toytheory as tt
from .coding import CodingError, GoedelCode
from .prover import Limits, ProofNode, Proved
from .syntax import Eq, Exists, Forall, Formula, Not, QuantifierArray, Var
from .toytheory import STD_EVAL_BOUND, Witness, bounded_eval


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class TruthVerdict:
    value: bool | None  # None = Unknown
    reason: str = ""

    @property
    def determined(self) -> bool:
        return self.value is not None

    def __repr__(self) -> str:
        if self.value is None:
            return f"Unknown({self.reason!r})"
        return "True" if self.value else "False"


TRUE = TruthVerdict(True)
FALSE = TruthVerdict(False)


def _unknown(reason: str) -> TruthVerdict:
    return TruthVerdict(None, reason)


# ---------------------------------------------------------------------------
# the oracle


def _strip_universal_block(f: Formula) -> tuple[list[str], Formula]:
    vars: list[str] = []
    while isinstance(f, Forall):
        vars.append(f.var)
        f = f.body
    return vars, f


def _quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, Not):
        return _quantifier_free(f.arg)
    if isinstance(f, (sx.And, sx.Or, sx.Imp, sx.Iff)):
        return _quantifier_free(f.left) and _quantifier_free(f.right)
    return True


_OVERRIDE_PROBES = 3


def tr_eval(code: GoedelCode | int, bound: int, override: bool = False) -> TruthVerdict:
    """Three-valued truth of a coded sentence with quantifiers ranging
    over 0..bound.  Universals are never True and existentials never
    False under the strict rule; ``override`` additionally accepts a
    leading all-universal block whose quantifier-free matrix evaluates
    true on the whole range and on probe points beyond it (an identity
    decided by term evaluation).  Raises on codes that are not
    sentences."""
    f = coding.decode(code)
    if not sx.is_sentence(f):
        raise ValueError("truth evaluation expects a sentence code")
    v = bounded_eval(f, bound)
    if v is not None:
        return TRUE if v else FALSE
    if override:
        vars, matrix = _strip_universal_block(f)
        if vars and _quantifier_free(matrix):
            import itertools

            probes = list(range(bound + 1)) + [bound + 1 + i * 7 for i in range(_OVERRIDE_PROBES)]
            ok = all(
                bounded_eval(matrix, bound, dict(zip(vars, point))) is True
                for point in itertools.product(probes, repeat=len(vars))
            )
            if ok:
                return TRUE
    return _unknown("quantifier bound exhausted")


# ---------------------------------------------------------------------------
# axiom instance checks


@dataclass(frozen=True)
class AxiomReport:
    results: dict[str, tuple[int, int]]
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(p == t for p, t in self.results.values())


def _random_term(rng, vars: list[str], depth: int) -> sx.Term:
    if depth == 0 or rng.random() < 0.4:
        if vars and rng.random() < 0.5:
            return Var(rng.choice(vars))
        return sx.num_term(rng.randrange(4))
    ctor = rng.choice([sx.Add, sx.Mul, sx.Succ])
    if ctor is sx.Succ:
        return sx.Succ(_random_term(rng, vars, depth - 1))
    return ctor(_random_term(rng, vars, depth - 1), _random_term(rng, vars, depth - 1))


def random_formula(rng, vars: list[str], depth: int = 3) -> Formula:
    """Random formula over the interpreted signature with free variables
    drawn from ``vars``."""
    if depth == 0 or rng.random() < 0.35:
        return Eq(_random_term(rng, vars, 2), _random_term(rng, vars, 2))
    kind = rng.randrange(6)
    if kind == 0:
        return Not(random_formula(rng, vars, depth - 1))
    if kind in (1, 2, 3):
        ctor = rng.choice([sx.And, sx.Or, sx.Imp])
        return ctor(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1))
    v = f"q{rng.randrange(3)}"
    ctor = Forall if kind == 4 else Exists
    return ctor(v, random_formula(rng, vars + [v], depth - 1))


def random_sentence(rng, depth: int = 3) -> Formula:
    f = random_formula(rng, [], depth)
    for v in reversed(sx.free_vars(f)):
        f = Forall(v, f) if rng.random() < 0.5 else Exists(v, f)
    return f


def check_axioms(
    samples: int = 100,
    bound: int = 8,
    proof_limits: Limits = Limits(),
    seed: int = 0,
) -> AxiomReport:
    """Instance-level checks of the truth-predicate laws:

    * A1 — sentences found provable never evaluate False (soundness);
    * A2 — a universal sentence agrees with the conjunction of its
      numeral instances on determined cases;
    * A3 — dito for existentials and disjunction;
    * A4 — negation flips verdicts and preserves determinacy;
    * A5 — codes that are not sentence codes are rejected.
    """
    import random

    rng = random.Random(seed)
    results: dict[str, tuple[int, int]] = {}
    failures: list[str] = []

    def record(ax: str, ok: bool, what: str) -> None:
        p, t = results.get(ax, (0, 0))
        results[ax] = (p + (1 if ok else 0), t + 1)
        if not ok:
            failures.append(f"{ax}: {what}")

    # A1 over provable sentences: sample ground facts the search can prove
    proved = 0
    while proved < samples:
        f = tt._sample_true_facts(rng, 1)[0]
        v = tt.pr_search(coding.encode(f), proof_limits)
        if not isinstance(v, Proved):
            continue
        proved += 1
        record("A1", tr_eval(coding.encode(f), bound).value is not False, sx.print_formula(f))

    # A2/A3: open y with one free variable; compare the quantified
    # sentence with the bounded aggregation of its numeral instances
    for _ in range(samples):
        y = random_formula(rng, ["x0"], 2)
        if sx.free_vars(y) != ["x0"]:
            y = sx.Or(y, Eq(Var("x0"), Var("x0"))) if "x0" not in sx.free_vars(y) else y
        for ax, ctor in (("A2", Forall), ("A3", Exists)):
            whole = tr_eval(coding.encode(ctor("x0", y)), bound)
            insts = [
                tr_eval(
                    coding.encode(sx.substitute(y, "x0", sx.num_term(n))), bound
                )
                for n in range(bound + 1)
            ]
            if ctor is Forall:
                agg_false = any(i.value is False for i in insts)
                ok = (whole.value is False) == agg_false if whole.determined or agg_false else True
                # a universal is never strictly True; determined cases must agree
                ok = ok and whole.value is not True
            else:
                agg_true = any(i.value is True for i in insts)
                ok = (whole.value is True) == agg_true if whole.determined or agg_true else True
                ok = ok and whole.value is not False
            record(ax, ok, sx.print_formula(ctor("x0", y)))

    # A4 strictness on random sentences
    for _ in range(samples):
        f = random_sentence(rng, 2)
        a = tr_eval(coding.encode(f), bound)
        b = tr_eval(coding.encode(Not(f)), bound)
        ok = a.determined == b.determined and (not a.determined or a.value != b.value)
        record("A4", ok, sx.print_formula(f))

    # A5: open formulas and garbage codes are rejected
    for _ in range(samples):
        bad = rng.randrange(2)
        try:
            if bad:
                tr_eval(coding.encode(Eq(Var("x0"), sx.num_term(0))), bound)
            else:
                # a term code is never a formula code
                tr_eval(coding.encode_term(sx.num_term(rng.randrange(50))), bound)
            record("A5", False, "accepted a non-sentence code")
        except (ValueError, CodingError):
            record("A5", True, "")

    return AxiomReport(results=results, failures=tuple(failures))


# ---------------------------------------------------------------------------
# the quantifier-pushing chain


@dataclass(frozen=True)
class ChainLink:
    index: int
    quantifier: str
    checked: int
    disagreements: int

    @property
    def confirmed(self) -> bool:
        return self.disagreements == 0


@dataclass(frozen=True)
class Lemma12Report:
    array: QuantifierArray
    links: tuple[ChainLink, ...]

    @property
    def confirmed(self) -> bool:
        return all(l.confirmed for l in self.links)


def replay_lemma12(
    q: QuantifierArray, y: Formula, bound: int = 4
) -> Lemma12Report:
    """Materialize, link by link, the chain pushing truth through the
    quantifier prefix: link i compares the truth of the sentence with
    quantifiers i.. still coded against the aggregation over the i-th
    variable of the sentences with quantifiers i+1.. — i.e. one
    application of the universal or existential law at each position.
    The chain has exactly |q| links."""
    vars = sx.free_vars(y)
    if len(vars) != len(q):
        raise ValueError("array length must match the free variables of y")
    if len(q) > 4:
        raise ValueError("chains longer than 4 are out of scope")
    import itertools

    kinds = list(q)
    links: list[ChainLink] = []
    for i in range(len(q)):
        checked = 0
        disagreements = 0
        for outer in itertools.product(range(bound + 1), repeat=i):
            inst = sx.substitute_many(
                y, {v: sx.num_term(n) for v, n in zip(vars[:i], outer)}
            )
            whole = tr_eval(
                coding.encode(sx.prefix(QuantifierArray(tuple(kinds[i:])), vars[i:], inst)),
                bound,
            )
            parts = [
                tr_eval(
                    coding.encode(
                        sx.prefix(
                            QuantifierArray(tuple(kinds[i + 1:])),
                            vars[i + 1:],
                            sx.substitute(inst, vars[i], sx.num_term(n)),
                        )
                    ),
                    bound,
                )
                for n in range(bound + 1)
            ]
            checked += 1
            if kinds[i] == sx.FORALL:
                if whole.value is True and any(p.value is False for p in parts):
                    disagreements += 1
                if whole.value is False and all(p.value is True for p in parts):
                    disagreements += 1
                if any(p.value is False for p in parts) and whole.value is True:
                    disagreements += 1
            else:
                if whole.value is True and not any(p.value is not False for p in parts):
                    disagreements += 1
                if whole.value is False and any(p.value is True for p in parts):
                    disagreements += 1
                if any(p.value is True for p in parts) and whole.value is False:
                    disagreements += 1
        links.append(
            ChainLink(index=i, quantifier=kinds[i], checked=checked, disagreements=disagreements)
        )
    return Lemma12Report(array=q, links=tuple(links))


# ---------------------------------------------------------------------------
# the contradiction replay


@dataclass(frozen=True)
class Move:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Theorem13Report:
    moves: tuple[Move, ...]
    contradiction_reached: bool

    @property
    def blocking_move(self) -> str | None:
        for m in self.moves:
            if not m.passed:
                return m.name
        return None


def replay_theorem13(
    q: QuantifierArray,
    w: Witness,
    bound: int = 8,
    proof_limits: Limits = Limits(),
) -> Theorem13Report:
    """Execute the four moves by which a bounded witness would force a
    contradiction, against the sound base theory (the witness's own
    inconsistency-introducing extras are deliberately not granted):

    1. the instance evidence pattern is complete and every instance
       proof checks over the base theory; by soundness the instances
       then evaluate true;
    2. the dual proof checks over the base theory;
    3. truth pushes through the dual's quantifier prefix: the dual
       sentence must not evaluate False;
    4. the instance pattern and the flipped dual clash.

    Over a sound theory some move always fails; the report names it.
    """
    if q != w.array:
        raise ValueError("array does not match the witness")
    base = tt.table_theory() if w.with_pair_table else tt.default_theory()
    axs = base.formulas()

    n = min(w.bound, bound)
    keys = set(w.evidence)
    pattern_ok = tt._pattern_ok(keys, w.array, n)
    needed = tt._needed_keys(keys, w.array, n) if pattern_ok else []
    proofs_ok = pattern_ok and all(
        pv.check_proof(w.evidence[k], w.instance(k), axs) for k in needed
    )
    instances_true = proofs_ok and all(
        bounded_eval(w.instance(k), bound) is not False for k in needed
    )
    move1 = Move(
        "instance pattern provable and true",
        bool(instances_true),
        "pattern incomplete" if not pattern_ok else (
            "an instance proof fails over the base theory" if not proofs_ok else ""
        ),
    )

    dual = w.dual_sentence()
    dual_ok = pv.check_proof(w.dual_proof, dual, axs)
    move2 = Move(
        "dual negation provable",
        dual_ok,
        "" if dual_ok else "the dual proof does not check over the base theory",
    )

    dual_truth = bounded_eval(dual, bound)
    move3 = Move(
        "truth pushes through the dual prefix",
        move2.passed and dual_truth is not False,
        "" if dual_truth is not False else "the dual sentence evaluates false",
    )

    clash = move1.passed and move2.passed and move3.passed and dual_truth is True
    move4 = Move(
        "the pattern and the flipped dual clash",
        clash,
        "" if clash else "no contradiction derivable",
    )
    return Theorem13Report(
        moves=(move1, move2, move3, move4),
        contradiction_reached=clash,
    )
