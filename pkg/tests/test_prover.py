import random

import pytest

from omegacon import prover as pv, syntax as sx
from omegacon.prover import Limits, Proved, Refuted, Unknown
from omegacon.syntax import (
    And,
    App,
    Eq,
    Exists,
    Forall,
    Imp,
    Not,
    Or,
    Pred,
    Var,
    Zero,
)


LIM = Limits(depth=10, node_budget=100_000)
NOCM = Limits(depth=10, node_budget=100_000, countermodels=False)


def proved(goal, background=()):
    v = pv.prove(goal, list(background), NOCM)
    assert isinstance(v, Proved), type(v).__name__
    assert pv.check_proof(v.proof, goal, list(background))
    return v.proof


def test_propositional_tautologies():
    for text in (
        "forall u. (p(u) | !(p(u)))",
        "forall u. ((p(u) -> q(u)) -> (!(q(u)) -> !(p(u))))",
        "forall u. ((p(u) & q(u)) <-> (q(u) & p(u)))",
    ):
        proved(sx.parse(text))


def test_quantifier_reasoning():
    proved(sx.parse("(forall u. p(u)) -> exists u. p(u)"))
    proved(sx.parse("(exists u. forall w. r(u, w)) -> forall w. exists u. r(u, w)"))
    proved(
        sx.parse("exists u. p(u)"),
        [sx.parse("forall u. (q(u) -> p(u))"), sx.parse("q(0)")],
    )


def test_equality_via_congruence():
    proved(
        sx.parse("p(S(0))"),
        [sx.parse("forall u. (u = S(0) -> p(u))")],
    )
    proved(
        sx.parse("f(a()) = f(b())"),
        [sx.parse("a() = b()")],
    )


def test_refuted_with_verified_countermodel():
    v = pv.prove(sx.parse("forall u. u = 0"), [], LIM)
    assert isinstance(v, Refuted)
    assert v.model.size >= 2
    assert pv.model_satisfies(v.model, [pv.neg(sx.parse("forall u. u = 0"))])


def test_unknown_on_budget_exhaustion():
    # true in the standard model but needing induction, which the
    # tableau does not have: must come back Unknown, never Refuted
    goal = sx.parse("forall u. forall w. (u + w) = (w + u)")
    bg = [
        sx.parse("forall u. (u + 0) = u"),
        sx.parse("forall u. forall w. (u + S(w)) = S((u + w))"),
    ]
    v = pv.prove(goal, bg, Limits(depth=4, node_budget=3_000, countermodels=False))
    assert isinstance(v, Unknown)


def test_prove_rejects_open_formulas():
    with pytest.raises(ValueError):
        pv.prove(sx.parse("x0 = 0"), [], LIM)


def test_check_proof_rejects_wrong_goal():
    p = proved(sx.parse("forall u. (p(u) | !(p(u)))"))
    assert not pv.check_proof(p, sx.parse("forall u. p(u)"), [])


def test_check_proof_rejects_tampered_proof():
    goal = sx.parse("(forall u. p(u)) -> p(0)")
    v = pv.prove(goal, [], NOCM)
    assert isinstance(v, Proved)
    # grafting a mismatched subtree must not check
    bad = pv.ProofNode("close", principal=sx.parse("0 = 0"))
    assert not pv.check_proof(bad, goal, [])


def test_derive_with_lemmas_builds_checked_cuts():
    lemma = sx.parse("forall u. (u + 0) = u")
    lemma_proof = proved(lemma, [lemma])  # trivially from itself as background
    goal = sx.parse("(S(0) + 0) = S(0)")
    p = pv.derive_with_lemmas(goal, [(lemma, lemma_proof)], [lemma], NOCM)
    assert p is not None
    assert p.rule == "cut"
    assert pv.check_proof(p, goal, [lemma])


def test_serialize_parse_round_trip():
    goal = sx.parse("(exists u. forall w. r(u, w)) -> forall w. exists u. r(u, w)")
    p = proved(goal)
    text = pv.serialize_proof(p)
    assert pv.parse_proof(text) == p
    assert pv.check_proof(pv.parse_proof(text), goal, [])


def test_gamma_and_delta_instances():
    f = sx.parse("forall u. p(u)")
    assert pv.is_gamma(f)
    assert pv.gamma_instance(f, Zero()) == sx.parse("p(0)")
    g = sx.parse("exists u. p(u)")
    assert pv.is_delta(g)
    assert pv.delta_instance(g, App("sk0", ())) == Pred("p", (App("sk0", ()),))


def test_instantiation_pool_contains_ground_subterms():
    pool = pv.instantiation_pool([sx.parse("p(S(0)) & q(0)")], cap=32)
    assert sx.num_term(1) in pool
    assert Zero() in pool


def test_pairing_pool_only_when_mentioned():
    plain = pv.instantiation_pool([sx.parse("forall u. p(u)")], cap=32)
    assert not any(isinstance(t, sx.Pair) for t in plain)
    paired = pv.instantiation_pool([sx.parse("forall u. p(<0, u>)")], cap=32)
    assert any(isinstance(t, sx.Pair) for t in paired)


def test_projection_guided_gamma_closes_conjunctive_pairing():
    # regression: a universal whose body projects its own bound variable
    # must try pair-shaped instances first, or conjunctive matrices
    # strand unclosable branches
    from omegacon import transforms as tf

    y = sx.parse("(x0 = x1) & (x1 = x2)")
    res = tf.pair_leading(y, "universal")
    (ob,) = res.obligations
    v = pv.discharge(ob, Limits(depth=16, node_budget=500_000, countermodels=False))
    assert isinstance(v, Proved)
    assert pv.check_proof(v.proof, ob.goal, [f for _, f in ob.background])


def test_branch_closes_on_direct_contradiction():
    assert pv.branch_closes([sx.parse("p(0)"), sx.parse("!(p(0))")])
    assert pv.branch_closes([sx.parse("!(0 = 0)")])
    assert not pv.branch_closes([sx.parse("p(0)"), sx.parse("q(0)")])


def test_branch_closes_modulo_congruence():
    assert pv.branch_closes(
        [sx.parse("a() = b()"), sx.parse("p(a())"), sx.parse("!(p(b()))")]
    )
