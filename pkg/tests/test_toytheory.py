import json

import pytest

from omegacon import coding, prover as pv, syntax as sx, toytheory as tt
from omegacon.prover import Limits, Proved, Unknown
from omegacon.syntax import Eq, Exists, Forall, Mul, Not, QuantifierArray, Var


A = QuantifierArray.from_spec
LIM = Limits(countermodels=False)


# ---------------------------------------------------------------------------
# the axiomatization and standard-model evaluation


def test_theories_are_named_and_extendable():
    base = tt.default_theory()
    table = tt.table_theory()
    assert len(table.axioms) > len(base.axioms)
    ext = base.extend([("extra", sx.parse("0 = 0"))])
    assert len(ext.axioms) == len(base.axioms) + 1
    assert ("extra", sx.parse("0 = 0")) in ext.axioms


def test_axioms_are_sentences():
    for _, f in tt.table_theory().axioms:
        assert sx.is_sentence(f)


def test_eval_nat_term():
    assert tt.eval_nat_term(sx.parse_term("(S(S(0)) + S(0))")) == 3
    assert tt.eval_nat_term(sx.parse_term("(S(S(0)) * S(S(S(0))))")) == 6
    assert tt.eval_nat_term(sx.parse_term("p0(<S(0), 0>)")) == 1
    assert tt.eval_nat_term(Var("x0"), {"x0": 5}) == 5


def test_bounded_eval_three_valued():
    assert tt.bounded_eval(sx.parse("(S(0) + S(0)) = S(S(0))"), 8) is True
    assert tt.bounded_eval(sx.parse("0 = S(0)"), 8) is False
    # bounded ranges: universals are never certified True,
    # existentials never certified False
    assert tt.bounded_eval(sx.parse("forall x0. x0 = x0"), 8) is None
    assert tt.bounded_eval(sx.parse("forall x0. x0 = 0"), 8) is False
    assert tt.bounded_eval(sx.parse("exists x0. x0 = S(S(0))"), 8) is True
    assert tt.bounded_eval(sx.parse("exists x0. !(x0 = x0)"), 8) is None


# ---------------------------------------------------------------------------
# proof search and the proof predicate


def test_pr_search_finds_ground_facts():
    c = coding.encode(sx.parse("(S(S(0)) + S(S(S(0)))) = S(S(S(S(S(0)))))"))
    v = tt.pr_search(c, LIM)
    assert isinstance(v, Proved)
    assert tt.prf(c, v.proof)


def test_pr_search_rejects_standard_model_falsehoods_fast():
    v = tt.pr_search(coding.encode(sx.parse("S(0) = S(S(0))")), LIM)
    assert isinstance(v, Unknown)
    assert "standard model" in v.resource


def test_pr_search_requires_sentences():
    v = tt.pr_search(coding.encode(sx.parse("x0 = 0")), LIM)
    assert isinstance(v, Unknown)
    assert "open formula" in v.resource


def test_prf_rejects_foreign_proofs():
    a = coding.encode(sx.parse("(0 + 0) = 0"))
    b = coding.encode(sx.parse("(0 + S(0)) = S(0)"))
    va = tt.pr_search(a, LIM)
    assert isinstance(va, Proved)
    assert tt.prf(a, va.proof)
    assert not tt.prf(b, va.proof)


def test_derivability_style_composition():
    phi = sx.parse("(0 + 0) = 0")
    psi = sx.parse("(S(0) * S(0)) = S(0)")
    p_phi = tt.prove_sentence(phi)
    p_imp = tt.prove_sentence(sx.Imp(phi, psi))
    assert p_phi is not None and p_imp is not None
    composed = tt.modus_ponens(sx.Imp(phi, psi), p_imp, p_phi)
    assert composed is not None
    assert tt.prf(coding.encode(psi), composed)


def test_exists_intro_and_forall_elim():
    y = sx.parse("(x0 + 0) = x0")
    inst = sx.substitute(y, "x0", sx.num_term(2))
    p = tt.prove_sentence(inst)
    lifted = tt.exists_intro(y, 2, p)
    assert lifted is not None
    assert tt.prf(coding.encode(Exists("x0", y)), lifted)

    closed = sx.parse("forall x0. (x0 + 0) = x0")
    p_all = tt.prove_sentence(closed)
    spec = tt.forall_elim(closed, p_all, 3)
    assert spec is not None
    assert tt.prf(coding.encode(sx.parse("(S(S(S(0))) + 0) = S(S(S(0)))")), spec)


def test_check_conditions_small_sample():
    rep = tt.check_conditions(samples=3, seed=7)
    assert rep.passed, rep.failures
    assert set(rep.results) == {"C1", "C2", "C3", "C4", "C6", "C7", "C8"}


# ---------------------------------------------------------------------------
# witnesses


def _simple_witness(bound=2):
    return tt.seed_witness(sx.parse("(x0 + 0) = x0"), A("A"), bound=bound)


def test_seed_witness_universal():
    w = _simple_witness()
    assert set(w.evidence) == {(0,), (1,), (2,)}
    assert tt.witness_check(w)
    assert w.extra_axioms[0][0] == "omega-inc-dual"


def test_seed_witness_existential_searches_values():
    # only x0 = 2 satisfies the matrix; the seeder must find it
    w = tt.seed_witness(sx.parse("x0 = S(S(0))"), A("E"), bound=3)
    assert (2,) in w.evidence
    assert tt.witness_check(w)


def test_seed_witness_fails_honestly():
    with pytest.raises(ValueError):
        tt.seed_witness(sx.parse("!(x0 = x0)"), A("E"), bound=2)


def test_witness_check_rejects_incomplete_pattern():
    w = _simple_witness()
    broken = {k: v for k, v in w.evidence.items() if k != (1,)}
    from dataclasses import replace

    assert not tt.witness_check(replace(w, evidence=broken))


def test_witness_check_rejects_swapped_proofs():
    w = _simple_witness()
    from dataclasses import replace

    swapped = dict(w.evidence)
    swapped[(0,)], swapped[(1,)] = swapped[(1,)], swapped[(0,)]
    assert not tt.witness_check(replace(w, evidence=swapped))


def test_transfer_pad_prefix():
    w = _simple_witness()
    w2 = tt.transfer_witness(w, "pad_prefix", extra=A("AE"))
    assert w2.array.spec() == "AEA"
    assert tt.witness_check(w2, tt.WitnessBounds(instance_range=16))


def test_transfer_pair_leading_universal_needs_table():
    w = _simple_witness()
    with pytest.raises(ValueError):
        tt.transfer_witness(w, "pair_leading_universal")


def test_transfer_pair_leading_universal():
    y = sx.parse("(x0 + x1) = (x1 + x0)")
    w = tt.seed_witness(y, A("AA"), bound=2, with_pair_table=True)
    w2 = tt.transfer_witness(w, "pair_leading_universal")
    assert w2.array.spec() == "A"
    # merged keys decode to recorded source pairs
    from omegacon.coding import unpair_nat

    for (m,) in w2.evidence:
        a, b = unpair_nat(m)
        assert (a, b) in w.evidence
    assert tt.witness_check(w2, tt.WitnessBounds(instance_range=4))


def test_transfer_absorb_trailing():
    y = Eq(Mul(Var("x0"), Var("x1")), sx.num_term(0))
    w = tt.seed_witness(y, A("AE"), bound=2)
    w2 = tt.transfer_witness(w, "absorb_trailing_exists")
    assert w2.array.spec() == "A"
    assert isinstance(w2.y, Exists)
    assert tt.witness_check(w2, tt.WitnessBounds(instance_range=8))


def test_transfer_fix_first():
    y = sx.parse("(x0 * x1) = x0")
    w = tt.seed_witness(y, A("EA"), bound=2)
    w2 = tt.transfer_witness(w, "fix_first_by_numeral")
    assert w2.array.spec() == "A"
    assert sx.free_vars(w2.y) == ["x1"]
    assert tt.witness_check(w2, tt.WitnessBounds(instance_range=8))


def test_transfer_rejects_mismatched_steps():
    w = _simple_witness()
    with pytest.raises(ValueError):
        tt.transfer_witness(w, "fix_first_by_numeral")
    with pytest.raises(ValueError):
        tt.transfer_witness(w, "absorb_trailing_exists")
    with pytest.raises(ValueError):
        tt.transfer_witness(w, "no_such_step")


# ---------------------------------------------------------------------------
# the falsum pipeline and witness files


def test_falsum_pipeline_round_trip():
    w = tt.seed_witness(sx.parse("x0 = 0"), A("E"), bound=2)
    p = tt.falsum_from_witness(w)
    assert p is not None
    assert pv.check_proof(p, sx.FALSUM, w.theory().formulas())
    w2 = tt.witness_from_falsum(p, extra_axioms=w.extra_axioms)
    assert tt.witness_check(w2)


def test_falsum_needs_single_existential():
    with pytest.raises(ValueError):
        tt.falsum_from_witness(_simple_witness())


def test_witness_json_round_trip():
    w = _simple_witness()
    text = tt.witness_to_json(w)
    doc = json.loads(text)
    assert doc["format"] == "omegacon-witness-v1"
    w2 = tt.witness_from_json(text)
    assert w2 == w
    assert tt.witness_check(w2)


def test_witness_json_rejects_other_formats():
    with pytest.raises(ValueError):
        tt.witness_from_json(json.dumps({"format": "something-else"}))
