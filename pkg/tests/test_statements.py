import pytest

from omegacon import coding, statements, syntax as sx
from omegacon.statements import DEFAULT_CONTEXT, ProvabilityContext
from omegacon.syntax import Forall, Imp, Pred, QuantifierArray, Var


A = QuantifierArray.from_spec

GOLDEN_SINGLE_UNIVERSAL = (
    "forall y. (nvar(S(0), y) -> ((forall x0. prov(subnum(y, x0))) -> "
    "!(prov(excx0(negc(subst(y, seqc(varcodex0()))))))))"
)


def test_single_universal_golden():
    st = statements.build_sentence(A("A"))
    assert sx.print_formula(st.sentence) == GOLDEN_SINGLE_UNIVERSAL


def test_sentence_is_closed_and_codes():
    for spec in ("A", "E", "AE", "AAE", "EAE"):
        st = statements.build_sentence(A(spec))
        assert sx.is_sentence(st.sentence)
        assert sx.free_vars(st.open_form) == ["y"]
        # the whole statement lives inside the coded object language
        assert coding.decode(coding.encode(st.sentence)) == st.sentence


def test_guard_carries_the_array_length():
    st = statements.build_sentence(A("AAE"))
    assert isinstance(st.sentence, Forall)
    guard = st.sentence.body.left
    assert guard == Pred("nvar", (sx.num_term(3), Var("y")))


def test_antecedent_follows_the_array():
    st = statements.build_sentence(A("AE"))
    text = sx.print_formula(st.open_form)
    assert text.startswith("((forall x0. exists x1. prov(subnum(y, x0, x1)))")


def test_consequent_uses_the_dual_array():
    # dual of AE is EA; code-level prefixing is emitted outermost-first
    st = statements.build_sentence(A("AE"))
    text = sx.print_formula(st.open_form)
    assert "excx0(allcx1(" in text


def test_empty_array_rejected():
    with pytest.raises(ValueError):
        statements.build_open(A(""))


def test_context_arity_validation():
    with pytest.raises(ValueError):
        ProvabilityContext(pr=sx.parse("prov(c, d)"), prf=DEFAULT_CONTEXT.prf)
    with pytest.raises(ValueError):
        ProvabilityContext(pr=DEFAULT_CONTEXT.pr, prf=sx.parse("prf(c)"))


def test_custom_context_substitutes_the_code_slot():
    ctx = ProvabilityContext(
        pr=sx.parse("exists p. prfa(c, p)"),
        prf=sx.parse("prfa(c, p)"),
        label="alt",
    )
    st = statements.build_sentence(A("A"), ctx)
    text = sx.print_formula(st.sentence)
    assert "prfa(subnum(y, x0)" in text
    assert "prov" not in text
