import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from omegacon import coding, syntax as sx
from omegacon.coding import CodingError, GoedelCode
from omegacon.syntax import And, Eq, Exists, Forall, Not, Var, Zero

from conftest import random_matrix


# ---------------------------------------------------------------------------
# the frozen token table


def test_token_table_is_total_and_injective():
    values = sorted(coding.TOKEN_TABLE.values())
    assert values == list(range(1, 64))  # every non-zero base-64 digit, once


def test_token_table_golden():
    expected = {
        "0": 1, "S": 2, "+": 3, "*": 4, "<,>": 5, "p0": 6, "p1": 7,
        "var": 8, "=": 9, "!": 10, "&": 11, "|": 12, "->": 13, "<->": 14,
        "forall": 15, "exists": 16, "app": 17, "pred": 18, "name-end": 19,
    }
    for key, tok in expected.items():
        assert coding.TOKEN_TABLE[key] == tok
    for k in range(8):
        assert coding.TOKEN_TABLE[f"arity-{k}"] == 20 + k
    for i, c in enumerate("abcdefghijklmnopqrstuvwxyz"):
        assert coding.TOKEN_TABLE[f"char-{c}"] == 28 + i
    for i in range(10):
        assert coding.TOKEN_TABLE[f"char-{i}"] == 54 + i


def test_token_table_matches_docs():
    doc = Path(__file__).resolve().parents[1] / "docs" / "token_table.md"
    text = doc.read_text()
    # every named token constant appears in the documented table
    for key in ("p0", "p1", "name-end", "arity-0", "arity-7", "MAX_ARITY = 7"):
        assert key.split(" =")[0] in text


def test_packed_code_goldens():
    assert coding.encode(sx.parse("0 = 0")).value == 299073
    assert coding.encode(sx.parse("x0 = 0")).value == 78530962625
    assert coding.encode_term(sx.num_term(1)).value == 4225
    assert coding.seq_encode([7, 9]).value == 521132


# ---------------------------------------------------------------------------
# round trips


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 4))
def test_encode_decode_round_trip(seed, arity, depth):
    rng = random.Random(seed)
    f = random_matrix(rng, arity, depth)
    assert coding.decode(coding.encode(f)) == f


def test_encode_decode_with_quantifiers_and_symbols():
    f = sx.parse("forall y. (nvar(S(0), y) -> exists x0. prov(subnum(y, x0)))")
    assert coding.decode(coding.encode(f)) == f


def test_term_codes_are_not_formula_codes():
    c = coding.encode_term(sx.num_term(3))
    with pytest.raises(CodingError):
        coding.decode(c)


def test_decode_rejects_garbage():
    for bad in (0, -5, 2, 64):
        with pytest.raises(CodingError):
            coding.decode(bad)


def test_name_restricted_to_lowercase_alnum():
    with pytest.raises(CodingError):
        coding.encode(sx.Pred("has_underscore", (Zero(),)))


def test_arity_cap():
    args = tuple(Zero() for _ in range(8))
    with pytest.raises(CodingError):
        coding.encode(sx.Pred("p", args))


def test_zero_is_never_a_code():
    assert coding.encode(sx.parse("0 = 0")).value != 0
    with pytest.raises(CodingError):
        GoedelCode(-1)


# ---------------------------------------------------------------------------
# sequence codes


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 2**20), max_size=6))
def test_seq_round_trip(items):
    s = coding.seq_encode(items)
    assert coding.seq_decode(s.value) == items
    assert s.length == len(items)


def test_projection_identity():
    assert coding.project(coding.seq_encode([7, 9]), 1) == 9
    with pytest.raises(CodingError):
        coding.project(coding.seq_encode([7, 9]), 2)


def test_empty_sequence():
    assert coding.seq_decode(coding.EMPTY_SEQUENCE.value) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cantor_pairing_round_trip(k):
    a, b = coding.unpair_nat(k)
    assert coding.pair_nat(a, b) == k


def test_cantor_pairing_known_values():
    assert coding.pair_nat(0, 0) == 0
    assert coding.unpair_nat(coding.pair_nat(3, 5)) == (3, 5)


# ---------------------------------------------------------------------------
# substitution on codes


def test_sub_matches_syntax_level_substitution():
    y = coding.encode(sx.parse("x0 = 0"))
    t = coding.seq_encode([coding.encode_term(sx.num_term(1)).value])
    assert coding.decode(coding.sub(y, t)) == sx.parse("S(0) = 0")


def test_sub_on_sentence_is_identity():
    y = coding.encode(sx.parse("0 = 0"))
    t = coding.seq_encode([coding.encode_term(Var("x0")).value])
    assert coding.sub(y, t) == y


def test_sub_applies_to_first_variables_only():
    y = coding.encode(sx.parse("x0 = x1"))
    t = coding.seq_encode([coding.encode_term(Var("z")).value])
    assert coding.decode(coding.sub(y, t)) == sx.parse("z = x1")


def test_s_num_composition():
    y = coding.encode(sx.parse("x0 = x1"))
    assert coding.decode(coding.s_num(y, [0, 2])) == sx.parse("0 = S(S(0))")
    y1 = coding.encode(sx.parse("x0 = 0"))
    assert coding.decode(coding.s_num(y1, [1])) == sx.parse("S(0) = 0")
    closed = coding.encode(sx.parse("0 = 0"))
    assert coding.s_num(closed, [5]) == closed


def test_dot_connectives():
    a = coding.encode(sx.parse("0 = 0"))
    b = coding.encode(sx.parse("x0 = x0"))
    assert coding.decode(coding.dot_connective("neg", a)) == Not(sx.parse("0 = 0"))
    assert coding.decode(coding.dot_connective("and", a, b)) == And(
        sx.parse("0 = 0"), sx.parse("x0 = x0")
    )
    with pytest.raises(CodingError):
        coding.dot_connective("neg", a, b)
    with pytest.raises(CodingError):
        coding.dot_connective("and", a)
    with pytest.raises(CodingError):
        coding.dot_connective("nand", a, b)


def test_dot_quant():
    y = coding.encode(sx.parse("x0 = x1"))
    q = sx.QuantifierArray.from_spec("AE")
    got = coding.dot_quant(q, ["x0", "x1"], y)
    assert coding.decode(got) == Forall("x0", Exists("x1", Eq(Var("x0"), Var("x1"))))
    with pytest.raises(CodingError):
        coding.dot_quant(q, ["x0"], y)


def test_numeral():
    assert coding.numeral(2) == coding.encode_term(sx.num_term(2))
